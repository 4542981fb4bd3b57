// Copyright 2026  srcver authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "srcver/perturb.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "srcver/error.hpp"
#include "srcver/fft.hpp"
#include "srcver/rng.hpp"

namespace srcver {

namespace {

constexpr std::uint64_t kSnrStream = 11;
constexpr std::uint64_t kNoiseStream = 12;
constexpr std::uint64_t kIrStream = 13;

double peak_abs(std::span<const float> x) {
  double peak = 0.0;
  for (float v : x) peak = std::max(peak, std::abs(static_cast<double>(v)));
  return peak;
}

std::string shell_quote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

void replace_all(std::string &s, const std::string &from, const std::string &to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

double signal_power(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (float v : samples) sum += static_cast<double>(v) * v;
  return sum / static_cast<double>(samples.size());
}

double measured_snr_db(std::span<const float> clean, std::span<const float> noisy) {
  if (clean.size() != noisy.size())
    throw Error(Errc::kDimensionMismatch, "clips differ in length");
  double noise = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double d = static_cast<double>(noisy[i]) - clean[i];
    noise += d * d;
  }
  noise /= static_cast<double>(clean.size());
  return 10.0 * std::log10(signal_power(clean) / noise);
}

AudioClip add_noise(const AudioClip &clip, double snr_db, std::uint64_t seed) {
  const double ps = signal_power(clip.samples);
  if (!(ps > 0.0))
    throw Error(Errc::kSilentInput, "SNR is undefined for a silent clip");
  if (!std::isfinite(snr_db))
    throw Error(Errc::kInvalidArgument, "SNR must be finite");

  Rng rng(seed);
  std::vector<double> noise(clip.samples.size());
  double pn = 0.0;
  for (auto &n : noise) {
    n = rng.normal();
    pn += n * n;
  }
  pn /= static_cast<double>(noise.size());
  const double target = ps / std::pow(10.0, snr_db / 10.0);
  const double gain = std::sqrt(target / pn);

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(clip.samples.size());
  for (std::size_t i = 0; i < noise.size(); ++i)
    out.samples[i] = static_cast<float>(clip.samples[i] + gain * noise[i]);
  return out;
}

double draw_snr(double low, double high, std::uint64_t seed, std::uint64_t index) {
  if (!(low <= high))
    throw Error(Errc::kInvalidArgument, "SNR range must satisfy low <= high");
  if (low == high) return low;
  Rng rng(derive_seed(seed, kSnrStream, index));
  return low + (high - low) * rng.uniform();
}

std::vector<double> convolve_direct(std::span<const float> x, std::span<const float> h) {
  if (x.empty() || h.empty()) return {};
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += xi * h[j];
  }
  return y;
}

std::vector<double> convolve_fft(std::span<const float> x, std::span<const float> h) {
  if (x.empty() || h.empty()) return {};
  const std::size_t len = x.size() + h.size() - 1;
  const std::size_t n = next_pow2(len);
  std::vector<std::complex<double>> a(n), b(n);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  for (std::size_t i = 0; i < h.size(); ++i) b[i] = h[i];
  fft_inplace(a);
  fft_inplace(b);
  for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
  fft_inplace(a, /*inverse=*/true);
  std::vector<double> y(len);
  for (std::size_t i = 0; i < len; ++i) y[i] = a[i].real();
  return y;
}

AudioClip convolve_ir(const AudioClip &clip, const AudioClip &ir) {
  if (ir.samples.empty()) throw Error(Errc::kEmptyIR, "impulse response is empty");
  if (ir.sample_rate != clip.sample_rate)
    throw Error(Errc::kRateMismatch,
                "IR at " + std::to_string(ir.sample_rate) + " Hz, clip at " +
                    std::to_string(clip.sample_rate) + " Hz");
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (clip.samples.empty()) return out;

  const std::vector<double> full = ir.samples.size() > kDirectConvolutionMaxTaps
                                       ? convolve_fft(clip.samples, ir.samples)
                                       : convolve_direct(clip.samples, ir.samples);
  const std::size_t n = clip.samples.size();
  double peak_out = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak_out = std::max(peak_out, std::abs(full[i]));
  const double peak_in = peak_abs(clip.samples);
  const double gain = peak_out > 0.0 ? peak_in / peak_out : 0.0;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.samples[i] = static_cast<float>(full[i] * gain);
  return out;
}

AudioClip exponential_decay_ir(double rt60_seconds, std::size_t taps,
                               std::uint64_t seed, double direct_gain) {
  if (taps == 0 || !(rt60_seconds > 0.0))
    throw Error(Errc::kInvalidArgument, "IR needs taps > 0 and rt60 > 0");
  AudioClip ir;
  ir.samples.resize(taps);
  Rng rng(seed);
  // exp(-6.9078 t / rt60) reaches -60 dB at rt60.
  const double rate = std::log(1000.0) / (rt60_seconds * kSampleRate);
  double peak = std::abs(direct_gain);
  ir.samples[0] = static_cast<float>(direct_gain);
  for (std::size_t i = 1; i < taps; ++i) {
    const double v = 0.5 * rng.normal() * std::exp(-rate * static_cast<double>(i));
    ir.samples[i] = static_cast<float>(v);
    peak = std::max(peak, std::abs(v));
  }
  for (auto &s : ir.samples) s = static_cast<float>(s / peak);
  return ir;
}

AudioClip bandlimit_ir(double low_hz, double high_hz, std::size_t taps) {
  if (taps == 0 || !(low_hz >= 0.0) || !(high_hz > low_hz) ||
      high_hz > kSampleRate / 2.0)
    throw Error(Errc::kInvalidArgument, "band-pass needs 0 <= low < high <= 8 kHz");
  if (taps % 2 == 0) ++taps;
  AudioClip ir;
  ir.samples.resize(taps);
  const double mid = (taps - 1) / 2.0;
  const double f1 = low_hz / kSampleRate, f2 = high_hz / kSampleRate;
  for (std::size_t i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i) - mid;
    auto lowpass = [t](double fc) {
      return t == 0.0 ? 2.0 * fc
                      : std::sin(2.0 * std::numbers::pi * fc * t) / (std::numbers::pi * t);
    };
    const double w =
        taps == 1 ? 1.0
                  : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (taps - 1));
    ir.samples[i] = static_cast<float>((lowpass(f2) - lowpass(f1)) * w);
  }
  return ir;
}

AudioClip run_external(const AudioClip &clip, const std::string &command_template,
                       const std::filesystem::path &workdir) {
  if (command_template.find("{in}") == std::string::npos ||
      command_template.find("{out}") == std::string::npos)
    throw Error(Errc::kInvalidArgument,
                "command template needs {in} and {out} placeholders");
  static std::atomic<unsigned long> counter{0};
  const std::string stem = "srcver_ext_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter++);
  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  const auto in_path = workdir / (stem + "_in.wav");
  const auto out_path = workdir / (stem + "_out.wav");
  const auto err_path = workdir / (stem + "_stderr.txt");
  std::filesystem::remove(out_path, ec);

  struct Cleanup {
    std::vector<std::filesystem::path> paths;
    ~Cleanup() {
      std::error_code ignored;
      for (const auto &p : paths) std::filesystem::remove(p, ignored);
    }
  } cleanup{{in_path, out_path, err_path}};

  write_wav(in_path, clip, SampleFormat::kFloat32);
  std::string command = command_template;
  replace_all(command, "{in}", shell_quote(in_path.string()));
  replace_all(command, "{out}", shell_quote(out_path.string()));
  command = "( " + command + " ) < /dev/null > /dev/null 2> " +
            shell_quote(err_path.string());

  const int raw = std::system(command.c_str());
  const int status = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : 128 + WTERMSIG(raw));
  if (status != 0) {
    std::ifstream err(err_path);
    std::string excerpt((std::istreambuf_iterator<char>(err)),
                        std::istreambuf_iterator<char>());
    if (excerpt.size() > 200) excerpt.resize(200);
    while (!excerpt.empty() && (excerpt.back() == '\n' || excerpt.back() == '\r'))
      excerpt.pop_back();
    throw Error(Errc::kCommandFailed,
                "exit status " + std::to_string(status) + ": " + excerpt);
  }
  if (!std::filesystem::exists(out_path))
    throw Error(Errc::kOutputMissing, "tool wrote no output file");
  return load_audio(out_path, kSampleRate);
}

PerturbKind parse_perturb_kind(const std::string &text) {
  if (text == "noise") return PerturbKind::kNoise;
  if (text == "ir_convolve") return PerturbKind::kIrConvolve;
  if (text == "external") return PerturbKind::kExternal;
  throw Error(Errc::kInvalidArgument, "unknown perturbation kind '" + text + "'");
}

std::string to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::kNoise: return "noise";
    case PerturbKind::kIrConvolve: return "ir_convolve";
    case PerturbKind::kExternal: return "external";
  }
  return "noise";
}

void PerturbSpec::validate() const {
  switch (kind) {
    case PerturbKind::kNoise:
      if (!std::isfinite(snr_low_db) || !std::isfinite(snr_high_db) ||
          !(snr_low_db <= snr_high_db))
        throw Error(Errc::kInvalidArgument, "snr_db_range must be finite with low <= high");
      break;
    case PerturbKind::kIrConvolve:
      if (ir_paths.empty())
        throw Error(Errc::kInvalidArgument, "ir_convolve needs ir_path or ir_paths");
      break;
    case PerturbKind::kExternal:
      if (command_template.find("{in}") == std::string::npos ||
          command_template.find("{out}") == std::string::npos)
        throw Error(Errc::kInvalidArgument,
                    "command_template needs {in} and {out} placeholders");
      break;
  }
}

PerturbSpec parse_perturb_spec(const std::string &json_text,
                               const std::filesystem::path &base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::kMalformedRecord, std::string("perturb spec: ") + e.what());
  }
  PerturbSpec spec;
  try {
    spec.kind = parse_perturb_kind(j.at("kind").get<std::string>());
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("snr_db_range")) {
      const auto &r = j["snr_db_range"];
      if (!r.is_array() || r.size() != 2)
        throw Error(Errc::kInvalidArgument, "snr_db_range must be [low, high]");
      spec.snr_low_db = r[0].get<double>();
      spec.snr_high_db = r[1].get<double>();
    }
    auto resolve = [&](const std::string &p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    if (j.contains("ir_path")) spec.ir_paths.push_back(resolve(j["ir_path"].get<std::string>()));
    if (j.contains("ir_paths"))
      for (const auto &p : j["ir_paths"]) spec.ir_paths.push_back(resolve(p.get<std::string>()));
    if (j.contains("command_template"))
      spec.command_template = j["command_template"].get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::kInvalidArgument, std::string("perturb spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

PerturbSpec read_perturb_spec(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_perturb_spec(buf.str(), path.parent_path());
}

std::string perturb_spec_json(const PerturbSpec &spec) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(spec.kind);
  j["seed"] = spec.seed;
  switch (spec.kind) {
    case PerturbKind::kNoise:
      j["snr_db_range"] = {spec.snr_low_db, spec.snr_high_db};
      break;
    case PerturbKind::kIrConvolve: {
      auto paths = nlohmann::json::array();
      for (const auto &p : spec.ir_paths) paths.push_back(p.filename().string());
      j["ir_paths"] = paths;
      break;
    }
    case PerturbKind::kExternal:
      j["command_template"] = spec.command_template;
      break;
  }
  return j.dump();
}

PerturbOutcome apply_perturbation(const AudioClip &clip, const PerturbSpec &spec,
                                  std::uint64_t index,
                                  std::span<const AudioClip> irs,
                                  const std::filesystem::path &workdir) {
  PerturbOutcome outcome;
  switch (spec.kind) {
    case PerturbKind::kNoise: {
      const double snr = draw_snr(spec.snr_low_db, spec.snr_high_db, spec.seed, index);
      outcome.snr_db = snr;
      outcome.clip = add_noise(clip, snr, derive_seed(spec.seed, kNoiseStream, index));
      break;
    }
    case PerturbKind::kIrConvolve: {
      if (irs.empty() || irs.size() != spec.ir_paths.size())
        throw Error(Errc::kInvalidArgument, "loaded IRs do not match the spec");
      std::size_t pick = 0;
      if (irs.size() > 1) {
        Rng rng(derive_seed(spec.seed, kIrStream, index));
        pick = rng.below(irs.size());
      }
      outcome.ir_path = spec.ir_paths[pick].filename().string();
      outcome.clip = convolve_ir(clip, irs[pick]);
      break;
    }
    case PerturbKind::kExternal:
      outcome.clip = run_external(clip, spec.command_template, workdir);
      break;
  }
  return outcome;
}

}  // namespace srcver
