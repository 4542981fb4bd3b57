import math
import os
import subprocess

import pytest

import srcver


def test_cosine_and_scoring():
    assert srcver.l2_norm([1, 1, 1, 1]) == 2.0
    assert srcver.cosine_similarity([1, 1], [1, 0]) == pytest.approx(math.sqrt(2) / 2)
    assert srcver.score_trial([1, 0], [[1, 0], [0, 1]]) == 1.0
    assert srcver.score_trial([1, 0], [[1, 0], [0, 1]], agg="mean") == pytest.approx(0.5)
    with pytest.raises(srcver.SrcverError, match="ZeroVector"):
        srcver.cosine_similarity([0, 0], [1, 0])
    with pytest.raises(ValueError):
        srcver.score_trial([1, 0], [])


def test_metrics_fixture():
    scores = [0.8, 0.4, 0.6, 0.2]
    labels = [1, 1, 0, 0]
    assert srcver.compute_eer(scores, labels) == 50.0
    assert srcver.compute_auc(scores, labels) == 75.0
    roc = srcver.compute_roc(scores, labels)
    assert [(fpr, fnr) for _, fpr, fnr in roc] == [(0, 1), (0, 0.5), (0.5, 0.5), (0.5, 0), (1, 0)]


def test_audio_features_and_perturbation(tmp_path):
    tone = [0.5 * math.sin(2 * math.pi * 1000 * i / 16000) for i in range(24000)]
    path = tmp_path / "tone.wav"
    srcver.write_wav(str(path), tone)
    samples, rate = srcver.load_audio(str(path))
    assert rate == 16000 and len(samples) == 24000

    fixed = srcver.fix_segment(samples)
    assert len(fixed) == 64000 and fixed[30000] == samples[30000 - 24000]
    emb = srcver.extract_baseline_embedding(fixed)
    assert len(emb) == 128

    noisy = srcver.add_noise(samples, 20.0, 7)
    noise = sum((a - b) ** 2 for a, b in zip(noisy, samples)) / len(samples)
    signal = sum(a * a for a in samples) / len(samples)
    assert 10 * math.log10(signal / noise) == pytest.approx(20.0, abs=0.01)
    assert 15 <= srcver.draw_snr(15, 25, 1, 2) <= 25
    assert srcver.convolve_ir(samples, [1.0]) == samples


def test_simulation_and_protocol():
    rows, store = srcver.simulate_corpus(n_generators=3, tracks_per_generator=7, dim=8, seed=2)
    assert len(rows) == 21 and len(store) == 21
    membership, trials = srcver.generate_trials(rows, refs=5, seed=1)
    assert sorted(membership) == ["gen00", "gen01", "gen02"]
    assert all(len(ids) == 5 for ids in membership.values())
    enrolled = {i for ids in membership.values() for i in ids}
    assert all(q not in enrolled for q, _, _ in trials)
    assert len(trials) == 3 * 2 * 3


def test_cli_in_process_and_binary(tmp_path):
    code, out, _ = srcver.run_cli(["--help"])
    assert code == 0 and "simulate" in out
    assert srcver.run_cli(["run"])[0] == 1

    spec = tmp_path / "sim.json"
    spec.write_text('{"mode":"embedding","n_generators":4,"tracks_per_generator":8,"dim":16}')
    assert srcver.run_cli(["simulate", "--spec", str(spec), "--out-dir", str(tmp_path / "c")])[0] == 0

    binary = os.environ.get("SRCVER_CLI")
    if not binary:
        pytest.skip("SRCVER_CLI not set")
    result = subprocess.run(
        [binary, "--format", "json", "run", "--manifest", str(tmp_path / "c" / "manifest.csv"),
         "--store", str(tmp_path / "c" / "store.jsonl"), "--out-dir", str(tmp_path / "run")],
        capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    assert (tmp_path / "run" / "report.json").exists()
    missing = subprocess.run([binary, "metrics", "--scores", str(tmp_path / "none.csv"),
                              "--out", str(tmp_path / "r.json")], capture_output=True)
    assert missing.returncode == 3


def test_version():
    assert srcver.__version__ == "0.1.0"
