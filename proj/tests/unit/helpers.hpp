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

#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "srcver/error.hpp"

namespace testing {

template <typename Fn>
srcver::Errc code_of(Fn &&fn) {
  try {
    fn();
  } catch (const srcver::Error &e) {
    return e.code();
  }
  FAIL("expected srcver::Error");
  return srcver::Errc::kIoError;
}

template <typename Fn>
std::string message_of(Fn &&fn) {
  try {
    fn();
  } catch (const srcver::Error &e) {
    return e.what();
  }
  FAIL("expected srcver::Error");
  return {};
}

// Fresh, empty scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string &name) {
  const std::filesystem::path dir = std::filesystem::path(SRCVER_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace testing
