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

#include <complex>
#include <span>
#include <vector>

namespace srcver {

// In-place iterative radix-2 FFT. The size must be a power of two. Twiddles
// are computed directly per stage (no recurrence), and the operation order is
// fixed, so results are reproducible bit-for-bit for a given libm.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

std::size_t next_pow2(std::size_t n);

// |X[k]| for k = 0..n/2 of the zero-padded real frame; n is a power of two.
std::vector<double> magnitude_spectrum(std::span<const double> frame,
                                       std::size_t n);

}  // namespace srcver
