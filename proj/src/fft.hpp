// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace specinv::internal {

/// Real DFT of `in` (size n) into n / 2 + 1 bins, unnormalized.
void RealForward(std::span<const double> in, std::span<std::complex<double>> out);

/// Inverse of RealForward including the 1 / n factor. The imaginary parts of
/// the DC and (for even n) Nyquist bins are ignored.
void RealInverse(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace specinv::internal
