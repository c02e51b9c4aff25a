#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace paracalc::fft {

// Forward real DFT, scaled by 1/n. Returns the half spectrum of size n/2+1;
// entry m is the coefficient of the mode with frequency index m.
std::vector<std::complex<double>> forward(const std::vector<double>& values);

// Inverse of forward(): reconstructs n real samples from a half spectrum,
// assuming Hermitian symmetry (imaginary parts at m=0 and m=n/2 are ignored).
std::vector<double> inverse(const std::vector<std::complex<double>>& spectrum,
                            std::size_t n);

// Unnormalized DST-I (sine transform on interior nodes). Self-inverse up to
// the factor 2*(len+1).
std::vector<double> dst1(const std::vector<double>& values);

} // namespace paracalc::fft
