#pragma once

#include <complex>
#include <vector>

namespace har::features {

// In-place complex DFT via recursive mixed-radix Cooley-Tukey; any length
// whose prime factors are small works (length 100 = 2*2*5*5 here). Lengths
// with a large prime factor fall back to the direct transform for that
// factor.
void fft(std::vector<std::complex<double>>& data);

// Magnitudes of DFT bins 0..n/2-1 of a real window. No tapering window is
// applied.
std::vector<double> fft_amplitude(const std::vector<double>& window);

}  // namespace har::features
