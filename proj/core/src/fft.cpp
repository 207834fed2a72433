#include "har/fft.hpp"

#include <cmath>
#include <numbers>

namespace har::features {

namespace {

using cd = std::complex<double>;

int smallest_factor(int n) {
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

// Direct O(n^2) DFT, used for prime lengths at the recursion leaves.
void dft_direct(const std::vector<cd>& in, std::vector<cd>& out) {
  const int n = static_cast<int>(in.size());
  out.assign(n, cd{});
  for (int k = 0; k < n; ++k) {
    cd acc{};
    for (int t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * k * t / n;
      acc += in[t] * cd{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc;
  }
}

void fft_rec(std::vector<cd>& a) {
  const int n = static_cast<int>(a.size());
  if (n <= 1) return;
  const int p = smallest_factor(n);
  if (p == n) {
    std::vector<cd> out;
    dft_direct(a, out);
    a = std::move(out);
    return;
  }
  const int m = n / p;
  // Decimate into p sub-sequences, transform each, then combine.
  std::vector<std::vector<cd>> sub(p, std::vector<cd>(m));
  for (int t = 0; t < n; ++t) sub[t % p][t / p] = a[t];
  for (auto& s : sub) fft_rec(s);

  for (int k = 0; k < n; ++k) {
    cd acc{};
    for (int r = 0; r < p; ++r) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(r) * k / n;
      acc += sub[r][k % m] * cd{std::cos(ang), std::sin(ang)};
    }
    a[k] = acc;
  }
}

}  // namespace

void fft(std::vector<cd>& data) { fft_rec(data); }

std::vector<double> fft_amplitude(const std::vector<double>& window) {
  const int n = static_cast<int>(window.size());
  std::vector<cd> buf(window.begin(), window.end());
  fft(buf);
  std::vector<double> mag(n / 2);
  for (int k = 0; k < n / 2; ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

}  // namespace har::features
