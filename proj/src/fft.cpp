#include "bmdm/fft.hpp"

#include <cassert>
#include <cmath>

namespace bmdm {

FftPlan::FftPlan(int n, int sign) : n_(n) {
  assert(is_power_of_two(n));
  assert(sign == 1 || sign == -1);

  bit_reversal_.resize(n);
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (1 << b)) r |= 1 << (bits - 1 - b);
    }
    bit_reversal_[i] = r;
  }

  // Table of exp(sign j 2 pi k / n) for k < n/2, computed per entry so
  // twiddle accuracy does not drift with n.
  twiddles_.resize(n / 2 > 0 ? n / 2 : 1);
  for (int k = 0; k < n / 2; ++k) {
    const double ang = sign * kTwoPi * static_cast<double>(k) / n;
    twiddles_[k] = Complex(std::cos(ang), std::sin(ang));
  }
}

void FftPlan::apply(Complex* data) const {
  const int n = n_;
  for (int i = 0; i < n; ++i) {
    const int r = bit_reversal_[i];
    if (r > i) std::swap(data[i], data[r]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len >> 1;
    const int stride = n / len;
    for (int start = 0; start < n; start += len) {
      for (int k = 0; k < half; ++k) {
        const Complex w = twiddles_[k * stride];
        const Complex even = data[start + k];
        const Complex odd = data[start + k + half] * w;
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

ComplexVector dft_direct(const ComplexVector& x, int sign) {
  const int n = static_cast<int>(x.size());
  ComplexVector out(n);
  for (int k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (int m = 0; m < n; ++m) {
      const double ang = sign * kTwoPi * static_cast<double>(m) * k / n;
      acc += x[m] * Complex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace bmdm
