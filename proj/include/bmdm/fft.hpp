#pragma once

#include <vector>

#include "bmdm/types.hpp"

namespace bmdm {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Radix-2 transform plan. sign = +1 gives exp(+j 2*pi m k / n) (synthesis
// direction used by the range IDFT), sign = -1 the analysis direction.
// No normalization; callers scale as their definition requires.
class FftPlan {
 public:
  FftPlan(int n, int sign);

  int size() const { return n_; }

  void apply(Complex* data) const;

  void apply(Eigen::Ref<ComplexVector> data) const { apply(data.data()); }

 private:
  int n_;
  std::vector<int> bit_reversal_;
  std::vector<Complex> twiddles_;  // one per stage offset, sign baked in
};

// Direct O(n^2) evaluation of sum_m x[m] exp(sign j 2 pi m k / n), any n.
ComplexVector dft_direct(const ComplexVector& x, int sign);

}  // namespace bmdm
