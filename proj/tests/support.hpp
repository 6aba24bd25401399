#pragma once

#include "varicurve/geometry.hpp"
#include "varicurve/random.hpp"

#include <Eigen/QR>

#include <cstdint>

namespace testing {

using varicurve::Mat;
using varicurve::Vec;

// Sequential draws from a counter-based stream.
class Draws {
 public:
  explicit Draws(std::uint64_t stream, std::uint64_t seed = 2024) : rng_(seed, stream) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * rng_.uniform(counter_++); }
  double normal() { return rng_.normal(counter_++); }
  std::uint64_t bits() { return rng_.bits(counter_++); }

  Mat gaussian(int rows, int cols) {
    Mat m(rows, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) m(r, c) = normal();
    }
    return m;
  }

  Mat orthonormal(int n, int k) {
    Eigen::HouseholderQR<Mat> qr(gaussian(n, k));
    return qr.householderQ() * Mat::Identity(n, k);
  }

  Mat rotation(int n) {
    Mat q = orthonormal(n, n);
    if (q.determinant() < 0.0) q.col(0) = -q.col(0);
    return q;
  }

 private:
  varicurve::CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace testing
