#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace cuecorr {

// Catmull-Rom interpolation on a uniform grid; values outside the grid clamp
// to the boundary (callers arrange grids so the function is ~0 there).
class UniformGrid1D {
 public:
  UniformGrid1D() = default;
  UniformGrid1D(double lo, double hi, std::vector<double> values)
      : lo_(lo), hi_(hi), v_(std::move(values)) {
    step_ = (hi_ - lo_) / static_cast<double>(v_.size() - 1);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  double operator()(double x) const {
    const double s = (x - lo_) / step_;
    const auto n = static_cast<std::ptrdiff_t>(v_.size());
    auto i = static_cast<std::ptrdiff_t>(s);
    i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
    const double t = s - static_cast<double>(i);
    const double v0 = v_[std::max<std::ptrdiff_t>(i - 1, 0)];
    const double v1 = v_[i];
    const double v2 = v_[i + 1];
    const double v3 = v_[std::min<std::ptrdiff_t>(i + 2, n - 1)];
    return 0.5 * (2.0 * v1 + t * (-v0 + v2) +
                  t * t * (2.0 * v0 - 5.0 * v1 + 4.0 * v2 - v3) +
                  t * t * t * (-v0 + 3.0 * v1 - 3.0 * v2 + v3));
  }

 private:
  double lo_ = 0.0, hi_ = 1.0, step_ = 1.0;
  std::vector<double> v_;
};

// Separable Catmull-Rom on a uniform 2-d grid (row-major values).
class UniformGrid2D {
 public:
  UniformGrid2D() = default;
  UniformGrid2D(double lo0, double hi0, std::size_t n0, double lo1, double hi1,
                std::size_t n1, std::vector<double> values)
      : lo0_(lo0), lo1_(lo1), n0_(n0), n1_(n1), v_(std::move(values)) {
    step0_ = (hi0 - lo0) / static_cast<double>(n0 - 1);
    step1_ = (hi1 - lo1) / static_cast<double>(n1 - 1);
  }

  double operator()(double x0, double x1) const {
    const double s0 = (x0 - lo0_) / step0_;
    const double s1 = (x1 - lo1_) / step1_;
    auto i0 = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(s0), 0,
                                         static_cast<std::ptrdiff_t>(n0_) - 2);
    auto i1 = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(s1), 0,
                                         static_cast<std::ptrdiff_t>(n1_) - 2);
    const double t0 = s0 - static_cast<double>(i0);
    const double t1 = s1 - static_cast<double>(i1);
    double rows[4];
    for (int r = -1; r <= 2; ++r) {
      const auto j0 = std::clamp<std::ptrdiff_t>(
          i0 + r, 0, static_cast<std::ptrdiff_t>(n0_) - 1);
      rows[r + 1] = cr(at(j0, std::max<std::ptrdiff_t>(i1 - 1, 0)),
                       at(j0, i1), at(j0, i1 + 1),
                       at(j0, std::min<std::ptrdiff_t>(
                                  i1 + 2, static_cast<std::ptrdiff_t>(n1_) - 1)),
                       t1);
    }
    return cr(rows[0], rows[1], rows[2], rows[3], t0);
  }

 private:
  static double cr(double v0, double v1, double v2, double v3, double t) {
    return 0.5 * (2.0 * v1 + t * (-v0 + v2) +
                  t * t * (2.0 * v0 - 5.0 * v1 + 4.0 * v2 - v3) +
                  t * t * t * (-v0 + 3.0 * v1 - 3.0 * v2 + v3));
  }
  double at(std::ptrdiff_t i, std::ptrdiff_t j) const {
    return v_[static_cast<std::size_t>(i) * n1_ + static_cast<std::size_t>(j)];
  }

  double lo0_ = 0.0, lo1_ = 0.0, step0_ = 1.0, step1_ = 1.0;
  std::size_t n0_ = 2, n1_ = 2;
  std::vector<double> v_;
};

// Trilinear interpolation; used only where a fine grid keeps the bias small.
class UniformGrid3D {
 public:
  UniformGrid3D() = default;
  UniformGrid3D(double lo, double hi, std::size_t n, std::vector<double> values)
      : lo_(lo), n_(n), v_(std::move(values)) {
    step_ = (hi - lo) / static_cast<double>(n - 1);
  }

  double operator()(double x, double y, double z) const {
    double t[3], s[3] = {(x - lo_) / step_, (y - lo_) / step_,
                         (z - lo_) / step_};
    std::ptrdiff_t i[3];
    for (int d = 0; d < 3; ++d) {
      i[d] = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(s[d]), 0,
                                        static_cast<std::ptrdiff_t>(n_) - 2);
      t[d] = s[d] - static_cast<double>(i[d]);
    }
    double acc = 0.0;
    for (int dx = 0; dx < 2; ++dx)
      for (int dy = 0; dy < 2; ++dy)
        for (int dz = 0; dz < 2; ++dz) {
          const double w = (dx ? t[0] : 1 - t[0]) * (dy ? t[1] : 1 - t[1]) *
                           (dz ? t[2] : 1 - t[2]);
          acc += w * at(i[0] + dx, i[1] + dy, i[2] + dz);
        }
    return acc;
  }

 private:
  double at(std::ptrdiff_t x, std::ptrdiff_t y, std::ptrdiff_t z) const {
    return v_[(static_cast<std::size_t>(x) * n_ + static_cast<std::size_t>(y)) *
                  n_ +
              static_cast<std::size_t>(z)];
  }
  double lo_ = 0.0, step_ = 1.0;
  std::size_t n_ = 2;
  std::vector<double> v_;
};

}  // namespace cuecorr
