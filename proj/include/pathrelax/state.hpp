#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace pathrelax {

// State vector with a fixed inline capacity. The systems treated here are
// small (m = 2 and m = 4 for the built-in models), so states live on the
// stack and the hot loops never allocate.
class StateVector {
public:
  static constexpr std::size_t kMaxComponents = 8;

  StateVector() = default;

  explicit StateVector(std::size_t m, double fill = 0.0) : size_(m) {
    assert(m <= kMaxComponents);
    for (std::size_t i = 0; i < m; ++i) comps_[i] = fill;
  }

  StateVector(std::initializer_list<double> values) : size_(values.size()) {
    assert(values.size() <= kMaxComponents);
    std::copy(values.begin(), values.end(), comps_.begin());
  }

  std::size_t size() const { return size_; }

  double& operator[](std::size_t i) {
    assert(i < size_);
    return comps_[i];
  }
  double operator[](std::size_t i) const {
    assert(i < size_);
    return comps_[i];
  }

  const double* begin() const { return comps_.data(); }
  const double* end() const { return comps_.data() + size_; }

  StateVector& operator+=(const StateVector& o) {
    assert(o.size_ == size_);
    for (std::size_t i = 0; i < size_; ++i) comps_[i] += o.comps_[i];
    return *this;
  }

  StateVector& operator-=(const StateVector& o) {
    assert(o.size_ == size_);
    for (std::size_t i = 0; i < size_; ++i) comps_[i] -= o.comps_[i];
    return *this;
  }

  StateVector& operator*=(double c) {
    for (std::size_t i = 0; i < size_; ++i) comps_[i] *= c;
    return *this;
  }

  bool all_finite() const {
    for (std::size_t i = 0; i < size_; ++i) {
      if (!std::isfinite(comps_[i])) return false;
    }
    return true;
  }

  double abs_max() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size_; ++i) m = std::max(m, std::fabs(comps_[i]));
    return m;
  }

private:
  std::array<double, kMaxComponents> comps_{};
  std::size_t size_ = 0;
};

inline StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
inline StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
inline StateVector operator*(double c, StateVector a) { return a *= c; }
inline StateVector operator*(StateVector a, double c) { return a *= c; }

// Dense row-major m x m matrix sharing the inline capacity of StateVector.
class SquareMatrix {
public:
  SquareMatrix() = default;

  explicit SquareMatrix(std::size_t n) : n_(n) {
    assert(n <= StateVector::kMaxComponents);
  }

  std::size_t dim() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < n_ && j < n_);
    return a_[i * n_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < n_ && j < n_);
    return a_[i * n_ + j];
  }

  void set_zero() { a_.fill(0.0); }

  // out += scale * (A x)
  void accumulate_product(const StateVector& x, double scale, StateVector& out) const {
    assert(x.size() == n_ && out.size() == n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n_; ++j) row += a_[i * n_ + j] * x[j];
      out[i] += scale * row;
    }
  }

private:
  std::array<double, StateVector::kMaxComponents * StateVector::kMaxComponents> a_{};
  std::size_t n_ = 0;
};

}  // namespace pathrelax
