#pragma once

#include "pathrelax/state.hpp"

namespace pathrelax {

// A family of paths connecting pairs of states: a Lipschitz map
// phi(s; w_l, w_r) on s in [0, 1] with phi(0) = w_l and phi(1) = w_r.
// Implementations must also satisfy dphi_ds(s; w, w) = 0.
class PathFamily {
public:
  virtual ~PathFamily() = default;

  virtual void phi(double s, const StateVector& w_l, const StateVector& w_r,
                   StateVector& out) const = 0;

  virtual void dphi_ds(double s, const StateVector& w_l, const StateVector& w_r,
                       StateVector& out) const = 0;

  // True only for the straight-segment family. Models may substitute
  // closed-form path integrals when this holds.
  virtual bool is_segment_family() const { return false; }
};

// phi(s; w_l, w_r) = w_l + s (w_r - w_l), the default family.
class SegmentPath final : public PathFamily {
public:
  void phi(double s, const StateVector& w_l, const StateVector& w_r,
           StateVector& out) const override {
    // Endpoints are returned verbatim so that phi(0) = w_l and phi(1) = w_r
    // hold exactly in floating point.
    if (s == 0.0) {
      out = w_l;
    } else if (s == 1.0) {
      out = w_r;
    } else {
      out = w_l;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * (w_r[i] - w_l[i]);
    }
  }

  void dphi_ds(double /*s*/, const StateVector& w_l, const StateVector& w_r,
               StateVector& out) const override {
    out = w_r;
    out -= w_l;
  }

  bool is_segment_family() const override { return true; }
};

// The reverse family phi~(s; w1, w2) = phi(1 - s; w2, w1) with the
// chain-rule derivative -dphi_ds(1 - s; w2, w1). Holds a reference to the
// base family; the caller keeps it alive.
class ReversedPath final : public PathFamily {
public:
  explicit ReversedPath(const PathFamily& base) : base_(base) {}

  void phi(double s, const StateVector& w_l, const StateVector& w_r,
           StateVector& out) const override {
    base_.phi(1.0 - s, w_r, w_l, out);
  }

  void dphi_ds(double s, const StateVector& w_l, const StateVector& w_r,
               StateVector& out) const override {
    base_.dphi_ds(1.0 - s, w_r, w_l, out);
    out *= -1.0;
  }

private:
  const PathFamily& base_;
};

inline ReversedPath reverse_family(const PathFamily& base) { return ReversedPath(base); }

// Shared stateless instance of the default family.
inline const SegmentPath& segment_path() {
  static const SegmentPath path;
  return path;
}

}  // namespace pathrelax
