#ifndef PVC_INTERVALS_HPP
#define PVC_INTERVALS_HPP

#include <cmath>
#include <span>
#include <vector>

#include "pvc/polynomial.hpp"

namespace pvc {

struct TetPolynomials;

/// A point of the circle R ∪ {∞}: either a finite real or the single point at
/// infinity (the two signed infinities are identified).
class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by design

  static ExtendedReal infinity() {
    ExtendedReal e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinity() const { return infinite_; }
  /// Finite value; meaningless when is_infinity().
  double value() const { return value_; }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// One circular arc of the extended-real ring, traversed from lo to hi in the
/// direction of increasing λ (wrapping through ∞ when lo comes after hi).
/// Endpoints that are poles of the generating rational are open; endpoints
/// that are zeros of its numerator are closed.  contains_infinity is true
/// when ∞ lies in the arc, as interior point or as closed endpoint.
struct LambdaInterval {
  ExtendedReal lo;
  ExtendedReal hi;
  bool lo_closed = true;
  bool hi_closed = true;
  bool contains_infinity = false;

  bool contains(const ExtendedReal& x) const;
  bool is_point() const {
    return lo_closed && hi_closed && lo == hi && !(lo.is_infinity() && !contains_infinity);
  }
  /// True when both finite endpoints exist and the arc passes through ∞.
  bool wraps() const;
};

/// Disjoint union of circular arcs in canonical order (arcs reaching back
/// from/through ∞ first, then ascending by finite lower endpoint).
class LambdaIntervalSet {
 public:
  static LambdaIntervalSet empty() { return {}; }
  static LambdaIntervalSet full_circle() {
    LambdaIntervalSet s;
    s.full_ = true;
    return s;
  }

  bool is_empty() const { return !full_ && parts_.empty(); }
  bool is_full() const { return full_; }
  int components() const { return full_ ? 1 : static_cast<int>(parts_.size()); }
  const std::vector<LambdaInterval>& intervals() const { return parts_; }

  bool contains(const ExtendedReal& x) const;
  bool contains_infinity() const { return contains(ExtendedReal::infinity()); }

 private:
  bool full_ = false;
  std::vector<LambdaInterval> parts_;
  friend LambdaIntervalSet detail_from_linear(std::vector<LambdaInterval>&& parts, bool full);
};

namespace detail {

/// Interval of the real line; an endpoint at ±HUGE_VAL means the piece is
/// unbounded on that side (and the flag there is ignored).
struct LinearPiece {
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool lo_closed = false;
  bool hi_closed = false;
};

/// Line-plus-point decomposition of a circular set: pieces on R, and whether
/// the point ∞ itself belongs.
struct LinearForm {
  std::vector<LinearPiece> pieces;
  bool has_infinity = false;
};

LinearForm to_linear(const LambdaIntervalSet& s);
/// Sorts, merges overlapping/touching pieces, rejoins arcs through ∞.
LambdaIntervalSet from_linear(LinearForm f);

}  // namespace detail

/// Exact solution set of P(λ)/Q(λ) ≥ 0 over the extended-real circle by sign
/// table over the sorted roots.  Q-root endpoints come out open, P-root
/// endpoints closed; unbounded pieces join through ∞ when the value of the
/// rational at ∞ (ratio of effective leading coefficients, or 0 / pole on
/// degree mismatch) admits it.  Assumes common roots were already deflated.
/// The zero numerator yields the full circle.  Throws zero_denominator_error
/// when Q is the zero polynomial.
LambdaIntervalSet solve_inequality(const CubicPolynomial& P, const CubicPolynomial& Q,
                                   double eps_root_scale = kEpsRootScale);

LambdaIntervalSet intersect(const LambdaIntervalSet& a, const LambdaIntervalSet& b);
LambdaIntervalSet intersect(std::span<const LambdaIntervalSet> sets);

/// Feasible λ regions of a tetrahedron: intersection of the eight rational
/// inequalities P_i/Q ≥ 0 and (Q−P_i)/Q ≥ 0, each deflated against Q first.
/// Every connected component parameterizes one curve branch.  Throws
/// degenerate_error when the polynomials are degenerate.
LambdaIntervalSet feasible_regions(const TetPolynomials& tp,
                                   double eps_root_scale = kEpsRootScale);

}  // namespace pvc

#endif
