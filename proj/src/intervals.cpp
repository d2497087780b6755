#include "pvc/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "pvc/eigensystem.hpp"
#include "pvc/errors.hpp"

namespace pvc {

bool LambdaInterval::wraps() const {
  return !lo.is_infinity() && !hi.is_infinity() && contains_infinity;
}

bool LambdaInterval::contains(const ExtendedReal& x) const {
  if (x.is_infinity()) return contains_infinity;
  const double v = x.value();

  if (lo.is_infinity() && hi.is_infinity()) {
    // either the singleton {∞} or the ∞-punctured circle
    return !contains_infinity;
  }
  const auto above_lo = [&] { return v > lo.value() || (lo_closed && v == lo.value()); };
  const auto below_hi = [&] { return v < hi.value() || (hi_closed && v == hi.value()); };

  if (lo.is_infinity()) return below_hi();
  if (hi.is_infinity()) return above_lo();
  if (contains_infinity) return above_lo() || below_hi();
  return above_lo() && below_hi();
}

bool LambdaIntervalSet::contains(const ExtendedReal& x) const {
  if (full_) return true;
  for (const LambdaInterval& p : parts_)
    if (p.contains(x)) return true;
  return false;
}

LambdaIntervalSet detail_from_linear(std::vector<LambdaInterval>&& parts, bool full) {
  LambdaIntervalSet s;
  s.full_ = full;
  if (!full) s.parts_ = std::move(parts);
  return s;
}

namespace detail {

namespace {

bool piece_empty(const LinearPiece& p) {
  if (p.lo > p.hi) return true;
  if (p.lo == p.hi) return !(std::isfinite(p.lo) && p.lo_closed && p.hi_closed);
  return false;
}

// hi endpoint order: larger value wins; at equal values closed covers more
bool hi_less(double av, bool ac, double bv, bool bc) {
  if (av != bv) return av < bv;
  return !ac && bc;
}

}  // namespace

LinearForm to_linear(const LambdaIntervalSet& s) {
  LinearForm f;
  if (s.is_full()) {
    f.pieces.push_back({-HUGE_VAL, HUGE_VAL, false, false});
    f.has_infinity = true;
    return f;
  }
  for (const LambdaInterval& p : s.intervals()) {
    const bool lo_inf = p.lo.is_infinity();
    const bool hi_inf = p.hi.is_infinity();
    if (lo_inf && hi_inf) {
      if (p.contains_infinity)
        f.has_infinity = true;  // singleton {∞}
      else
        f.pieces.push_back({-HUGE_VAL, HUGE_VAL, false, false});
    } else if (lo_inf) {
      f.pieces.push_back({-HUGE_VAL, p.hi.value(), false, p.hi_closed});
      f.has_infinity = f.has_infinity || p.contains_infinity;
    } else if (hi_inf) {
      f.pieces.push_back({p.lo.value(), HUGE_VAL, p.lo_closed, false});
      f.has_infinity = f.has_infinity || p.contains_infinity;
    } else if (p.contains_infinity) {
      f.pieces.push_back({p.lo.value(), HUGE_VAL, p.lo_closed, false});
      f.pieces.push_back({-HUGE_VAL, p.hi.value(), false, p.hi_closed});
      f.has_infinity = true;
    } else {
      f.pieces.push_back({p.lo.value(), p.hi.value(), p.lo_closed, p.hi_closed});
    }
  }
  return f;
}

LambdaIntervalSet from_linear(LinearForm f) {
  auto& ps = f.pieces;
  ps.erase(std::remove_if(ps.begin(), ps.end(), piece_empty), ps.end());
  std::sort(ps.begin(), ps.end(), [](const LinearPiece& a, const LinearPiece& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });

  std::vector<LinearPiece> merged;
  for (const LinearPiece& p : ps) {
    if (!merged.empty()) {
      LinearPiece& cur = merged.back();
      const bool overlap =
          p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
      if (overlap) {
        if (hi_less(cur.hi, cur.hi_closed, p.hi, p.hi_closed)) {
          cur.hi = p.hi;
          cur.hi_closed = p.hi_closed;
        }
        continue;
      }
    }
    merged.push_back(p);
  }

  std::vector<LambdaInterval> parts;
  const LinearPiece* lower = nullptr;  // reaches -inf
  const LinearPiece* upper = nullptr;  // reaches +inf
  for (const LinearPiece& p : merged) {
    if (p.lo == -HUGE_VAL && p.hi == HUGE_VAL) {
      if (f.has_infinity) return LambdaIntervalSet::full_circle();
      LambdaInterval ring;
      ring.lo = ExtendedReal::infinity();
      ring.hi = ExtendedReal::infinity();
      ring.lo_closed = ring.hi_closed = false;
      ring.contains_infinity = false;
      return detail_from_linear({ring}, false);
    }
    if (p.lo == -HUGE_VAL)
      lower = &p;
    else if (p.hi == HUGE_VAL)
      upper = &p;
  }

  for (const LinearPiece& p : merged) {
    if (&p == lower || &p == upper) continue;
    LambdaInterval iv;
    iv.lo = p.lo;
    iv.hi = p.hi;
    iv.lo_closed = p.lo_closed;
    iv.hi_closed = p.hi_closed;
    parts.push_back(iv);
  }

  if (f.has_infinity) {
    LambdaInterval iv;
    iv.contains_infinity = true;
    if (lower && upper) {
      if (upper->lo == lower->hi && (upper->lo_closed || lower->hi_closed))
        return LambdaIntervalSet::full_circle();
      iv.lo = upper->lo;
      iv.hi = lower->hi;
      iv.lo_closed = upper->lo_closed;
      iv.hi_closed = lower->hi_closed;
    } else if (upper) {
      iv.lo = upper->lo;
      iv.hi = ExtendedReal::infinity();
      iv.lo_closed = upper->lo_closed;
      iv.hi_closed = true;
    } else if (lower) {
      iv.lo = ExtendedReal::infinity();
      iv.hi = lower->hi;
      iv.lo_closed = true;
      iv.hi_closed = lower->hi_closed;
    } else {
      iv.lo = ExtendedReal::infinity();
      iv.hi = ExtendedReal::infinity();
      iv.lo_closed = iv.hi_closed = true;
    }
    parts.push_back(iv);
  } else {
    if (lower) {
      LambdaInterval iv;
      iv.lo = ExtendedReal::infinity();
      iv.hi = lower->hi;
      iv.lo_closed = false;
      iv.hi_closed = lower->hi_closed;
      parts.push_back(iv);
    }
    if (upper) {
      LambdaInterval iv;
      iv.lo = upper->lo;
      iv.hi = ExtendedReal::infinity();
      iv.lo_closed = upper->lo_closed;
      iv.hi_closed = false;
      parts.push_back(iv);
    }
  }

  // canonical circular order: the arc holding/leaving ∞ first, then by lo
  std::sort(parts.begin(), parts.end(), [](const LambdaInterval& a, const LambdaInterval& b) {
    const bool a_first = a.lo.is_infinity() || a.contains_infinity;
    const bool b_first = b.lo.is_infinity() || b.contains_infinity;
    if (a_first != b_first) return a_first;
    const double av = a.lo.is_infinity() ? -HUGE_VAL : a.lo.value();
    const double bv = b.lo.is_infinity() ? -HUGE_VAL : b.lo.value();
    return av < bv;
  });
  return detail_from_linear(std::move(parts), false);
}

}  // namespace detail

LambdaIntervalSet intersect(const LambdaIntervalSet& a, const LambdaIntervalSet& b) {
  if (a.is_full()) return b;
  if (b.is_full()) return a;
  const detail::LinearForm fa = detail::to_linear(a);
  const detail::LinearForm fb = detail::to_linear(b);

  detail::LinearForm out;
  out.has_infinity = fa.has_infinity && fb.has_infinity;
  for (const auto& pa : fa.pieces)
    for (const auto& pb : fb.pieces) {
      detail::LinearPiece p;
      if (pa.lo != pb.lo) {
        p = pa.lo > pb.lo ? detail::LinearPiece{pa.lo, 0, pa.lo_closed, false}
                          : detail::LinearPiece{pb.lo, 0, pb.lo_closed, false};
      } else {
        p.lo = pa.lo;
        p.lo_closed = pa.lo_closed && pb.lo_closed;
      }
      if (pa.hi != pb.hi) {
        const auto& src = pa.hi < pb.hi ? pa : pb;
        p.hi = src.hi;
        p.hi_closed = src.hi_closed;
      } else {
        p.hi = pa.hi;
        p.hi_closed = pa.hi_closed && pb.hi_closed;
      }
      out.pieces.push_back(p);
    }
  return detail::from_linear(std::move(out));
}

LambdaIntervalSet intersect(std::span<const LambdaIntervalSet> sets) {
  LambdaIntervalSet acc = LambdaIntervalSet::full_circle();
  for (const LambdaIntervalSet& s : sets) {
    acc = intersect(acc, s);
    if (acc.is_empty()) break;
  }
  return acc;
}

namespace {

struct Boundary {
  double value;
  bool q_root;
};

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace

LambdaIntervalSet solve_inequality(const CubicPolynomial& P, const CubicPolynomial& Q,
                                   double eps_root_scale) {
  if (is_zero_polynomial(Q)) throw zero_denominator_error("solve_inequality: Q is zero");
  if (is_zero_polynomial(P)) return LambdaIntervalSet::full_circle();

  const RootList rp = real_roots(P, eps_root_scale);
  const RootList rq = real_roots(Q, eps_root_scale);

  std::vector<Boundary> bounds;
  for (const Root& r : rq.roots) bounds.push_back({r.value, true});
  for (const Root& r : rp.roots) {
    bool near_pole = false;
    for (const Root& q : rq.roots)
      if (std::abs(r.value - q.value) <= eps_root_scale * (1.0 + std::abs(q.value))) {
        near_pole = true;
        break;
      }
    if (!near_pole) bounds.push_back({r.value, false});
  }
  std::sort(bounds.begin(), bounds.end(),
            [](const Boundary& a, const Boundary& b) { return a.value < b.value; });

  // value of P/Q at the point ∞
  const int dp = effective_degree(P);
  const int dq = effective_degree(Q);
  bool inf_included;
  if (dp < dq)
    inf_included = true;  // limit 0
  else if (dp > dq)
    inf_included = false;  // pole
  else
    inf_included = (P[dp] / Q[dq]) > 0.0;

  detail::LinearForm form;
  form.has_infinity = inf_included;

  const auto ratio_nonneg = [&](double x) {
    return sign_of(evaluate(P, x)) * sign_of(evaluate(Q, x)) > 0;
  };

  if (bounds.empty()) {
    if (ratio_nonneg(0.0)) form.pieces.push_back({-HUGE_VAL, HUGE_VAL, false, false});
    return detail::from_linear(std::move(form));
  }

  double far = 0.0;
  for (const Boundary& b : bounds) far = std::max(far, std::abs(b.value));
  far = 1.0 + 2.0 * far;

  const std::size_t n = bounds.size();
  for (std::size_t i = 0; i <= n; ++i) {
    const double lo = (i == 0) ? -HUGE_VAL : bounds[i - 1].value;
    const double hi = (i == n) ? HUGE_VAL : bounds[i].value;
    const double probe = (i == 0) ? -far : (i == n) ? far : 0.5 * (lo + hi);
    if (ratio_nonneg(probe)) form.pieces.push_back({lo, hi, false, false});
  }
  // zeros of the rational are always solutions; merging attaches them to
  // any adjacent open piece
  for (const Boundary& b : bounds)
    if (!b.q_root) form.pieces.push_back({b.value, b.value, true, true});

  return detail::from_linear(std::move(form));
}

LambdaIntervalSet feasible_regions(const TetPolynomials& tp, double eps_root_scale) {
  if (tp.degenerate_flag != TetDegeneracy::None)
    throw degenerate_error("feasible_regions: degenerate tetrahedron polynomials");

  LambdaIntervalSet acc = LambdaIntervalSet::full_circle();
  for (int i = 0; i < 4 && !acc.is_empty(); ++i) {
    const CubicPolynomial numerators[2] = {tp.P(i), tp.Q - tp.P(i)};
    for (const CubicPolynomial& num : numerators) {
      if (is_zero_polynomial(num)) continue;  // the constraint holds identically
      const DeflationResult d = deflate_common_roots(num, tp.Q, eps_root_scale);
      acc = intersect(acc, solve_inequality(d.p, d.q, eps_root_scale));
      if (acc.is_empty()) break;
    }
  }
  return acc;
}

}  // namespace pvc
