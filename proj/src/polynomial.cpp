#include "pvc/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pvc/errors.hpp"

namespace pvc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_abs_coeff(const CubicPolynomial& p) {
  return std::max(std::max(std::abs(p.c[0]), std::abs(p.c[1])),
                  std::max(std::abs(p.c[2]), std::abs(p.c[3])));
}

// Two guarded Newton steps; keeps the original root if a step does not
// reduce |p|.
double polish(const CubicPolynomial& p, const CubicPolynomial& dp, double r) {
  for (int it = 0; it < 2; ++it) {
    const double f = evaluate(p, r);
    const double g = evaluate(dp, r);
    if (g == 0.0) break;
    const double r2 = r - f / g;
    if (!std::isfinite(r2)) break;
    if (std::abs(evaluate(p, r2)) <= std::abs(f))
      r = r2;
    else
      break;
  }
  return r;
}

// Quadratic c2 x^2 + c1 x + c0 with c2 dominant.  A slightly negative
// discriminant within rounding of zero is treated as a double root.
void quadratic_roots(double c0, double c1, double c2, std::vector<Root>& out) {
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  const double scale = c1 * c1 + std::abs(4.0 * c2 * c0);
  const double tol = 1e-12 * scale;
  if (disc > tol) {
    const double s = std::sqrt(disc);
    const double q = -0.5 * (c1 + std::copysign(s, c1));
    double r0, r1;
    if (q != 0.0) {
      r0 = q / c2;
      r1 = c0 / q;
    } else {  // c1 == 0 and c0 == 0
      r0 = 0.0;
      r1 = 0.0;
    }
    out.push_back({r0, 1});
    out.push_back({r1, 1});
  } else if (disc >= -tol) {
    out.push_back({-c1 / (2.0 * c2), 2});
  }
}

// Monic cubic x^3 + a x^2 + b x + c, trigonometric/Cardano branches.
void cubic_roots_monic(double a, double b, double c, std::vector<Root>& out) {
  const double a2 = a * a;
  const double qn = (a2 - 3.0 * b) / 9.0;
  const double rn = (a * (2.0 * a2 - 9.0 * b) + 27.0 * c) / 54.0;
  const double rn2 = rn * rn;
  const double qn3 = qn * qn * qn;
  const double scale = rn2 + std::abs(qn3);
  const double tol = 1e-14 * scale;

  if (qn3 - rn2 > tol) {
    // three distinct real roots
    double t = rn / std::sqrt(qn3);
    t = std::clamp(t, -1.0, 1.0);
    const double theta = std::acos(t);
    const double f = -2.0 * std::sqrt(qn);
    out.push_back({f * std::cos(theta / 3.0) - a / 3.0, 1});
    out.push_back({f * std::cos((theta + 2.0 * kPi) / 3.0) - a / 3.0, 1});
    out.push_back({f * std::cos((theta - 2.0 * kPi) / 3.0) - a / 3.0, 1});
  } else if (rn2 - qn3 > tol) {
    // one real root, possibly a second if the conjugate pair collapses
    const double u3 = -rn - std::copysign(std::sqrt(rn2 - qn3), rn);
    const double u = std::cbrt(u3);
    const double v = (u == 0.0) ? 0.0 : qn / u;
    out.push_back({u + v - a / 3.0, 1});
    const double imag = 0.5 * std::sqrt(3.0) * std::abs(u - v);
    const double real = -0.5 * (u + v) - a / 3.0;
    if (imag <= kEpsRootScale * (1.0 + std::abs(real))) out.push_back({real, 2});
  } else {
    // boundary: repeated roots
    if (std::abs(qn) <= 1e-14 * (1.0 + a2)) {
      out.push_back({-a / 3.0, 3});
    } else {
      // double root t1 and simple root t2 = -2 t1 of the depressed cubic
      const double p_dep = b - a2 / 3.0;
      const double q_dep = (2.0 * a2 * a - 9.0 * a * b) / 27.0 + c;
      const double t1 = (p_dep != 0.0) ? -1.5 * q_dep / p_dep : 0.0;
      out.push_back({t1 - a / 3.0, 2});
      out.push_back({-2.0 * t1 - a / 3.0, 1});
    }
  }
}

}  // namespace

CubicPolynomial CubicPolynomial::from_roots(double r0, double r1, double r2) {
  return {-r0 * r1 * r2, r0 * r1 + r0 * r2 + r1 * r2, -(r0 + r1 + r2), 1.0};
}

int effective_degree(const CubicPolynomial& p) {
  const double m = max_abs_coeff(p);
  if (m < kEpsZeroPoly) return 0;
  const double floor = kEpsDegree * m;
  for (int k = 3; k >= 1; --k)
    if (std::abs(p.c[static_cast<std::size_t>(k)]) > floor) return k;
  return 0;
}

bool is_zero_polynomial(const CubicPolynomial& p) { return max_abs_coeff(p) < kEpsZeroPoly; }

double evaluate(const CubicPolynomial& p, double x) {
  return ((p.c[3] * x + p.c[2]) * x + p.c[1]) * x + p.c[0];
}

double evaluate_at_infinity(const CubicPolynomial& p) {
  const int d = effective_degree(p);
  if (d == 0) return p.c[0];
  const double lead = p.c[static_cast<std::size_t>(d)];
  return std::copysign(std::numeric_limits<double>::infinity(), lead);
}

CubicPolynomial derivative(const CubicPolynomial& p) {
  return {p.c[1], 2.0 * p.c[2], 3.0 * p.c[3], 0.0};
}

CubicPolynomial deflate(const CubicPolynomial& p, double r) {
  // quotient of synthetic division; remainder p(r) is dropped
  const double q2 = p.c[3];
  const double q1 = p.c[2] + r * q2;
  const double q0 = p.c[1] + r * q1;
  return {q0, q1, q2, 0.0};
}

RootList real_roots(const CubicPolynomial& p, double eps_root_scale) {
  if (is_zero_polynomial(p)) throw zero_polynomial_error("real_roots: zero polynomial");

  const int deg = effective_degree(p);
  std::vector<Root> raw;
  switch (deg) {
    case 0:
      break;
    case 1:
      raw.push_back({-p.c[0] / p.c[1], 1});
      break;
    case 2:
      quadratic_roots(p.c[0], p.c[1], p.c[2], raw);
      break;
    default:
      cubic_roots_monic(p.c[2] / p.c[3], p.c[1] / p.c[3], p.c[0] / p.c[3], raw);
      break;
  }

  const CubicPolynomial dp = derivative(p);
  for (Root& r : raw)
    if (r.multiplicity == 1) r.value = polish(p, dp, r.value);

  std::sort(raw.begin(), raw.end(), [](const Root& a, const Root& b) { return a.value < b.value; });

  RootList result;
  for (const Root& r : raw) {
    if (!result.roots.empty()) {
      Root& last = result.roots.back();
      if (r.value - last.value <= eps_root_scale * (1.0 + std::abs(r.value))) {
        last.multiplicity = std::min(3, last.multiplicity + r.multiplicity);
        continue;
      }
    }
    result.roots.push_back(r);
  }
  // clamp total multiplicity to the effective degree
  int total = result.total_multiplicity();
  for (auto it = result.roots.rbegin(); total > deg && it != result.roots.rend(); ++it) {
    const int drop = std::min(it->multiplicity - 1, total - deg);
    it->multiplicity -= drop;
    total -= drop;
  }
  return result;
}

DeflationResult deflate_common_roots(const CubicPolynomial& p, const CubicPolynomial& q,
                                     double eps_root_scale) {
  if (is_zero_polynomial(p) || is_zero_polynomial(q))
    throw zero_polynomial_error("deflate_common_roots: zero polynomial input");

  const RootList rp = real_roots(p, eps_root_scale);
  const RootList rq = real_roots(q, eps_root_scale);

  DeflationResult out{p, q, {}};
  for (const Root& qr : rq.roots) {
    for (const Root& pr : rp.roots) {
      if (std::abs(pr.value - qr.value) <= eps_root_scale * (1.0 + std::abs(qr.value))) {
        const int m = std::min(pr.multiplicity, qr.multiplicity);
        for (int k = 0; k < m; ++k) {
          out.p = deflate(out.p, qr.value);
          out.q = deflate(out.q, qr.value);
        }
        out.shared.roots.push_back({qr.value, m});
        break;
      }
    }
  }
  return out;
}

}  // namespace pvc
