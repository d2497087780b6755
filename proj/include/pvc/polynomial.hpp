#ifndef PVC_POLYNOMIAL_HPP
#define PVC_POLYNOMIAL_HPP

#include <array>
#include <vector>

namespace pvc {

// Relative floor below which a coefficient does not count toward the degree.
inline constexpr double kEpsDegree = 1e-10;
// Absolute floor below which the whole polynomial is the zero polynomial.
inline constexpr double kEpsZeroPoly = 1e-300;
// Roots within kEpsRootScale*(1+|r|) of each other are one root.
inline constexpr double kEpsRootScale = 1e-8;

/// Real polynomial of degree at most three, p(x) = c[3]x^3 + c[2]x^2 + c[1]x + c[0].
struct CubicPolynomial {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  CubicPolynomial() = default;
  CubicPolynomial(double c0, double c1, double c2, double c3) : c{c0, c1, c2, c3} {}

  static CubicPolynomial constant(double v) { return {v, 0.0, 0.0, 0.0}; }
  /// (x - r)
  static CubicPolynomial monic_linear(double r) { return {-r, 1.0, 0.0, 0.0}; }
  /// (x - r0)(x - r1)(x - r2)
  static CubicPolynomial from_roots(double r0, double r1, double r2);

  double operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c[static_cast<std::size_t>(k)]; }

  CubicPolynomial operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }
  CubicPolynomial operator+(const CubicPolynomial& o) const {
    return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]};
  }
  CubicPolynomial operator-(const CubicPolynomial& o) const {
    return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]};
  }
  CubicPolynomial operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s, c[3] * s}; }
};

struct Root {
  double value = 0.0;
  int multiplicity = 1;
};

/// Real roots in strictly ascending order; multiplicities sum to at most the
/// effective degree.
struct RootList {
  std::vector<Root> roots;

  int total_multiplicity() const {
    int m = 0;
    for (const Root& r : roots) m += r.multiplicity;
    return m;
  }
  bool empty() const { return roots.empty(); }
  std::size_t size() const { return roots.size(); }
};

/// Largest k with |c_k| > kEpsDegree * max_j |c_j|; 0 for the zero polynomial.
int effective_degree(const CubicPolynomial& p);

/// All coefficients below kEpsZeroPoly in magnitude.
bool is_zero_polynomial(const CubicPolynomial& p);

double evaluate(const CubicPolynomial& p, double x);

/// Limit of p at the (unsigned) infinity of the argument: +/-inf by the sign
/// of the leading effective coefficient, or the constant value at degree 0.
/// The limits from both real ends agree whenever the effective degree is even
/// or zero; for odd degree the +inf-side limit is returned.
double evaluate_at_infinity(const CubicPolynomial& p);

CubicPolynomial derivative(const CubicPolynomial& p);

/// Synthetic division of p by (x - r); the remainder is dropped.
CubicPolynomial deflate(const CubicPolynomial& p, double r);

/// All real roots with multiplicities, ascending.  Closed-form
/// (trigonometric/Cardano) per effective degree, each simple root polished by
/// two Newton steps, then clustered within eps_root_scale*(1+|r|).
/// Throws zero_polynomial_error on the zero polynomial.
RootList real_roots(const CubicPolynomial& p, double eps_root_scale = kEpsRootScale);

struct DeflationResult {
  CubicPolynomial p;
  CubicPolynomial q;
  RootList shared;
};

/// Detects roots shared by p and q (within eps_root_scale*(1+|r|), matched
/// against q's root values) and divides both by the corresponding linear
/// factors, min(multiplicity) times each.  Inputs come back unchanged when no
/// root is shared.  Throws zero_polynomial_error when either input is zero.
DeflationResult deflate_common_roots(const CubicPolynomial& p, const CubicPolynomial& q,
                                     double eps_root_scale = kEpsRootScale);

}  // namespace pvc

#endif
