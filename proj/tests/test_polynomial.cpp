#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pvc/errors.hpp"
#include "pvc/polynomial.hpp"

using pvc::CubicPolynomial;
using pvc::deflate_common_roots;
using pvc::derivative;
using pvc::evaluate;
using pvc::evaluate_at_infinity;
using pvc::real_roots;
using pvc::RootList;

namespace {

// --- independent oracles -------------------------------------------------

// Bisection on sign changes over a uniform scan of [-bound, bound];
// multiplicity estimated from the derivatives afterwards.
std::vector<double> bisection_roots(const CubicPolynomial& p, double bound, int scan = 200000) {
  std::vector<double> roots;
  double prev_x = -bound;
  double prev_f = evaluate(p, prev_x);
  for (int i = 1; i <= scan; ++i) {
    const double x = -bound + 2.0 * bound * i / scan;
    const double f = evaluate(p, x);
    if (prev_f == 0.0) {
      roots.push_back(prev_x);
    } else if (f != 0.0 && std::signbit(prev_f) != std::signbit(f)) {
      double a = prev_x, b = x;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = evaluate(p, m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (std::signbit(fm) == std::signbit(prev_f))
          a = m;
        else
          b = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = f;
  }
  return roots;
}

int derivative_multiplicity(const CubicPolynomial& p, double r) {
  const double scale = std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2]), std::abs(p[3])});
  const CubicPolynomial dp = derivative(p);
  const CubicPolynomial ddp = derivative(dp);
  if (std::abs(evaluate(dp, r)) > 1e-6 * scale * (1.0 + std::abs(r)) * (1.0 + std::abs(r)))
    return 1;
  if (std::abs(evaluate(ddp, r)) > 1e-6 * scale * (1.0 + std::abs(r))) return 2;
  return 3;
}

// Classic long division p / (x - r) on plain coefficient arrays.
std::vector<double> long_division_oracle(std::vector<double> num, double r) {
  // num in ascending order; divisor is x - r
  std::vector<double> quot(num.size() - 1, 0.0);
  for (int k = static_cast<int>(num.size()) - 1; k >= 1; --k) {
    quot[k - 1] = num[k];
    num[k - 1] += r * num[k];
  }
  return quot;
}

CubicPolynomial poly_from_roots_scaled(double s, double r0, double r1, double r2) {
  return CubicPolynomial::from_roots(r0, r1, r2) * s;
}

}  // namespace

TEST_CASE("evaluate basics") {
  const CubicPolynomial cube{0, 0, 0, 1};
  CHECK(evaluate(cube, 2.0) == 8.0);
  const CubicPolynomial cube_minus_one{-1, 0, 0, 1};
  CHECK(evaluate(cube_minus_one, 1.0) == 0.0);

  const CubicPolynomial pos_lead{5, -4, 3, 2};
  CHECK(evaluate_at_infinity(pos_lead) == INFINITY);
  const CubicPolynomial neg_lead{5, -4, 3, -2};
  CHECK(evaluate_at_infinity(neg_lead) == -INFINITY);
  const CubicPolynomial constant{7.5, 0, 0, 0};
  CHECK(evaluate_at_infinity(constant) == 7.5);
}

TEST_CASE("effective degree collapses small leading coefficients") {
  CHECK(pvc::effective_degree({1, 2, 3, 4}) == 3);
  CHECK(pvc::effective_degree({1, 2, 3, 1e-14}) == 2);
  CHECK(pvc::effective_degree({1, 1e-14, 1e-15, 1e-16}) == 0);
  CHECK(pvc::is_zero_polynomial({0, 0, 0, 0}));
  CHECK(pvc::is_zero_polynomial({1e-305, 0, -1e-310, 0}));
  CHECK_FALSE(pvc::is_zero_polynomial({1e-200, 0, 0, 0}));
}

TEST_CASE("worked factored cubic") {
  const CubicPolynomial p = CubicPolynomial::from_roots(-20.0, -10.0, 0.1);
  const RootList roots = real_roots(p);
  REQUIRE(roots.size() == 3);
  CHECK(roots.roots[0].value == doctest::Approx(-20.0).epsilon(1e-12));
  CHECK(roots.roots[1].value == doctest::Approx(-10.0).epsilon(1e-12));
  CHECK(roots.roots[2].value == doctest::Approx(0.1).epsilon(1e-12));
  for (const auto& r : roots.roots) CHECK(r.multiplicity == 1);
}

TEST_CASE("double and triple roots") {
  const CubicPolynomial sq{0, 0, 1, 0};  // λ²
  const RootList d = real_roots(sq);
  REQUIRE(d.size() == 1);
  CHECK(d.roots[0].value == 0.0);
  CHECK(d.roots[0].multiplicity == 2);

  // (1-λ)³ scaled: the shape produced by identical field pencils
  const CubicPolynomial t{2.5, -7.5, 7.5, -2.5};
  const RootList tr = real_roots(t);
  REQUIRE(tr.size() == 1);
  CHECK(tr.roots[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tr.roots[0].multiplicity == 3);

  // double root off origin plus a simple one
  const CubicPolynomial m = CubicPolynomial::from_roots(2.0, 2.0, -3.0);
  const RootList mr = real_roots(m);
  REQUIRE(mr.size() == 2);
  CHECK(mr.roots[0].value == doctest::Approx(-3.0));
  CHECK(mr.roots[0].multiplicity == 1);
  CHECK(mr.roots[1].value == doctest::Approx(2.0));
  CHECK(mr.roots[1].multiplicity == 2);

  // multiplicities agree with the derivative test on all of the above
  for (const auto& [poly, root] :
       {std::pair{sq, d.roots[0]}, {t, tr.roots[0]}, {m, mr.roots[1]}, {m, mr.roots[0]}})
    CHECK(root.multiplicity == derivative_multiplicity(poly, root.value));
}

TEST_CASE("degenerate degrees") {
  CHECK_THROWS_AS(real_roots({0, 0, 0, 0}), pvc::zero_polynomial_error);
  CHECK(real_roots({3.0, 0, 0, 0}).empty());

  const RootList lin = real_roots({-6, 2, 0, 0});
  REQUIRE(lin.size() == 1);
  CHECK(lin.roots[0].value == doctest::Approx(3.0));

  // negative discriminant quadratic
  CHECK(real_roots({1, 0, 1, 0}).empty());
  // cubic with one real root
  const RootList one = real_roots({-1, -1, 0, 1});  // λ³ - λ - 1
  REQUIRE(one.size() == 1);
  CHECK(evaluate(CubicPolynomial{-1, -1, 0, 1}, one.roots[0].value) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("random cubics against the bisection oracle") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> root_dist(-10.0, 10.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r0 = root_dist(rng), r1 = root_dist(rng), r2 = root_dist(rng);
    const CubicPolynomial p = CubicPolynomial::from_roots(r0, r1, r2);
    const RootList mine = real_roots(p);

    std::vector<double> oracle = bisection_roots(p, 64.0);
    REQUIRE(mine.total_multiplicity() >= static_cast<int>(oracle.size()));
    for (double ro : oracle) {
      bool found = false;
      for (const auto& r : mine.roots)
        if (std::abs(r.value - ro) <= 1e-9 * (1.0 + std::abs(ro))) found = true;
      CHECK_MESSAGE(found, "oracle root ", ro, " missing");
    }
    // every reported root really is one
    for (const auto& r : mine.roots)
      CHECK(std::abs(evaluate(p, r.value)) <=
            1e-10 * std::pow(1.0 + std::abs(r.value), 3) *
                std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2]), std::abs(p[3])}));
  }
}

TEST_CASE("scaling invariance") {
  const CubicPolynomial p = CubicPolynomial::from_roots(-4.25, 0.5, 17.0);
  const RootList base = real_roots(p);

  for (const double k : {1024.0, 1.0 / 4096.0}) {  // exact scalings
    const RootList scaled = real_roots(p * k);
    REQUIRE(scaled.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(scaled.roots[i].value == base.roots[i].value);
      CHECK(scaled.roots[i].multiplicity == base.roots[i].multiplicity);
    }
  }
  for (const double k : {3.7, -2.5e8, 1e-7}) {
    const RootList scaled = real_roots(p * k);
    REQUIRE(scaled.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(scaled.roots[i].value ==
            doctest::Approx(base.roots[i].value).epsilon(1e-12));
      CHECK(scaled.roots[i].multiplicity == base.roots[i].multiplicity);
    }
  }
}

TEST_CASE("deflation of constructed common factors") {
  const CubicPolynomial p{2, -3, 1, 0};   // (λ-1)(λ-2)
  const CubicPolynomial q{3, -4, 1, 0};   // (λ-1)(λ-3)
  const auto d = deflate_common_roots(p, q);
  REQUIRE(d.shared.size() == 1);
  CHECK(d.shared.roots[0].value == doctest::Approx(1.0));
  CHECK(evaluate(d.p, 2.0) == doctest::Approx(0.0));
  CHECK(pvc::effective_degree(d.p) == 1);
  CHECK(evaluate(d.q, 3.0) == doctest::Approx(0.0));
  CHECK(pvc::effective_degree(d.q) == 1);
}

TEST_CASE("deflation leaves disjoint roots alone") {
  const CubicPolynomial p{-1, 0, 0, 1};
  const CubicPolynomial q{1, 0, 0, 1};
  const auto d = deflate_common_roots(p, q);
  CHECK(d.shared.empty());
  for (int k = 0; k < 4; ++k) {
    CHECK(d.p[k] == p[k]);
    CHECK(d.q[k] == q[k]);
  }
}

TEST_CASE("randomized planted shared roots against the long-division oracle") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double shared = dist(rng);
    const CubicPolynomial p = poly_from_roots_scaled(1.0 + trial % 5, shared, dist(rng), dist(rng));
    const CubicPolynomial q = poly_from_roots_scaled(2.0, shared, dist(rng), dist(rng));
    const auto d = deflate_common_roots(p, q);

    bool recovered = false;
    for (const auto& s : d.shared.roots)
      if (std::abs(s.value - shared) <= 1e-8 * (1.0 + std::abs(shared))) recovered = true;
    REQUIRE_MESSAGE(recovered, "shared root not recovered");

    // deflated q against long division by the recovered factor
    const double r = d.shared.roots[0].value;
    const auto oq = long_division_oracle({q[0], q[1], q[2], q[3]}, r);
    const double scale = std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2]), std::abs(q[3])});
    for (std::size_t k = 0; k < oq.size(); ++k)
      CHECK(std::abs(d.q[static_cast<int>(k)] - oq[k]) <= 1e-10 * scale);

    // re-multiplying restores the original coefficients
    const CubicPolynomial back{-r * d.q[0], d.q[0] - r * d.q[1], d.q[1] - r * d.q[2], d.q[2]};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(back[k] - q[k]) <= 1e-9 * scale);
  }
}

TEST_CASE("order completeness on random coefficient cubics") {
  std::mt19937_64 rng(991);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    CubicPolynomial p{dist(rng), dist(rng), dist(rng), dist(rng)};
    if (pvc::is_zero_polynomial(p)) continue;
    const int deg = pvc::effective_degree(p);
    if (deg == 0) continue;
    // Cauchy bound on root magnitudes
    double bound = 0.0;
    for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(p[k] / p[deg]));
    bound += 1.0;

    const RootList mine = real_roots(p);
    for (double ro : bisection_roots(p, bound, 20000)) {
      bool found = false;
      for (const auto& r : mine.roots)
        if (std::abs(r.value - ro) <= 1e-8 * (1.0 + std::abs(ro))) found = true;
      CHECK_MESSAGE(found, "missing root ", ro);
    }
  }
}
