#include "pvc/eigensystem.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "pvc/errors.hpp"

namespace pvc {

namespace {

double triple(const Vec3& u, const Vec3& v, const Vec3& w) { return u.dot(v.cross(w)); }

// product of two linear polynomials (a0 + a1 λ)(b0 + b1 λ)
CubicPolynomial mul_linear(double a0, double a1, double b0, double b1) {
  return {a0 * b0, a0 * b1 + a1 * b0, a1 * b1, 0.0};
}

// product of a quadratic and a linear polynomial
CubicPolynomial mul_quad_linear(const CubicPolynomial& q, double b0, double b1) {
  return {q[0] * b0, q[0] * b1 + q[1] * b0, q[1] * b1 + q[2] * b0, q[2] * b1};
}

bool all_finite(const TetFields& t) {
  for (const FieldSample& s : t)
    if (!s.v.allFinite() || !s.w.allFinite()) return false;
  return true;
}

}  // namespace

EigenSystem build_system(const TetFields& tet) {
  if (!all_finite(tet)) throw non_finite_error("build_system: non-finite field sample");
  EigenSystem sys;
  sys.a = tet[3].v;
  sys.b = tet[3].w;
  for (int i = 0; i < 3; ++i) {
    sys.A.col(i) = tet[i].v - tet[3].v;
    sys.B.col(i) = tet[i].w - tet[3].w;
  }
  for (int i = 0; i < 4; ++i) {
    sys.v_verts.col(i) = tet[i].v;
    sys.w_verts.col(i) = tet[i].w;
  }
  return sys;
}

CubicPolynomial linear_pencil_determinant(const Mat3& X, const Mat3& Y) {
  const Vec3 x0 = X.col(0), x1 = X.col(1), x2 = X.col(2);
  const Vec3 y0 = Y.col(0), y1 = Y.col(1), y2 = Y.col(2);
  CubicPolynomial q;
  q[0] = triple(x0, x1, x2);
  q[1] = -(triple(y0, x1, x2) + triple(x0, y1, x2) + triple(x0, x1, y2));
  q[2] = triple(y0, y1, x2) + triple(y0, x1, y2) + triple(x0, y1, y2);
  q[3] = -triple(y0, y1, y2);
  return q;
}

CubicPolynomial denominator(const EigenSystem& sys) {
  return linear_pencil_determinant(sys.A, sys.B);
}

std::array<std::array<CubicPolynomial, 3>, 3> pencil_adjugate(const Mat3& A, const Mat3& B) {
  std::array<std::array<CubicPolynomial, 3>, 3> adj;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // cofactor of pencil entry (j, i); cyclic row/column order builds the
      // cofactor sign into the 2x2 determinant
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj[i][j] = mul_linear(A(r0, c0), -B(r0, c0), A(r1, c1), -B(r1, c1)) -
                  mul_linear(A(r0, c1), -B(r0, c1), A(r1, c0), -B(r1, c0));
    }
  }
  return adj;
}

TetPolynomials numerators(const EigenSystem& sys) {
  TetPolynomials tp;
  tp.Q = denominator(sys);

  const auto adj = pencil_adjugate(sys.A, sys.B);
  CubicPolynomial P[3];
  for (int i = 0; i < 3; ++i) {
    CubicPolynomial acc;
    for (int j = 0; j < 3; ++j) acc = acc + mul_quad_linear(adj[i][j], sys.a[j], -sys.b[j]);
    P[i] = -acc;
  }
  tp.P0 = P[0];
  tp.P1 = P[1];
  tp.P2 = P[2];

  // direct expansion over vertices 0..2 only; equals Q − P0 − P1 − P2
  tp.P3 = linear_pencil_determinant(sys.v_verts.leftCols<3>(), sys.w_verts.leftCols<3>());

  const bool q_zero = is_zero_polynomial(tp.Q);
  const bool p_zero = is_zero_polynomial(tp.P0) && is_zero_polynomial(tp.P1) &&
                      is_zero_polynomial(tp.P2) && is_zero_polynomial(tp.P3);
  if (q_zero) tp.degenerate_flag = p_zero ? TetDegeneracy::ZeroEverything : TetDegeneracy::ZeroQ;
  return tp;
}

CubicPolynomial triangle_characteristic(const TriFields& tri) {
  Mat3 V, W;
  for (int i = 0; i < 3; ++i) {
    if (!tri[i].v.allFinite() || !tri[i].w.allFinite())
      throw non_finite_error("triangle_characteristic: non-finite field sample");
    V.col(i) = tri[i].v;
    W.col(i) = tri[i].w;
  }
  return linear_pencil_determinant(V, W);
}

FaceSolveResult solve_face_points(const TriFields& tri, const CubicPolynomial& poly,
                                  double eps_bary, double eps_root_scale) {
  FaceSolveResult result;
  if (is_zero_polynomial(poly)) {
    result.degenerate = true;  // the whole pencil is singular
    return result;
  }

  Mat3 V, W;
  for (int i = 0; i < 3; ++i) {
    V.col(i) = tri[i].v;
    W.col(i) = tri[i].w;
  }

  const RootList roots = real_roots(poly, eps_root_scale);
  for (const Root& r : roots.roots) {
    const Mat3 M = V - r.value * W;
    Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullV);
    const Vec3 sv = svd.singularValues();
    if (sv[0] <= 0.0 || sv[1] <= kEpsNullSpace * sv[0]) {
      result.degenerate = true;  // a line of solutions on the face
      continue;
    }
    const Vec3 null_dir = svd.matrixV().col(2);
    const double s = null_dir.sum();
    if (std::abs(s) <= 1e-12 * null_dir.cwiseAbs().sum()) continue;  // no affine representative
    Vec3 mu = null_dir / s;
    if ((mu.array() < -eps_bary).any() || (mu.array() > 1.0 + eps_bary).any()) continue;
    mu = mu.cwiseMax(0.0).cwiseMin(1.0);
    mu /= mu.sum();
    result.points.push_back({r.value, mu});
  }
  return result;
}

}  // namespace pvc
