#ifndef PVC_EIGENSYSTEM_HPP
#define PVC_EIGENSYSTEM_HPP

#include <vector>

#include "pvc/polynomial.hpp"
#include "pvc/types.hpp"

namespace pvc {

// Barycentric slack for accepting face solutions; points on shared faces must
// be accepted from both incident cells.
inline constexpr double kEpsBarycentric = 1e-9;
// Null spaces are measured against the largest singular value at this ratio.
inline constexpr double kEpsNullSpace = 1e-10;

/// Per-tetrahedron system Aμ + a = λ(Bμ + b) over the reduced barycentric
/// vector μ = (μ0, μ1, μ2).  Column i of A is v_i − v_3 and of B is w_i − w_3;
/// a = v_3, b = w_3.  The source vertex values are kept so that coefficient
/// assembly can stay bitwise independent of the vertices it must not see.
struct EigenSystem {
  Mat3 A;
  Mat3 B;
  Vec3 a;
  Vec3 b;
  Mat34 v_verts;  // column i = v_i
  Mat34 w_verts;  // column i = w_i
};

enum class TetDegeneracy {
  None,
  ZeroQ,           // Q ≡ 0 while some P_i is not: no isolated solutions
  ZeroEverything,  // all of Q, P_i ≡ 0: the system is vacuous
};

/// Characteristic denominator Q(λ) = det(A − λB) and the four numerators
/// μ_i = P_i/Q of the rational curve parameterization.
struct TetPolynomials {
  CubicPolynomial Q;
  CubicPolynomial P0, P1, P2, P3;
  TetDegeneracy degenerate_flag = TetDegeneracy::None;

  const CubicPolynomial& P(int i) const {
    switch (i) {
      case 0: return P0;
      case 1: return P1;
      case 2: return P2;
      default: return P3;
    }
  }
};

/// Throws non_finite_error on non-finite samples.
EigenSystem build_system(const TetFields& tet);

/// det(A − λB) expanded by column multilinearity: the constant coefficient is
/// det(A), the cubic −det(B), and the middle ones signed sums of the
/// mixed-column determinants.
CubicPolynomial denominator(const EigenSystem& sys);

/// det(X − λY) by the same expansion, for an arbitrary column pencil.
CubicPolynomial linear_pencil_determinant(const Mat3& X, const Mat3& Y);

/// Symbolic quadratic entries of adj(A − λB); entry (i, j) is the cofactor of
/// the (j, i) entry of the pencil.
std::array<std::array<CubicPolynomial, 3>, 3> pencil_adjugate(const Mat3& A, const Mat3& B);

/// All five polynomials.  P0..P2 come from the exact expansion of
/// −adj(A−λB)(a−λb); P3 is assembled directly from vertices 0..2 (it equals
/// Q − P0 − P1 − P2 up to rounding, and never reads vertex 3).
TetPolynomials numerators(const EigenSystem& sys);

/// Characteristic polynomial det(V − λW) of one triangular face, V and W the
/// column matrices of the vertex samples; its roots are the eigenvalues of
/// Vμ = λWμ.  For a tetrahedron, the polynomial of face {0,1,2} equals P3.
CubicPolynomial triangle_characteristic(const TriFields& tri);

struct FacePoint {
  double lambda;
  Vec3 mu;  // barycentric on the face, components in [0,1], summing to 1
};

struct FaceSolveResult {
  bool degenerate = false;  // null space of dimension > 1 at some root, or zero polynomial
  std::vector<FacePoint> points;
};

/// Barycentric solutions on a face: for each real root λ of poly, the
/// normalized null vector of V − λW, kept when all components lie within
/// eps_bary of [0,1] (then clamped).  poly must be triangle_characteristic of
/// the same face.
FaceSolveResult solve_face_points(const TriFields& tri, const CubicPolynomial& poly,
                                  double eps_bary = kEpsBarycentric,
                                  double eps_root_scale = kEpsRootScale);

}  // namespace pvc

#endif
