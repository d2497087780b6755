#ifndef PVC_EXTRACTION_HPP
#define PVC_EXTRACTION_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "pvc/eigensystem.hpp"
#include "pvc/intervals.hpp"
#include "pvc/mesh.hpp"
#include "pvc/types.hpp"

namespace pvc {

struct ExtractOptions {
  double eps_root_scale = kEpsRootScale;
  // endpoint-to-face-point association: |Δλ| ≤ eps_match_scale·(1+|λ|)
  double eps_match_scale = 1e-7;
  // and position gap ≤ eps_pos_scale · mesh diameter
  double eps_pos_scale = 1e-9;
  double eps_bary = kEpsBarycentric;
  // polyline chord tolerance; 0 selects 1e-4 · mesh diameter
  double max_chord_error = 0.0;
  int workers = 1;
};

/// Intersection of a PV curve with a triangular face.
struct PVPoint {
  int face_id = -1;
  double lambda = 0.0;
  Vec3 mu = Vec3::Zero();  // barycentric on the face, vertex order of the face key
  Vec3 position = Vec3::Zero();
};

struct Rational {
  CubicPolynomial num;
  CubicPolynomial den;
};

inline double evaluate(const Rational& r, double x) {
  return evaluate(r.num, x) / evaluate(r.den, x);
}

/// One in-tetrahedron branch of a PV curve: a connected λ interval together
/// with the four deflated rationals μ_i(λ) = P_i(λ)/Q(λ).
struct CurveSegment {
  int tet_id = -1;
  LambdaInterval interval;
  std::array<Rational, 4> mu;
  Mat34 corners;  // tet vertex positions
  // PVPoint index matched to the lo / hi finite endpoint; -1 when absent
  std::array<int, 2> endpoint_pv{-1, -1};
  bool has_w_critical_point = false;  // the branch passes through λ = ∞
  bool closed_loop = false;           // the feasible region is the whole ring
};

enum class DiagnosticKind {
  DegenerateFace,
  DegenerateCell,
  AmbiguousJunction,
  UnmatchedEndpoint,
};

struct Diagnostic {
  DiagnosticKind kind;
  int id;  // face, cell, or PV point index depending on kind
  std::string detail;
};

const char* to_string(DiagnosticKind k);

struct NumeratorPass {
  std::vector<PVPoint> points;  // ascending face id, then ascending λ
  std::vector<std::pair<int, int>> face_points;  // per face: [begin, end) into points
  std::vector<int> labeled_tets;                 // incident to at least one PV point
  std::vector<int> degenerate_faces;
  std::vector<int> degenerate_face_tets;  // incident to a degenerate face
  std::vector<Diagnostic> diagnostics;
};

/// First pass: roots of every face's characteristic polynomial with
/// in-triangle barycentric solutions; tets incident to marked faces are
/// labeled for the second pass.  Face degeneracies become diagnostics.
NumeratorPass numerator_pass(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                             const ExtractOptions& opt = {});

struct DenominatorPass {
  std::vector<CurveSegment> segments;  // ascending tet id
  std::vector<Diagnostic> diagnostics;
  std::array<long long, 8> branch_histogram{};  // per labeled tet, clamped at 7
};

/// Second pass: per labeled tet, assemble the polynomials, intersect the
/// eight inequalities, and attach face PV points to interval endpoints.
/// Degenerate cells become diagnostics, never errors.
DenominatorPass denominator_pass(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                                 const NumeratorPass& pass1, const ExtractOptions& opt = {});

/// μ_i = P_i(λ)/Q(λ) and the barycentric embedding.  λ must be finite and
/// inside the segment's interval; otherwise throws out_of_interval_error.
std::pair<Vec4, Vec3> evaluate_segment(const CurveSegment& seg, double lambda);

/// Limit of μ as λ → ∞ (ratios of effective leading coefficients); the
/// location of the w-critical point for branches through ∞.
Vec4 segment_mu_at_infinity(const CurveSegment& seg);

struct PolylinePoint {
  Vec3 position;
  double lambda;  // +inf marks a w-critical limit point
  int tet_id;
};
using Polyline = std::vector<PolylinePoint>;

struct PVCurve {
  std::vector<int> segment_ids;  // chain order
  bool closed = false;
  Polyline polyline;  // filled by sample_polyline
};

struct StitchResult {
  std::vector<PVCurve> curves;
  std::vector<Diagnostic> diagnostics;
};

/// Chains segments whose endpoints resolved to the same face PV point.
/// Junctions where more than two segment ends meet are reported and split,
/// never paired heuristically.
StitchResult stitch(const std::vector<CurveSegment>& segments,
                    const std::vector<PVPoint>& points);

/// Adaptive sampling of a stitched curve: per-segment λ refinement until the
/// chord deviation is below max_chord_error.  Branches through ∞ are split at
/// the w-critical limit point, with |λ| capped at 1e6·(1 + median finite
/// endpoint |λ|).
Polyline sample_polyline(const PVCurve& curve, const std::vector<CurveSegment>& segments,
                         double max_chord_error);

struct ExtractionResult {
  NumeratorPass pass1;
  DenominatorPass pass2;
  std::vector<PVCurve> curves;
  std::vector<Diagnostic> diagnostics;  // pass1 + pass2 + stitching, in that order
};

/// The whole pipeline: both passes, stitching, and polyline sampling.
ExtractionResult extract_curves(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                                const ExtractOptions& opt = {});

}  // namespace pvc

#endif
