#ifndef PVC_ORACLE_HPP
#define PVC_ORACLE_HPP

#include <span>
#include <string>
#include <vector>

#include "pvc/extraction.hpp"
#include "pvc/mesh.hpp"
#include "pvc/types.hpp"

namespace pvc {

struct OracleOptions {
  // samples below this normalized residual form evidence clusters
  double cluster_threshold = 1e-4;
  // discrete residual minima above this are not treated as curve evidence
  double flag_threshold = 0.05;
  // guard for zero-magnitude vectors in the normalization
  double eps_norm = 1e-300;
  // a cell whose sub-threshold fraction exceeds this is not a curve locus
  double degenerate_cell_fraction = 0.2;
};

struct ResidualSample {
  Vec4 mu;
  double residual;   // ‖v×w‖ / (‖v‖·‖w‖ + eps_norm)
  bool degenerate;   // both fields vanish at the point
};

/// Regular barycentric grid of ~grid_n³ points over the tetrahedron with the
/// normalized parallelism residual at each.  Throws bad_dims_error when
/// grid_n < 10.
std::vector<ResidualSample> sample_tet_residual(const TetFields& fields, int grid_n,
                                                double eps_norm = 1e-300);

enum class OracleVerdict { Agree, Disagree, Degenerate };

const char* to_string(OracleVerdict v);

struct OracleReport {
  std::string case_id;
  double max_residual = 0.0;  // worst residual over the extracted sample points
  int matched_clusters = 0;
  int unmatched_clusters = 0;
  int boundary_clusters = 0;  // evidence touching the cell boundary; not owned
  int matched_segments = 0;
  int unmatched_segments = 0;
  int degenerate_cells = 0;
  OracleVerdict verdict = OracleVerdict::Agree;
};

/// Extractor-independent check of extraction output: per cell, dense residual
/// sampling on a side-m barycentric lattice (m ≈ 6^(1/3)·grid_n, so ~grid_n³
/// points).  Soundness: every cluster of sub-threshold samples must pass
/// within 2 lattice cells of a segment, unless it touches the cell boundary.
/// Completeness: every segment must pass within 2 lattice cells of a discrete
/// local minimum of the residual.  Cells where the sub-threshold region is
/// space-filling are reported Degenerate rather than matched.  `cells` limits
/// the check to a subset of cell ids (empty means all).
OracleReport verify_segments(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                             const std::vector<CurveSegment>& segments, int grid_n,
                             const OracleOptions& opt = {}, std::span<const int> cells = {});

}  // namespace pvc

#endif
