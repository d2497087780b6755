#ifndef PVC_MESH_HPP
#define PVC_MESH_HPP

#include <array>
#include <span>
#include <vector>

#include "pvc/types.hpp"

namespace pvc {

/// Immutable tetrahedral mesh with canonical shared-face adjacency.  Tets are
/// positively oriented (signed volume > 0) after construction; every interior
/// face has exactly two incident tets and every boundary face one.
struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;

  struct Face {
    std::array<int, 3> v;  // sorted vertex indices; the canonical face key
    std::array<int, 2> tet{-1, -1};
    bool boundary() const { return tet[1] < 0; }
  };
  std::vector<Face> faces;                    // lexicographically sorted by key
  std::vector<std::array<int, 4>> tet_faces;  // face id opposite each local vertex

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }

  /// Bounding-box diagonal.
  double diameter() const;

  Mat34 tet_corners(int tet_id) const;
  double tet_volume(int tet_id) const;

  /// Validates, orients, and builds the face table.  Throws bad_dims_error on
  /// malformed connectivity and degenerate_cell_error on zero-volume tets.
  static TetMesh build(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets);
};

/// One 3-vector per mesh vertex.
struct VertexField {
  std::vector<Vec3> values;

  int size() const { return static_cast<int>(values.size()); }
};

/// Piecewise-linear interpolation at barycentric μ inside a tet.  μ must have
/// components in [0,1] and sum to 1 within 1e−12; otherwise throws
/// bad_barycentric_error.
Vec3 interpolate(const TetMesh& mesh, const VertexField& field, int tet_id, const Vec4& mu);

struct GridSpec {
  std::array<int, 3> dims;  // vertex counts per axis, each >= 2
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};

  int num_vertices() const { return dims[0] * dims[1] * dims[2]; }
  int vertex_id(int i, int j, int k) const { return i + dims[0] * (j + dims[1] * k); }
  Vec3 vertex_position(int i, int j, int k) const {
    return origin + Vec3(i * spacing[0], j * spacing[1], k * spacing[2]);
  }
};

/// Six-tetrahedra subdivision of every grid cell around the min-to-max cube
/// diagonal; the diagonal direction is uniform, so shared quad faces are
/// split identically from both sides.  Mesh vertex order equals the grid's
/// x-fastest order, so grid-sampled fields align with mesh vertices as-is.
/// Throws bad_dims_error when any axis has fewer than 2 vertices.
TetMesh tessellate_grid(const GridSpec& grid);

/// As above, also carrying vertex-aligned fields through.
TetMesh tessellate_grid(const GridSpec& grid, std::span<const VertexField> fields_in,
                        std::vector<VertexField>& fields_out);

/// Derived field w = (∇v)v for the vortex-core criterion: per-cell constant
/// Jacobians of the PL interpolant, volume-averaged onto vertices, applied to
/// the vertex value.  Throws degenerate_cell_error on zero-volume cells.
VertexField sujudi_haimes_field(const TetMesh& mesh, const VertexField& v);

/// Field samples of one tet / one face, in local vertex order.
TetFields gather_tet_fields(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                            int tet_id);
TriFields gather_face_fields(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                             int face_id);

}  // namespace pvc

#endif
