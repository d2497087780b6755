#include "pvc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "pvc/errors.hpp"

namespace pvc {

double TetMesh::diameter() const {
  if (vertices.empty()) return 0.0;
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const Vec3& p : vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

Mat34 TetMesh::tet_corners(int tet_id) const {
  const auto& t = tets[tet_id];
  Mat34 c;
  for (int i = 0; i < 4; ++i) c.col(i) = vertices[t[i]];
  return c;
}

double TetMesh::tet_volume(int tet_id) const {
  const Mat34 c = tet_corners(tet_id);
  Mat3 e;
  for (int i = 0; i < 3; ++i) e.col(i) = c.col(i) - c.col(3);
  return e.determinant() / 6.0;
}

TetMesh TetMesh::build(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets) {
  TetMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.tets = std::move(tets);

  const int nv = mesh.num_vertices();
  for (auto& t : mesh.tets) {
    for (int idx : t)
      if (idx < 0 || idx >= nv) throw bad_dims_error("mesh: tet vertex index out of range");
    const auto signed_volume = [&] {
      Mat3 e;
      for (int i = 0; i < 3; ++i) e.col(i) = mesh.vertices[t[i]] - mesh.vertices[t[3]];
      return e.determinant();
    };
    if (signed_volume() < 0.0) std::swap(t[2], t[3]);
    if (!(signed_volume() > 0.0)) throw degenerate_cell_error("mesh: zero-volume tetrahedron");
  }

  std::map<std::array<int, 3>, int> face_ids;
  mesh.tet_faces.assign(mesh.tets.size(), {-1, -1, -1, -1});
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets[t];
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> key{};
      int n = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) key[n++] = tet[i];
      std::sort(key.begin(), key.end());

      auto [it, inserted] = face_ids.try_emplace(key, mesh.num_faces());
      if (inserted) {
        Face f;
        f.v = key;
        f.tet[0] = t;
        mesh.faces.push_back(f);
      } else {
        Face& f = mesh.faces[it->second];
        if (f.tet[1] >= 0) throw bad_dims_error("mesh: face shared by more than two tets");
        f.tet[1] = t;
      }
      mesh.tet_faces[t][skip] = it->second;
    }
  }

  // renumber faces into key order so ids do not depend on tet order
  std::vector<int> order(mesh.num_faces());
  int pos = 0;
  for (auto& [key, id] : face_ids) order[id] = pos++;
  std::vector<Face> sorted_faces(mesh.faces.size());
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) sorted_faces[order[i]] = mesh.faces[i];
  mesh.faces = std::move(sorted_faces);
  for (auto& tf : mesh.tet_faces)
    for (int& id : tf) id = order[id];

  return mesh;
}

Vec3 interpolate(const TetMesh& mesh, const VertexField& field, int tet_id, const Vec4& mu) {
  if ((mu.array() < -1e-12).any() || (mu.array() > 1.0 + 1e-12).any() ||
      std::abs(mu.sum() - 1.0) > 1e-12)
    throw bad_barycentric_error("interpolate: invalid barycentric coordinates");
  const auto& t = mesh.tets[tet_id];
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 4; ++i) out += mu[i] * field.values[t[i]];
  return out;
}

TetMesh tessellate_grid(const GridSpec& grid) {
  for (int d : grid.dims)
    if (d < 2) throw bad_dims_error("tessellate_grid: each axis needs at least 2 vertices");

  std::vector<Vec3> vertices;
  vertices.reserve(grid.num_vertices());
  for (int k = 0; k < grid.dims[2]; ++k)
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int i = 0; i < grid.dims[0]; ++i) vertices.push_back(grid.vertex_position(i, j, k));

  // the six tets of a cell walk the axes in all orders from the min corner to
  // the max corner; a uniform walk direction keeps shared faces consistent
  static constexpr int kAxisOrders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                            {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(static_cast<std::size_t>(grid.dims[0] - 1) * (grid.dims[1] - 1) *
               (grid.dims[2] - 1) * 6);
  for (int k = 0; k + 1 < grid.dims[2]; ++k)
    for (int j = 0; j + 1 < grid.dims[1]; ++j)
      for (int i = 0; i + 1 < grid.dims[0]; ++i)
        for (const auto& order : kAxisOrders) {
          std::array<int, 3> at{i, j, k};
          std::array<int, 4> tet{};
          tet[0] = grid.vertex_id(at[0], at[1], at[2]);
          for (int step = 0; step < 3; ++step) {
            ++at[order[step]];
            tet[step + 1] = grid.vertex_id(at[0], at[1], at[2]);
          }
          tets.push_back(tet);
        }

  return TetMesh::build(std::move(vertices), std::move(tets));
}

TetMesh tessellate_grid(const GridSpec& grid, std::span<const VertexField> fields_in,
                        std::vector<VertexField>& fields_out) {
  TetMesh mesh = tessellate_grid(grid);
  fields_out.clear();
  for (const VertexField& f : fields_in) {
    if (f.size() != mesh.num_vertices())
      throw bad_dims_error("tessellate_grid: field length does not match the grid");
    fields_out.push_back(f);
  }
  return mesh;
}

VertexField sujudi_haimes_field(const TetMesh& mesh, const VertexField& v) {
  if (v.size() != mesh.num_vertices())
    throw bad_dims_error("sujudi_haimes_field: field length does not match the mesh");

  std::vector<Mat3> jac_sum(mesh.num_vertices(), Mat3::Zero());
  std::vector<double> vol_sum(mesh.num_vertices(), 0.0);

  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets[t];
    Mat3 edges, dv;
    for (int i = 0; i < 3; ++i) {
      edges.col(i) = mesh.vertices[tet[i]] - mesh.vertices[tet[3]];
      dv.col(i) = v.values[tet[i]] - v.values[tet[3]];
    }
    const double det = edges.determinant();
    if (!(det > 0.0)) throw degenerate_cell_error("sujudi_haimes_field: zero-volume cell");
    const Mat3 jac = dv * edges.inverse();
    const double vol = det / 6.0;
    for (int i = 0; i < 4; ++i) {
      jac_sum[tet[i]] += vol * jac;
      vol_sum[tet[i]] += vol;
    }
  }

  VertexField w;
  w.values.resize(mesh.num_vertices());
  for (std::size_t i = 0; i < w.values.size(); ++i)
    w.values[i] = (jac_sum[i] / vol_sum[i]) * v.values[i];
  return w;
}

TetFields gather_tet_fields(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                            int tet_id) {
  const auto& t = mesh.tets[tet_id];
  TetFields out;
  for (int i = 0; i < 4; ++i) out[i] = {v.values[t[i]], w.values[t[i]]};
  return out;
}

TriFields gather_face_fields(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                             int face_id) {
  const auto& f = mesh.faces[face_id];
  TriFields out;
  for (int i = 0; i < 3; ++i) out[i] = {v.values[f.v[i]], w.values[f.v[i]]};
  return out;
}

}  // namespace pvc
