#ifndef PVC_IO_HPP
#define PVC_IO_HPP

#include <array>
#include <filesystem>
#include <vector>

#include "pvc/extraction.hpp"
#include "pvc/mesh.hpp"
#include "pvc/oracle.hpp"

namespace pvc {

/// Self-contained little-endian field file: three uint32 vertex counts, three
/// float64 spacings, three float64 origins, then nx·ny·nz 3-vectors of
/// float64 in x-fastest order.
struct RawGrid {
  GridSpec spec;
  VertexField field;
};

RawGrid read_raw_grid(const std::filesystem::path& path);
void write_raw_grid(const std::filesystem::path& path, const GridSpec& spec,
                    const VertexField& field);

/// ASCII tetrahedral mesh with fields: vertex count, one "x y z" line per
/// vertex, tet count, one "i0 i1 i2 i3" line per tet, then one 3-vector line
/// per vertex for each trailing field (any number, normally v and w).
struct AsciiMeshData {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<VertexField> fields;
};

AsciiMeshData read_ascii_mesh(const std::filesystem::path& path);
void write_ascii_mesh(const std::filesystem::path& path, const AsciiMeshData& data);

/// Polyline export: per curve, a point count line followed by one
/// "x y z lambda tet_id" line per point.  Doubles are printed with 17
/// significant digits and re-read bitwise identical.
void write_polylines(const std::filesystem::path& path, const std::vector<PVCurve>& curves);
std::vector<Polyline> read_polylines(const std::filesystem::path& path);

/// One record per anomaly: "kind<TAB>id<TAB>detail", then the branch-count
/// histogram as "branch_histogram<TAB>count<TAB>cells" records.
void write_diagnostics(const std::filesystem::path& path, const std::vector<Diagnostic>& diags,
                       const std::array<long long, 8>& branch_histogram);

void write_oracle_report(const std::filesystem::path& path, const OracleReport& report);

}  // namespace pvc

#endif
