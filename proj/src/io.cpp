#include "pvc/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "pvc/errors.hpp"

namespace pvc {

namespace {

void read_exact(std::ifstream& in, void* dst, std::size_t bytes, std::int64_t& offset,
                const std::filesystem::path& path) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
  if (in.gcount() != static_cast<std::streamsize>(bytes))
    throw io_error(path.string() + ": truncated at byte offset " +
                   std::to_string(offset + in.gcount()));
  offset += static_cast<std::int64_t>(bytes);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& tok, const std::filesystem::path& path, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return x;
  } catch (const std::exception&) {
    throw io_error(path.string() + ":" + std::to_string(line) + ": bad number '" + tok + "'");
  }
}

struct TokenReader {
  std::ifstream in;
  std::filesystem::path path;
  int line = 1;

  explicit TokenReader(const std::filesystem::path& p) : in(p), path(p) {
    if (!in) throw io_error(p.string() + ": cannot open");
  }

  bool next(std::string& tok) {
    tok.clear();
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '\n') ++line;
      if (!std::isspace(c)) break;
    }
    if (c == EOF) return false;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(static_cast<unsigned char>(c)))
      tok.push_back(static_cast<char>(c));
    if (c == '\n') ++line;
    return true;
  }

  std::string require(const char* what) {
    std::string tok;
    if (!next(tok))
      throw io_error(path.string() + ":" + std::to_string(line) + ": expected " + what);
    return tok;
  }

  double number(const char* what) { return parse_double(require(what), path, line); }
  int integer(const char* what) {
    const double x = number(what);
    return static_cast<int>(x);
  }
};

}  // namespace

RawGrid read_raw_grid(const std::filesystem::path& path) {
  static_assert(sizeof(double) == 8);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path.string() + ": cannot open");

  std::int64_t offset = 0;
  std::uint32_t dims[3];
  read_exact(in, dims, sizeof(dims), offset, path);
  double spacing[3], origin[3];
  read_exact(in, spacing, sizeof(spacing), offset, path);
  read_exact(in, origin, sizeof(origin), offset, path);

  RawGrid grid;
  for (int i = 0; i < 3; ++i) {
    if (dims[i] < 2 || dims[i] > (1u << 24))
      throw io_error(path.string() + ": bad dimension " + std::to_string(dims[i]) +
                     " at byte offset " + std::to_string(4 * i));
    grid.spec.dims[i] = static_cast<int>(dims[i]);
    grid.spec.spacing[i] = spacing[i];
    grid.spec.origin[i] = origin[i];
  }

  const std::int64_t n = static_cast<std::int64_t>(dims[0]) * dims[1] * dims[2];
  grid.field.values.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    double xyz[3];
    read_exact(in, xyz, sizeof(xyz), offset, path);
    grid.field.values[i] = Vec3(xyz[0], xyz[1], xyz[2]);
  }
  return grid;
}

void write_raw_grid(const std::filesystem::path& path, const GridSpec& spec,
                    const VertexField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path.string() + ": cannot open for writing");
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(spec.dims[0]),
                                 static_cast<std::uint32_t>(spec.dims[1]),
                                 static_cast<std::uint32_t>(spec.dims[2])};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const double spacing[3] = {spec.spacing[0], spec.spacing[1], spec.spacing[2]};
  const double origin[3] = {spec.origin[0], spec.origin[1], spec.origin[2]};
  out.write(reinterpret_cast<const char*>(spacing), sizeof(spacing));
  out.write(reinterpret_cast<const char*>(origin), sizeof(origin));
  for (const Vec3& v : field.values) {
    const double xyz[3] = {v[0], v[1], v[2]};
    out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
  }
  if (!out) throw io_error(path.string() + ": write failed");
}

AsciiMeshData read_ascii_mesh(const std::filesystem::path& path) {
  TokenReader r(path);
  AsciiMeshData data;

  const int nv = r.integer("vertex count");
  if (nv <= 0) throw io_error(path.string() + ": bad vertex count");
  data.vertices.resize(nv);
  for (int i = 0; i < nv; ++i)
    for (int c = 0; c < 3; ++c) data.vertices[i][c] = r.number("vertex coordinate");

  const int nt = r.integer("tet count");
  if (nt <= 0) throw io_error(path.string() + ": bad tet count");
  data.tets.resize(nt);
  for (int i = 0; i < nt; ++i)
    for (int c = 0; c < 4; ++c) data.tets[i][c] = r.integer("tet index");

  // any number of trailing vertex fields
  std::string tok;
  while (r.next(tok)) {
    VertexField f;
    f.values.resize(nv);
    f.values[0][0] = parse_double(tok, path, r.line);
    f.values[0][1] = r.number("field component");
    f.values[0][2] = r.number("field component");
    for (int i = 1; i < nv; ++i)
      for (int c = 0; c < 3; ++c) f.values[i][c] = r.number("field component");
    data.fields.push_back(std::move(f));
  }
  return data;
}

void write_ascii_mesh(const std::filesystem::path& path, const AsciiMeshData& data) {
  std::ofstream out(path);
  if (!out) throw io_error(path.string() + ": cannot open for writing");
  out << data.vertices.size() << "\n";
  for (const Vec3& p : data.vertices)
    out << format_double(p[0]) << " " << format_double(p[1]) << " " << format_double(p[2])
        << "\n";
  out << data.tets.size() << "\n";
  for (const auto& t : data.tets) out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  for (const VertexField& f : data.fields)
    for (const Vec3& v : f.values)
      out << format_double(v[0]) << " " << format_double(v[1]) << " " << format_double(v[2])
          << "\n";
  if (!out) throw io_error(path.string() + ": write failed");
}

void write_polylines(const std::filesystem::path& path, const std::vector<PVCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw io_error(path.string() + ": cannot open for writing");
  for (const PVCurve& c : curves) {
    out << c.polyline.size() << "\n";
    for (const PolylinePoint& p : c.polyline)
      out << format_double(p.position[0]) << " " << format_double(p.position[1]) << " "
          << format_double(p.position[2]) << " " << format_double(p.lambda) << " " << p.tet_id
          << "\n";
  }
  if (!out) throw io_error(path.string() + ": write failed");
}

std::vector<Polyline> read_polylines(const std::filesystem::path& path) {
  TokenReader r(path);
  std::vector<Polyline> out;
  std::string tok;
  while (r.next(tok)) {
    const int n = static_cast<int>(parse_double(tok, path, r.line));
    Polyline line;
    line.reserve(n);
    for (int i = 0; i < n; ++i) {
      PolylinePoint p;
      p.position[0] = r.number("x");
      p.position[1] = r.number("y");
      p.position[2] = r.number("z");
      p.lambda = r.number("lambda");
      p.tet_id = r.integer("tet id");
      line.push_back(p);
    }
    out.push_back(std::move(line));
  }
  return out;
}

void write_diagnostics(const std::filesystem::path& path, const std::vector<Diagnostic>& diags,
                       const std::array<long long, 8>& branch_histogram) {
  std::ofstream out(path);
  if (!out) throw io_error(path.string() + ": cannot open for writing");
  for (const Diagnostic& d : diags)
    out << to_string(d.kind) << "\t" << d.id << "\t" << d.detail << "\n";
  for (int k = 0; k < 8; ++k)
    if (branch_histogram[k] > 0)
      out << "branch_histogram\t" << k << "\t" << branch_histogram[k] << "\n";
  if (!out) throw io_error(path.string() + ": write failed");
}

void write_oracle_report(const std::filesystem::path& path, const OracleReport& report) {
  std::ofstream out(path);
  if (!out) throw io_error(path.string() + ": cannot open for writing");
  out << "case_id\t" << report.case_id << "\n";
  out << "verdict\t" << to_string(report.verdict) << "\n";
  out << "max_residual\t" << format_double(report.max_residual) << "\n";
  out << "matched_clusters\t" << report.matched_clusters << "\n";
  out << "unmatched_clusters\t" << report.unmatched_clusters << "\n";
  out << "boundary_clusters\t" << report.boundary_clusters << "\n";
  out << "matched_segments\t" << report.matched_segments << "\n";
  out << "unmatched_segments\t" << report.unmatched_segments << "\n";
  out << "degenerate_cells\t" << report.degenerate_cells << "\n";
  if (!out) throw io_error(path.string() + ": write failed");
}

}  // namespace pvc
