// Command-line front end: extract PV curves, verify them against the
// sampling oracle, or report tessellation statistics.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvc/errors.hpp"
#include "pvc/extraction.hpp"
#include "pvc/io.hpp"
#include "pvc/mesh.hpp"
#include "pvc/oracle.hpp"

namespace {

struct JobConfig {
  std::string mesh_path;
  std::string v_path;
  std::string w_path;
  std::string grid_path;  // geometry override for raw-grid inputs
  std::string derive;     // "sujudi-haimes"
  std::string out_path = "curves.txt";
  std::string diag_path = "diagnostics.txt";
  std::string report_path = "oracle_report.txt";
  int workers = 1;
  double eps_root = pvc::kEpsRootScale;
  double eps_match = 1e-7;
  double residual_threshold = 1e-4;
  double max_chord_error = 0.0;
  double max_degenerate_fraction = 0.5;
  int grid_n = 40;
  int subsample = 0;
  int inject_drop_segment = -1;
};

struct LoadedCase {
  pvc::TetMesh mesh;
  pvc::VertexField v;
  pvc::VertexField w;
};

LoadedCase load_case(const JobConfig& cfg) {
  LoadedCase c;
  if (!cfg.mesh_path.empty()) {
    pvc::AsciiMeshData md = pvc::read_ascii_mesh(cfg.mesh_path);
    c.mesh = pvc::TetMesh::build(std::move(md.vertices), std::move(md.tets));
    if (md.fields.empty())
      throw pvc::io_error(cfg.mesh_path + ": no vertex field after connectivity");
    c.v = std::move(md.fields[0]);
    if (!cfg.derive.empty()) {
      c.w = pvc::sujudi_haimes_field(c.mesh, c.v);
    } else {
      if (md.fields.size() < 2)
        throw pvc::io_error(cfg.mesh_path + ": second field (w) missing; use --derive otherwise");
      c.w = std::move(md.fields[1]);
    }
  } else {
    pvc::RawGrid gv = pvc::read_raw_grid(cfg.v_path);
    pvc::GridSpec spec = gv.spec;
    if (!cfg.grid_path.empty()) spec = pvc::read_raw_grid(cfg.grid_path).spec;
    c.mesh = pvc::tessellate_grid(spec);
    if (gv.field.size() != c.mesh.num_vertices())
      throw pvc::io_error(cfg.v_path + ": field size does not match the grid geometry");
    c.v = std::move(gv.field);
    if (!cfg.derive.empty()) {
      c.w = pvc::sujudi_haimes_field(c.mesh, c.v);
    } else {
      pvc::RawGrid gw = pvc::read_raw_grid(cfg.w_path);
      if (gw.spec.dims != spec.dims)
        throw pvc::io_error(cfg.w_path + ": w grid dimensions differ from v");
      c.w = std::move(gw.field);
    }
  }
  if (c.v.size() != c.mesh.num_vertices() || c.w.size() != c.mesh.num_vertices())
    throw pvc::io_error("field length does not match the mesh");
  return c;
}

pvc::ExtractOptions extract_options(const JobConfig& cfg) {
  pvc::ExtractOptions opt;
  opt.eps_root_scale = cfg.eps_root;
  opt.eps_match_scale = cfg.eps_match;
  opt.max_chord_error = cfg.max_chord_error;
  opt.workers = cfg.workers;
  return opt;
}

struct PipelineOutput {
  pvc::NumeratorPass pass1;
  pvc::DenominatorPass pass2;
  std::vector<pvc::PVCurve> curves;
  std::vector<pvc::Diagnostic> diagnostics;
};

PipelineOutput run_pipeline(const LoadedCase& c, const JobConfig& cfg) {
  const pvc::ExtractOptions opt = extract_options(cfg);
  PipelineOutput out;
  out.pass1 = pvc::numerator_pass(c.mesh, c.v, c.w, opt);
  out.pass2 = pvc::denominator_pass(c.mesh, c.v, c.w, out.pass1, opt);

  if (cfg.inject_drop_segment >= 0 &&
      cfg.inject_drop_segment < static_cast<int>(out.pass2.segments.size()))
    out.pass2.segments.erase(out.pass2.segments.begin() + cfg.inject_drop_segment);

  pvc::StitchResult st = pvc::stitch(out.pass2.segments, out.pass1.points);
  out.curves = std::move(st.curves);
  const double tol = cfg.max_chord_error > 0.0 ? cfg.max_chord_error
                                               : 1e-4 * std::max(c.mesh.diameter(), 1e-30);
  for (pvc::PVCurve& curve : out.curves)
    curve.polyline = pvc::sample_polyline(curve, out.pass2.segments, tol);

  out.diagnostics = out.pass1.diagnostics;
  out.diagnostics.insert(out.diagnostics.end(), out.pass2.diagnostics.begin(),
                         out.pass2.diagnostics.end());
  out.diagnostics.insert(out.diagnostics.end(), st.diagnostics.begin(), st.diagnostics.end());
  return out;
}

int degeneracy_exit(const LoadedCase& c, const JobConfig& cfg, const PipelineOutput& out) {
  long long degenerate_cells = 0;
  for (const pvc::Diagnostic& d : out.diagnostics)
    if (d.kind == pvc::DiagnosticKind::DegenerateCell) ++degenerate_cells;
  const double fraction =
      static_cast<double>(out.pass1.degenerate_faces.size() + degenerate_cells) /
      static_cast<double>(c.mesh.num_faces() + c.mesh.num_tets());
  if (fraction <= cfg.max_degenerate_fraction) return 0;

  std::fprintf(stderr, "degenerate fraction %.3f exceeds limit %.3f\n", fraction,
               cfg.max_degenerate_fraction);
  int shown = 0;
  for (const pvc::Diagnostic& d : out.diagnostics) {
    if (d.kind != pvc::DiagnosticKind::DegenerateFace &&
        d.kind != pvc::DiagnosticKind::DegenerateCell)
      continue;
    std::fprintf(stderr, "  %s %d: %s\n", pvc::to_string(d.kind), d.id, d.detail.c_str());
    if (++shown >= 8) break;
  }
  return 2;
}

int run_extract(const JobConfig& cfg) {
  const LoadedCase c = load_case(cfg);
  const PipelineOutput out = run_pipeline(c, cfg);

  pvc::write_polylines(cfg.out_path, out.curves);
  pvc::write_diagnostics(cfg.diag_path, out.diagnostics, out.pass2.branch_histogram);

  std::printf("faces=%d tets=%d pv_points=%zu segments=%zu curves=%zu diagnostics=%zu\n",
              c.mesh.num_faces(), c.mesh.num_tets(), out.pass1.points.size(),
              out.pass2.segments.size(), out.curves.size(), out.diagnostics.size());
  return degeneracy_exit(c, cfg, out);
}

int run_verify(const JobConfig& cfg) {
  const LoadedCase c = load_case(cfg);
  const PipelineOutput out = run_pipeline(c, cfg);

  std::vector<int> cells;
  if (cfg.subsample > 0 && cfg.subsample < c.mesh.num_tets()) {
    for (int i = 0; i < cfg.subsample; ++i)
      cells.push_back(static_cast<int>(static_cast<long long>(i) * c.mesh.num_tets() /
                                       cfg.subsample));
  }

  pvc::OracleOptions opt;
  opt.cluster_threshold = cfg.residual_threshold;
  pvc::OracleReport report =
      pvc::verify_segments(c.mesh, c.v, c.w, out.pass2.segments, cfg.grid_n, opt, cells);
  report.case_id = cfg.mesh_path.empty() ? cfg.v_path : cfg.mesh_path;
  pvc::write_oracle_report(cfg.report_path, report);

  std::printf("verdict=%s max_residual=%.3e clusters=%d/%d segments=%d/%d\n",
              pvc::to_string(report.verdict), report.max_residual, report.matched_clusters,
              report.matched_clusters + report.unmatched_clusters, report.matched_segments,
              report.matched_segments + report.unmatched_segments);
  if (report.verdict == pvc::OracleVerdict::Disagree) return 3;
  return degeneracy_exit(c, cfg, out);
}

int run_tessellate_info(const JobConfig& cfg, const std::vector<int>& dims,
                        const std::vector<double>& spacing, const std::vector<double>& origin) {
  pvc::GridSpec spec;
  if (!cfg.grid_path.empty()) {
    spec = pvc::read_raw_grid(cfg.grid_path).spec;
  } else if (dims.size() == 3) {
    spec.dims = {dims[0], dims[1], dims[2]};
    if (spacing.size() == 3) spec.spacing = pvc::Vec3(spacing[0], spacing[1], spacing[2]);
    if (origin.size() == 3) spec.origin = pvc::Vec3(origin[0], origin[1], origin[2]);
  } else {
    throw pvc::io_error("tessellate-info needs --grid FILE or --dims nx ny nz");
  }

  const pvc::TetMesh mesh = pvc::tessellate_grid(spec);
  int boundary = 0;
  for (const auto& f : mesh.faces) boundary += f.boundary() ? 1 : 0;
  double volume = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) volume += mesh.tet_volume(t);
  const double box = (spec.dims[0] - 1) * spec.spacing[0] * (spec.dims[1] - 1) *
                     spec.spacing[1] * (spec.dims[2] - 1) * spec.spacing[2];

  std::printf("dims=%dx%dx%d vertices=%d tets=%d faces=%d interior_faces=%d boundary_faces=%d\n",
              spec.dims[0], spec.dims[1], spec.dims[2], mesh.num_vertices(), mesh.num_tets(),
              mesh.num_faces(), mesh.num_faces() - boundary, boundary);
  std::printf("tet_volume_sum=%.17g bbox_volume=%.17g\n", volume, box);
  return 0;
}

void add_input_options(CLI::App* cmd, JobConfig& cfg) {
  auto* mesh = cmd->add_option("--mesh", cfg.mesh_path, "ASCII tetrahedral mesh with fields");
  auto* v = cmd->add_option("--v", cfg.v_path, "raw grid file for the v field");
  auto* w = cmd->add_option("--w", cfg.w_path, "raw grid file for the w field");
  auto* derive = cmd->add_option("--derive", cfg.derive,
                                 "derive w from v; the only recognized value is sujudi-haimes");
  derive->check(CLI::IsMember({"sujudi-haimes"}));
  cmd->add_option("--grid", cfg.grid_path, "raw grid file supplying geometry (defaults to --v)");
  mesh->excludes(v);
  w->excludes(derive);
  cmd->add_option("--workers", cfg.workers, "worker thread count")->check(CLI::PositiveNumber);
  cmd->add_option("--eps-root", cfg.eps_root, "root identification tolerance scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--eps-match", cfg.eps_match, "endpoint matching tolerance scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--residual-threshold", cfg.residual_threshold,
                  "oracle cluster residual threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-chord-error", cfg.max_chord_error,
                  "polyline chord tolerance (0 = 1e-4 of the mesh diameter)");
  cmd->add_option("--max-degenerate-fraction", cfg.max_degenerate_fraction,
                  "degenerate face/cell fraction above which the exit code is 2");
  cmd->add_option("--inject-drop-segment", cfg.inject_drop_segment,
                  "test hook: drop the given segment before stitching/verifying")
      ->group("");  // hidden
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic parallel-vector curve extraction on tetrahedral meshes"};
  app.require_subcommand(1);

  JobConfig cfg;

  CLI::App* extract = app.add_subcommand("extract", "extract PV curves and export polylines");
  add_input_options(extract, cfg);
  extract->add_option("--out", cfg.out_path, "polyline output path");
  extract->add_option("--diag", cfg.diag_path, "diagnostics output path");

  CLI::App* verify = app.add_subcommand("verify", "extract, then check against the sampling oracle");
  add_input_options(verify, cfg);
  verify->add_option("--out", cfg.out_path, "polyline output path");
  verify->add_option("--diag", cfg.diag_path, "diagnostics output path");
  verify->add_option("--report", cfg.report_path, "oracle report output path");
  verify->add_option("--grid-n", cfg.grid_n, "oracle lattice resolution")->check(CLI::PositiveNumber);
  verify->add_option("--subsample", cfg.subsample, "verify only this many evenly spaced cells");

  std::vector<int> dims;
  std::vector<double> spacing, origin;
  CLI::App* info = app.add_subcommand("tessellate-info", "print tessellation statistics");
  info->add_option("--grid", cfg.grid_path, "raw grid file supplying geometry");
  info->add_option("--dims", dims, "vertex counts nx ny nz")->expected(3);
  info->add_option("--spacing", spacing, "grid spacing sx sy sz")->expected(3);
  info->add_option("--origin", origin, "grid origin ox oy oz")->expected(3);

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return run_extract(cfg);
    if (verify->parsed()) return run_verify(cfg);
    return run_tessellate_info(cfg, dims, spacing, origin);
  } catch (const pvc::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
