#include "pvc/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pvc/errors.hpp"
#include "pvc/parallel.hpp"

namespace pvc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 embed_on_face(const TetMesh& mesh, int face_id, const Vec3& mu) {
  const auto& f = mesh.faces[face_id];
  Vec3 pos = Vec3::Zero();
  for (int i = 0; i < 3; ++i) pos += mu[i] * mesh.vertices[f.v[i]];
  return pos;
}

std::vector<int> collect_marked(const std::vector<char>& marks) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(marks.size()); ++i)
    if (marks[i]) out.push_back(i);
  return out;
}

}  // namespace

const char* to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::DegenerateFace: return "degenerate_face";
    case DiagnosticKind::DegenerateCell: return "degenerate_cell";
    case DiagnosticKind::AmbiguousJunction: return "ambiguous_junction";
    default: return "unmatched_endpoint";
  }
}

NumeratorPass numerator_pass(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                             const ExtractOptions& opt) {
  const int nf = mesh.num_faces();
  std::vector<FaceSolveResult> slots(nf);
  std::vector<char> zero_poly(nf, 0);
  parallel_for(nf, opt.workers, [&](int f) {
    const TriFields tri = gather_face_fields(mesh, v, w, f);
    const CubicPolynomial poly = triangle_characteristic(tri);
    zero_poly[f] = is_zero_polynomial(poly) ? 1 : 0;
    slots[f] = solve_face_points(tri, poly, opt.eps_bary, opt.eps_root_scale);
  });

  NumeratorPass out;
  out.face_points.resize(nf);
  std::vector<char> labeled(mesh.num_tets(), 0);
  std::vector<char> degen(mesh.num_tets(), 0);
  for (int f = 0; f < nf; ++f) {
    const FaceSolveResult& fs = slots[f];
    const int begin = static_cast<int>(out.points.size());
    for (const FacePoint& p : fs.points)
      out.points.push_back({f, p.lambda, p.mu, embed_on_face(mesh, f, p.mu)});
    out.face_points[f] = {begin, static_cast<int>(out.points.size())};

    const auto& face = mesh.faces[f];
    if (!fs.points.empty())
      for (int t : face.tet)
        if (t >= 0) labeled[t] = 1;
    if (fs.degenerate) {
      out.degenerate_faces.push_back(f);
      out.diagnostics.push_back({DiagnosticKind::DegenerateFace, f,
                                 zero_poly[f] ? "zero_polynomial" : "null_space_dimension"});
      for (int t : face.tet)
        if (t >= 0) degen[t] = 1;
    }
  }
  out.labeled_tets = collect_marked(labeled);
  out.degenerate_face_tets = collect_marked(degen);
  return out;
}

namespace {

int match_endpoint(const TetMesh& mesh, const NumeratorPass& pass1, int tet_id, double lambda,
                   const Vec3& position, double eps_match, double eps_pos) {
  int best = -1;
  double best_dl = kInf;
  for (int face : mesh.tet_faces[tet_id]) {
    const auto [begin, end] = pass1.face_points[face];
    for (int pi = begin; pi < end; ++pi) {
      const PVPoint& pv = pass1.points[pi];
      const double dl = std::abs(pv.lambda - lambda);
      if (dl > eps_match * (1.0 + std::abs(lambda))) continue;
      if ((pv.position - position).norm() > eps_pos) continue;
      if (dl < best_dl || (dl == best_dl && pi < best)) {
        best = pi;
        best_dl = dl;
      }
    }
  }
  return best;
}

struct TetSlot {
  std::vector<CurveSegment> segments;
  std::vector<Diagnostic> diagnostics;
  int branches = 0;
};

}  // namespace

DenominatorPass denominator_pass(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                                 const NumeratorPass& pass1, const ExtractOptions& opt) {
  const double eps_pos = opt.eps_pos_scale * mesh.diameter();
  const int nl = static_cast<int>(pass1.labeled_tets.size());
  std::vector<TetSlot> slots(nl);

  parallel_for(nl, opt.workers, [&](int idx) {
    const int t = pass1.labeled_tets[idx];
    TetSlot& slot = slots[idx];

    const EigenSystem sys = build_system(gather_tet_fields(mesh, v, w, t));
    const TetPolynomials tp = numerators(sys);
    if (tp.degenerate_flag != TetDegeneracy::None) {
      slot.diagnostics.push_back(
          {DiagnosticKind::DegenerateCell, t,
           tp.degenerate_flag == TetDegeneracy::ZeroQ ? "zero_q" : "zero_everything"});
      return;
    }

    const LambdaIntervalSet regions = feasible_regions(tp, opt.eps_root_scale);
    slot.branches = regions.components();
    if (regions.is_empty()) return;

    std::array<Rational, 4> mu;
    for (int i = 0; i < 4; ++i) {
      const CubicPolynomial& Pi = tp.P(i);
      if (is_zero_polynomial(Pi)) {
        mu[i] = {CubicPolynomial::constant(0.0), CubicPolynomial::constant(1.0)};
      } else {
        const DeflationResult d = deflate_common_roots(Pi, tp.Q, opt.eps_root_scale);
        mu[i] = {d.p, d.q};
      }
    }
    const Mat34 corners = mesh.tet_corners(t);

    if (regions.is_full()) {
      CurveSegment seg;
      seg.tet_id = t;
      seg.interval = {ExtendedReal::infinity(), ExtendedReal::infinity(), true, true, true};
      seg.mu = mu;
      seg.corners = corners;
      seg.has_w_critical_point = true;
      seg.closed_loop = true;
      slot.segments.push_back(seg);
      return;
    }

    for (const LambdaInterval& iv : regions.intervals()) {
      CurveSegment seg;
      seg.tet_id = t;
      seg.interval = iv;
      seg.mu = mu;
      seg.corners = corners;
      seg.has_w_critical_point = iv.contains_infinity;
      for (int e = 0; e < 2; ++e) {
        const ExtendedReal& end = (e == 0) ? iv.lo : iv.hi;
        if (end.is_infinity()) continue;
        const double le = end.value();
        Vec4 mu_e;
        for (int i = 0; i < 4; ++i) mu_e[i] = evaluate(mu[i], le);
        const Vec3 pos = corners * mu_e;
        if (!pos.allFinite()) {
          slot.diagnostics.push_back({DiagnosticKind::UnmatchedEndpoint, t,
                                      "open endpoint at pole, lambda=" + std::to_string(le)});
          continue;
        }
        const int pv = match_endpoint(mesh, pass1, t, le, pos, opt.eps_match_scale, eps_pos);
        if (pv < 0)
          slot.diagnostics.push_back(
              {DiagnosticKind::UnmatchedEndpoint, t, "lambda=" + std::to_string(le)});
        seg.endpoint_pv[e] = pv;
      }
      slot.segments.push_back(seg);
    }
  });

  DenominatorPass out;
  for (const TetSlot& slot : slots) {
    out.segments.insert(out.segments.end(), slot.segments.begin(), slot.segments.end());
    out.diagnostics.insert(out.diagnostics.end(), slot.diagnostics.begin(),
                           slot.diagnostics.end());
    out.branch_histogram[std::min<std::size_t>(slot.branches, 7)]++;
  }

  // cells reached only through degenerate faces are classified, not extracted
  std::vector<char> face_degen(mesh.num_faces(), 0);
  for (int f : pass1.degenerate_faces) face_degen[f] = 1;
  std::vector<char> cell_diagnosed(mesh.num_tets(), 0);
  for (const Diagnostic& d : out.diagnostics)
    if (d.kind == DiagnosticKind::DegenerateCell) cell_diagnosed[d.id] = 1;
  for (int t : pass1.degenerate_face_tets) {
    if (cell_diagnosed[t]) continue;
    const TetPolynomials tp = numerators(build_system(gather_tet_fields(mesh, v, w, t)));
    if (tp.degenerate_flag != TetDegeneracy::None) {
      out.diagnostics.push_back(
          {DiagnosticKind::DegenerateCell, t,
           tp.degenerate_flag == TetDegeneracy::ZeroQ ? "zero_q" : "zero_everything"});
    } else {
      int ndegen = 0;
      for (int f : mesh.tet_faces[t]) ndegen += face_degen[f];
      if (ndegen == 4)
        out.diagnostics.push_back({DiagnosticKind::DegenerateCell, t, "all_faces_degenerate"});
    }
  }
  return out;
}

std::pair<Vec4, Vec3> evaluate_segment(const CurveSegment& seg, double lambda) {
  if (!std::isfinite(lambda)) throw out_of_interval_error("evaluate_segment: non-finite lambda");
  if (!seg.closed_loop && !seg.interval.contains(lambda))
    throw out_of_interval_error("evaluate_segment: lambda outside the branch interval");
  Vec4 mu;
  for (int i = 0; i < 4; ++i) mu[i] = evaluate(seg.mu[i], lambda);
  return {mu, seg.corners * mu};
}

Vec4 segment_mu_at_infinity(const CurveSegment& seg) {
  Vec4 mu;
  for (int i = 0; i < 4; ++i) {
    const Rational& r = seg.mu[i];
    if (is_zero_polynomial(r.num)) {
      mu[i] = 0.0;
      continue;
    }
    const int dn = effective_degree(r.num);
    const int dd = effective_degree(r.den);
    if (dn < dd)
      mu[i] = 0.0;
    else if (dn == dd)
      mu[i] = r.num[dn] / r.den[dd];
    else
      mu[i] = std::copysign(kInf, r.num[dn] / r.den[dd]);
  }
  return mu;
}

StitchResult stitch(const std::vector<CurveSegment>& segments,
                    const std::vector<PVPoint>& points) {
  (void)points;
  const int n = static_cast<int>(segments.size());
  struct Link {
    int seg = -1;
    int end = -1;
  };
  std::vector<std::array<Link, 2>> links(n);
  std::map<int, std::vector<std::pair<int, int>>> buckets;
  for (int s = 0; s < n; ++s)
    for (int e = 0; e < 2; ++e) {
      const int pv = segments[s].endpoint_pv[e];
      if (pv >= 0) buckets[pv].push_back({s, e});
    }

  StitchResult out;
  for (const auto& [pv, ends] : buckets) {
    if (ends.size() == 2) {
      const auto [s0, e0] = ends[0];
      const auto [s1, e1] = ends[1];
      links[s0][e0] = {s1, e1};
      links[s1][e1] = {s0, e0};
    } else if (ends.size() > 2) {
      out.diagnostics.push_back({DiagnosticKind::AmbiguousJunction, pv,
                                 std::to_string(ends.size()) + " segment ends meet"});
    }
  }

  std::vector<char> visited(n, 0);
  for (int s = 0; s < n; ++s) {
    if (visited[s]) continue;
    visited[s] = 1;
    std::vector<int> chain{s};
    bool closed = false;

    int cur = s, exit_end = 1;
    while (true) {
      const Link nx = links[cur][exit_end];
      if (nx.seg < 0) break;
      if (nx.seg == s) {
        closed = true;
        break;
      }
      visited[nx.seg] = 1;
      chain.push_back(nx.seg);
      cur = nx.seg;
      exit_end = 1 - nx.end;
    }
    if (!closed) {
      std::vector<int> back;
      cur = s;
      exit_end = 0;
      while (true) {
        const Link nx = links[cur][exit_end];
        if (nx.seg < 0) break;
        visited[nx.seg] = 1;
        back.push_back(nx.seg);
        cur = nx.seg;
        exit_end = 1 - nx.end;
      }
      std::reverse(back.begin(), back.end());
      back.insert(back.end(), chain.begin(), chain.end());
      chain = std::move(back);
    }

    if (!closed && chain.front() > chain.back()) std::reverse(chain.begin(), chain.end());
    if (closed && chain.size() > 1) {
      const auto min_it = std::min_element(chain.begin(), chain.end());
      std::rotate(chain.begin(), min_it, chain.end());
      if (chain.back() < chain[1]) {  // canonical cycle direction
        std::reverse(chain.begin() + 1, chain.end());
      }
    }

    PVCurve curve;
    curve.segment_ids = std::move(chain);
    curve.closed = closed;
    out.curves.push_back(std::move(curve));
  }

  std::sort(out.curves.begin(), out.curves.end(),
            [](const PVCurve& a, const PVCurve& b) { return a.segment_ids[0] < b.segment_ids[0]; });
  return out;
}

namespace {

double point_chord_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - a - t * ab).norm();
}

void refine_arc(const CurveSegment& seg, double l0, const Vec3& x0, double l1, const Vec3& x1,
                double tol, int depth, Polyline& out) {
  const double lm = 0.5 * (l0 + l1);
  if (lm == l0 || lm == l1) return;
  const Vec3 xm = evaluate_segment(seg, lm).second;
  // probe the midpoint and both quarter points against the chord
  double dev = point_chord_distance(xm, x0, x1);
  for (double lq : {0.5 * (l0 + lm), 0.5 * (lm + l1)})
    dev = std::max(dev, point_chord_distance(evaluate_segment(seg, lq).second, x0, x1));
  if (dev <= tol || depth >= 26) return;
  refine_arc(seg, l0, x0, lm, xm, tol, depth + 1, out);
  out.push_back({xm, lm, seg.tet_id});
  refine_arc(seg, lm, xm, l1, x1, tol, depth + 1, out);
}

// samples (l0 → l1] in traversal order; the l0 point is emitted by the caller
void emit_arc(const CurveSegment& seg, double l0, double l1, double tol, Polyline& out) {
  const Vec3 x0 = evaluate_segment(seg, l0).second;
  const Vec3 x1 = evaluate_segment(seg, l1).second;
  refine_arc(seg, l0, x0, l1, x1, tol, 0, out);
  out.push_back({x1, l1, seg.tet_id});
}

void emit_segment(const CurveSegment& seg, int entry_end, double tol, double cap,
                  bool include_entry, Polyline& out) {
  const auto critical_point = [&] {
    Vec4 mu_inf = segment_mu_at_infinity(seg);
    return PolylinePoint{seg.corners * mu_inf, kInf, seg.tet_id};
  };

  if (seg.closed_loop) {
    // whole-ring branch: opens and closes at the w-critical point
    if (include_entry) out.push_back(critical_point());
    out.push_back({evaluate_segment(seg, -cap).second, -cap, seg.tet_id});
    emit_arc(seg, -cap, cap, tol, out);
    out.push_back(critical_point());
    return;
  }

  const ExtendedReal entry = (entry_end == 0) ? seg.interval.lo : seg.interval.hi;
  const ExtendedReal exit = (entry_end == 0) ? seg.interval.hi : seg.interval.lo;
  const bool increasing = (entry_end == 0);

  if (entry.is_infinity()) {
    // the branch starts at the w-critical limit point
    if (include_entry) out.push_back(critical_point());
    const double from = increasing ? -cap : cap;
    out.push_back({evaluate_segment(seg, from).second, from, seg.tet_id});
    emit_arc(seg, from, exit.value(), tol, out);
    return;
  }

  if (include_entry)
    out.push_back({evaluate_segment(seg, entry.value()).second, entry.value(), seg.tet_id});

  if (exit.is_infinity()) {
    const double to = increasing ? cap : -cap;
    emit_arc(seg, entry.value(), to, tol, out);
    out.push_back(critical_point());
    return;
  }

  if (seg.interval.wraps()) {
    const double near_cap = increasing ? cap : -cap;
    const double far_cap = -near_cap;
    emit_arc(seg, entry.value(), near_cap, tol, out);
    out.push_back(critical_point());
    out.push_back({evaluate_segment(seg, far_cap).second, far_cap, seg.tet_id});
    emit_arc(seg, far_cap, exit.value(), tol, out);
    return;
  }

  emit_arc(seg, entry.value(), exit.value(), tol, out);
}

// entry end of each chain element; consecutive segments share a PV point
std::vector<int> chain_entry_ends(const PVCurve& curve, const std::vector<CurveSegment>& segs) {
  const auto& ids = curve.segment_ids;
  const int n = static_cast<int>(ids.size());
  std::vector<int> entry(n, 0);
  if (n < 2) return entry;
  for (int k = 0; k + 1 < n; ++k) {
    const CurveSegment& a = segs[ids[k]];
    const CurveSegment& b = segs[ids[k + 1]];
    for (int ea = 0; ea < 2; ++ea)
      for (int eb = 0; eb < 2; ++eb)
        if (a.endpoint_pv[ea] >= 0 && a.endpoint_pv[ea] == b.endpoint_pv[eb]) {
          if (k == 0) entry[0] = 1 - ea;
          entry[k + 1] = eb;
        }
  }
  return entry;
}

}  // namespace

Polyline sample_polyline(const PVCurve& curve, const std::vector<CurveSegment>& segments,
                         double max_chord_error) {
  std::vector<double> finite_ends;
  for (int id : curve.segment_ids) {
    const CurveSegment& s = segments[id];
    if (!s.closed_loop) {
      if (!s.interval.lo.is_infinity()) finite_ends.push_back(std::abs(s.interval.lo.value()));
      if (!s.interval.hi.is_infinity()) finite_ends.push_back(std::abs(s.interval.hi.value()));
    }
  }
  double median = 0.0;
  if (!finite_ends.empty()) {
    std::sort(finite_ends.begin(), finite_ends.end());
    median = finite_ends[finite_ends.size() / 2];
  }
  const double cap = 1e6 * (1.0 + median);

  const std::vector<int> entries = chain_entry_ends(curve, segments);
  Polyline out;
  for (std::size_t k = 0; k < curve.segment_ids.size(); ++k)
    emit_segment(segments[curve.segment_ids[k]], entries[k], max_chord_error, cap, k == 0, out);
  return out;
}

ExtractionResult extract_curves(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                                const ExtractOptions& opt) {
  ExtractionResult result;
  result.pass1 = numerator_pass(mesh, v, w, opt);
  result.pass2 = denominator_pass(mesh, v, w, result.pass1, opt);

  StitchResult st = stitch(result.pass2.segments, result.pass1.points);
  result.curves = std::move(st.curves);

  const double tol =
      opt.max_chord_error > 0.0 ? opt.max_chord_error : 1e-4 * std::max(mesh.diameter(), 1e-30);
  for (PVCurve& c : result.curves)
    c.polyline = sample_polyline(c, result.pass2.segments, tol);

  result.diagnostics = result.pass1.diagnostics;
  result.diagnostics.insert(result.diagnostics.end(), result.pass2.diagnostics.begin(),
                            result.pass2.diagnostics.end());
  result.diagnostics.insert(result.diagnostics.end(), st.diagnostics.begin(),
                            st.diagnostics.end());
  return result;
}

}  // namespace pvc
