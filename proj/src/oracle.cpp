#include "pvc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "pvc/errors.hpp"

namespace pvc {

namespace {

// lattice resolution giving ~grid_n^3 points in the barycentric simplex
int lattice_side(int grid_n) {
  return std::max(10, static_cast<int>(std::lround(1.8171 * grid_n)));
}

struct TetSampler {
  Vec3 v[4];
  Vec3 w[4];
  double vscale = 0.0;
  double wscale = 0.0;
  double eps_norm;

  explicit TetSampler(const TetFields& f, double eps) : eps_norm(eps) {
    for (int i = 0; i < 4; ++i) {
      v[i] = f[i].v;
      w[i] = f[i].w;
      vscale = std::max(vscale, v[i].norm());
      wscale = std::max(wscale, w[i].norm());
    }
  }

  void fields_at(const Vec4& mu, Vec3& vv, Vec3& ww) const {
    vv = mu[0] * v[0] + mu[1] * v[1] + mu[2] * v[2] + mu[3] * v[3];
    ww = mu[0] * w[0] + mu[1] * w[1] + mu[2] * w[2] + mu[3] * w[3];
  }

  double residual(const Vec4& mu, bool* degenerate = nullptr) const {
    Vec3 vv, ww;
    fields_at(mu, vv, ww);
    const double nv = vv.norm(), nw = ww.norm();
    if (degenerate) *degenerate = (nv <= 1e-10 * vscale && nw <= 1e-10 * wscale);
    return vv.cross(ww).norm() / (nv * nw + eps_norm);
  }
};

std::int64_t pack(int i, int j, int k, int m) {
  return (static_cast<std::int64_t>(i) * (m + 1) + j) * (m + 1) + k;
}

// sample a segment's barycentric path densely enough that consecutive
// samples differ by at most `spacing` in the max norm
void refine_mu(const CurveSegment& seg, double l0, const Vec4& m0, double l1, const Vec4& m1,
               double spacing, int depth, std::vector<Vec4>& out) {
  if ((m1 - m0).cwiseAbs().maxCoeff() <= spacing || depth >= 22) {
    out.push_back(m1);
    return;
  }
  const double lm = 0.5 * (l0 + l1);
  if (lm == l0 || lm == l1) {
    out.push_back(m1);
    return;
  }
  const Vec4 mm = evaluate_segment(seg, lm).first;
  refine_mu(seg, l0, m0, lm, mm, spacing, depth + 1, out);
  refine_mu(seg, lm, mm, l1, m1, spacing, depth + 1, out);
}

std::vector<Vec4> sample_segment_path(const CurveSegment& seg, double spacing) {
  std::vector<Vec4> out;
  const auto arc = [&](double a, double b) {
    const Vec4 ma = evaluate_segment(seg, a).first;
    const Vec4 mb = evaluate_segment(seg, b).first;
    out.push_back(ma);
    refine_mu(seg, a, ma, b, mb, spacing, 0, out);
  };

  double cap = 1e6;
  if (!seg.closed_loop) {
    double scale = 0.0;
    if (!seg.interval.lo.is_infinity()) scale = std::max(scale, std::abs(seg.interval.lo.value()));
    if (!seg.interval.hi.is_infinity()) scale = std::max(scale, std::abs(seg.interval.hi.value()));
    cap = 1e6 * (1.0 + scale);
  }

  if (seg.closed_loop) {
    arc(-cap, cap);
    out.push_back(segment_mu_at_infinity(seg));
    return out;
  }

  const ExtendedReal& lo = seg.interval.lo;
  const ExtendedReal& hi = seg.interval.hi;
  if (lo.is_infinity() && hi.is_infinity()) return out;
  if (lo.is_infinity()) {
    arc(-cap, hi.value());
  } else if (hi.is_infinity()) {
    arc(lo.value(), cap);
  } else if (seg.interval.wraps()) {
    arc(lo.value(), cap);
    arc(-cap, hi.value());
  } else {
    arc(lo.value(), hi.value());
  }
  if (seg.has_w_critical_point) out.push_back(segment_mu_at_infinity(seg));
  return out;
}

}  // namespace

const char* to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::Agree: return "agree";
    case OracleVerdict::Disagree: return "disagree";
    default: return "degenerate";
  }
}

std::vector<ResidualSample> sample_tet_residual(const TetFields& fields, int grid_n,
                                                double eps_norm) {
  if (grid_n < 10) throw bad_dims_error("sample_tet_residual: grid_n must be at least 10");
  const int m = lattice_side(grid_n);
  const TetSampler sampler(fields, eps_norm);

  std::vector<ResidualSample> out;
  out.reserve(static_cast<std::size_t>(m) * m * m / 6);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m - i; ++j)
      for (int k = 0; k <= m - i - j; ++k) {
        const Vec4 mu(static_cast<double>(i) / m, static_cast<double>(j) / m,
                      static_cast<double>(k) / m, static_cast<double>(m - i - j - k) / m);
        bool degenerate = false;
        const double r = sampler.residual(mu, &degenerate);
        out.push_back({mu, r, degenerate});
      }
  return out;
}

OracleReport verify_segments(const TetMesh& mesh, const VertexField& v, const VertexField& w,
                             const std::vector<CurveSegment>& segments, int grid_n,
                             const OracleOptions& opt, std::span<const int> cells) {
  OracleReport report;
  const int m = lattice_side(grid_n);
  const double cell_size = 1.0 / m;

  std::vector<int> all_cells;
  if (cells.empty()) {
    all_cells.resize(mesh.num_tets());
    for (int t = 0; t < mesh.num_tets(); ++t) all_cells[t] = t;
    cells = all_cells;
  }

  std::unordered_map<int, std::vector<int>> cell_segments;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s)
    cell_segments[segments[s].tet_id].push_back(s);

  for (int t : cells) {
    const TetFields fields = gather_tet_fields(mesh, v, w, t);
    const TetSampler sampler(fields, opt.eps_norm);

    // dense scan: collect sub-threshold evidence
    std::vector<std::array<int, 3>> evidence;
    std::int64_t total = 0;
    const Vec3 dv2 = (fields[2].v - fields[3].v) / m;
    const Vec3 dw2 = (fields[2].w - fields[3].w) / m;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m - i; ++j) {
        const double fi = static_cast<double>(i) / m, fj = static_cast<double>(j) / m;
        const double f3 = 1.0 - fi - fj;
        Vec3 vv = fi * fields[0].v + fj * fields[1].v + f3 * fields[3].v;
        Vec3 ww = fi * fields[0].w + fj * fields[1].w + f3 * fields[3].w;
        for (int k = 0; k <= m - i - j; ++k, vv += dv2, ww += dw2) {
          ++total;
          const double nv = vv.norm(), nw = ww.norm();
          if (nv <= 1e-10 * sampler.vscale && nw <= 1e-10 * sampler.wscale) continue;
          const double r = vv.cross(ww).norm() / (nv * nw + opt.eps_norm);
          if (r < opt.cluster_threshold) evidence.push_back({i, j, k});
        }
      }

    const auto it = cell_segments.find(t);
    const bool has_segments = it != cell_segments.end();

    if (static_cast<double>(evidence.size()) > opt.degenerate_cell_fraction * total) {
      report.degenerate_cells++;
      continue;  // space-filling parallel locus: not a curve
    }

    // sampled geometry of this cell's segments
    std::vector<std::vector<Vec4>> paths;
    if (has_segments)
      for (int s : it->second) {
        paths.push_back(sample_segment_path(segments[s], 0.5 * cell_size));
        for (const Vec4& mu : paths.back()) {
          if (!mu.allFinite()) continue;
          bool degenerate = false;
          const double r = sampler.residual(mu, &degenerate);
          if (!degenerate) report.max_residual = std::max(report.max_residual, r);
        }
      }

    // soundness: low-residual clusters must be explained
    std::unordered_set<std::int64_t> evidence_set;
    for (const auto& e : evidence) evidence_set.insert(pack(e[0], e[1], e[2], m));
    std::unordered_set<std::int64_t> seen;
    for (const auto& e : evidence) {
      const std::int64_t key = pack(e[0], e[1], e[2], m);
      if (seen.count(key)) continue;
      // flood the connected component
      std::vector<std::array<int, 3>> stack{e}, members;
      seen.insert(key);
      while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        members.push_back(p);
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj)
            for (int dk = -1; dk <= 1; ++dk) {
              if (di == 0 && dj == 0 && dk == 0) continue;
              const int ni = p[0] + di, nj = p[1] + dj, nk = p[2] + dk;
              if (ni < 0 || nj < 0 || nk < 0 || ni + nj + nk > m) continue;
              const std::int64_t nkey = pack(ni, nj, nk, m);
              if (!evidence_set.count(nkey) || seen.count(nkey)) continue;
              seen.insert(nkey);
              stack.push_back({ni, nj, nk});
            }
      }

      bool matched = false;
      bool boundary = false;
      for (const auto& p : members) {
        const int l = m - p[0] - p[1] - p[2];
        if (std::min(std::min(p[0], p[1]), std::min(p[2], l)) <= 1) boundary = true;
        const Vec4 mu(static_cast<double>(p[0]) / m, static_cast<double>(p[1]) / m,
                      static_cast<double>(p[2]) / m, static_cast<double>(l) / m);
        for (const auto& path : paths) {
          for (const Vec4& q : path)
            if ((q - mu).cwiseAbs().maxCoeff() <= 2.0 * cell_size) {
              matched = true;
              break;
            }
          if (matched) break;
        }
        if (matched) break;
      }
      if (matched)
        report.matched_clusters++;
      else if (boundary)
        report.boundary_clusters++;
      else
        report.unmatched_clusters++;
    }

    // completeness: every segment must run near a discrete residual minimum
    if (has_segments) {
      const auto residual_at = [&](int i, int j, int k) {
        const int l = m - i - j - k;
        const Vec4 mu(static_cast<double>(i) / m, static_cast<double>(j) / m,
                      static_cast<double>(k) / m, static_cast<double>(l) / m);
        return sampler.residual(mu);
      };
      const auto is_local_min = [&](int i, int j, int k, double r0) {
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj)
            for (int dk = -1; dk <= 1; ++dk) {
              if (di == 0 && dj == 0 && dk == 0) continue;
              const int ni = i + di, nj = j + dj, nk = k + dk;
              if (ni < 0 || nj < 0 || nk < 0 || ni + nj + nk > m) continue;
              if (residual_at(ni, nj, nk) < r0) return false;
            }
        return true;
      };

      for (std::size_t pi = 0; pi < paths.size(); ++pi) {
        bool matched = false;
        for (const Vec4& q : paths[pi]) {
          if (!q.allFinite()) continue;
          const int ci = static_cast<int>(std::lround(q[0] * m));
          const int cj = static_cast<int>(std::lround(q[1] * m));
          const int ck = static_cast<int>(std::lround(q[2] * m));
          for (int di = -2; di <= 2 && !matched; ++di)
            for (int dj = -2; dj <= 2 && !matched; ++dj)
              for (int dk = -2; dk <= 2 && !matched; ++dk) {
                const int ni = ci + di, nj = cj + dj, nk = ck + dk;
                if (ni < 0 || nj < 0 || nk < 0 || ni + nj + nk > m) continue;
                const double r0 = residual_at(ni, nj, nk);
                if (r0 > opt.flag_threshold) continue;
                if (is_local_min(ni, nj, nk, r0)) matched = true;
              }
          if (matched) break;
        }
        if (matched)
          report.matched_segments++;
        else
          report.unmatched_segments++;
      }
    }
  }

  if (report.unmatched_clusters > 0 || report.unmatched_segments > 0)
    report.verdict = OracleVerdict::Disagree;
  else if (report.degenerate_cells > 0)
    report.verdict = OracleVerdict::Degenerate;
  else
    report.verdict = OracleVerdict::Agree;
  return report;
}

}  // namespace pvc
