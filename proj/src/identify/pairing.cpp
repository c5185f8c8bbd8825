#include "identify/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace recho::identify {

using geometry::CircleBoundary;
using geometry::CotangentSample;
using geometry::SpeedField;

PairingOptions pairing_options(const IdentifySpec& spec, const GridGeom& grid, double dt,
                               bool partial) {
  PairingOptions o;
  o.pair_threshold = spec.pair_threshold;
  o.delta_x = spec.delta_x_cells * std::max(grid.dx, grid.dy);
  o.delta_theta = spec.delta_theta_deg * M_PI / 180.0;
  o.delta_t = spec.delta_t_steps * dt;
  o.tie_margin = spec.tie_margin;
  o.max_samples = spec.max_component_samples;
  o.partial = partial;
  return o;
}

std::vector<double> make_t_grid(const CauchyRecord& data, int decimate) {
  std::vector<double> grid;
  const TimeSeriesRecord& d = data.dirichlet;
  const int step = std::max(1, decimate);
  for (int k = 0; k < d.n_steps(); k += step) grid.push_back(d.time_of(k));
  return grid;
}

namespace {

struct Cloud {
  std::vector<CotangentSample> pts;
};

// Deterministic decimation of a component to at most `cap` samples.
std::vector<SingularSample> decimate(const std::vector<SingularSample>& samples, int comp,
                                     int cap) {
  std::vector<SingularSample> sel;
  for (const SingularSample& s : samples)
    if (s.component_id == comp) sel.push_back(s);
  if (cap > 0 && static_cast<int>(sel.size()) > cap) {
    std::vector<SingularSample> thin;
    thin.reserve(cap);
    for (int i = 0; i < cap; ++i)
      thin.push_back(sel[static_cast<size_t>(i) * sel.size() / cap]);
    return thin;
  }
  return sel;
}

struct GridHash {
  double cell;
  std::unordered_map<long long, std::vector<int>> cells;

  explicit GridHash(double c) : cell(c) {}
  static long long key(int ix, int iy) {
    return (static_cast<long long>(ix) << 32) ^ static_cast<unsigned int>(iy);
  }
  void insert(const Vec2& p, int id) {
    const int ix = static_cast<int>(std::floor(p.x / cell));
    const int iy = static_cast<int>(std::floor(p.y / cell));
    cells[key(ix, iy)].push_back(id);
  }
  template <typename F>
  void near(const Vec2& p, F&& fn) const {
    const int ix = static_cast<int>(std::floor(p.x / cell));
    const int iy = static_cast<int>(std::floor(p.y / cell));
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const auto it = cells.find(key(ix + dx, iy + dy));
        if (it == cells.end()) continue;
        for (int id : it->second) fn(id);
      }
  }
};

double score_clouds(const Cloud& a, const Cloud& b, const PairingOptions& opt) {
  if (a.pts.empty() || b.pts.empty()) return 0.0;
  GridHash hash(std::max(opt.delta_x, 1e-12));
  for (size_t i = 0; i < b.pts.size(); ++i) hash.insert(b.pts[i].x, static_cast<int>(i));

  const double cos_tol = std::cos(M_PI - opt.delta_theta);  // xi_a vs xi_b: opposite
  std::vector<char> b_hit(b.pts.size(), 0);
  int a_hits = 0;
  for (const CotangentSample& pa : a.pts) {
    bool hit = false;
    hash.near(pa.x, [&](int id) {
      const CotangentSample& pb = b.pts[id];
      if ((pa.x - pb.x).norm() > opt.delta_x) return;
      // Match against the dual reflection of b: xi_a close to -xi_b.
      const double c = dot(pa.xi, pb.xi) / (pa.xi.norm() * pb.xi.norm());
      if (c <= cos_tol) {
        hit = true;
        b_hit[id] = 1;
      }
    });
    if (hit) ++a_hits;
  }
  int b_hits = 0;
  for (char h : b_hit) b_hits += h;
  const double frac_a = static_cast<double>(a_hits) / a.pts.size();
  const double frac_b = static_cast<double>(b_hits) / b.pts.size();
  return 0.5 * (frac_a + frac_b);
}

Cloud propagate(const std::vector<SingularSample>& comp, double t,
                const CircleBoundary& omega, const SpeedField& speed) {
  Cloud c;
  const BackPropagated bp = back_propagate(comp, t, omega, speed);
  c.pts = bp.samples;
  return c;
}

// Midpoints of matched pairs at the refined event time.
std::vector<CotangentSample> matched_midpoints(const Cloud& a, const Cloud& b,
                                               const PairingOptions& opt) {
  std::vector<CotangentSample> mids;
  if (a.pts.empty() || b.pts.empty()) return mids;
  GridHash hash(std::max(opt.delta_x, 1e-12));
  for (size_t i = 0; i < b.pts.size(); ++i) hash.insert(b.pts[i].x, static_cast<int>(i));
  const double cos_tol = std::cos(M_PI - opt.delta_theta);
  for (const CotangentSample& pa : a.pts) {
    int best = -1;
    double best_d = 1e300;
    hash.near(pa.x, [&](int id) {
      const CotangentSample& pb = b.pts[id];
      const double d = (pa.x - pb.x).norm();
      if (d > opt.delta_x) return;
      const double c = dot(pa.xi, pb.xi) / (pa.xi.norm() * pb.xi.norm());
      if (c <= cos_tol && d < best_d) {
        best_d = d;
        best = id;
      }
    });
    if (best >= 0) {
      const CotangentSample& pb = b.pts[best];
      CotangentSample m;
      m.x = (pa.x + pb.x) * 0.5;
      m.xi = normalized(pa.xi - pb.xi);  // reflected-b covector agrees with a
      m.tau = 1.0;
      mids.push_back(m);
    }
  }
  return mids;
}

}  // namespace

double pairing_score(const std::vector<SingularSample>& samples, int comp_a, int comp_b,
                     double t, const CircleBoundary& omega, const SpeedField& speed,
                     const PairingOptions& opt) {
  const auto sel_a = decimate(samples, comp_a, opt.max_samples);
  const auto sel_b = decimate(samples, comp_b, opt.max_samples);
  const Cloud ca = propagate(sel_a, t, omega, speed);
  const Cloud cb = propagate(sel_b, t, omega, speed);
  return score_clouds(ca, cb, opt);
}

std::vector<PairingEvent> detect_pairings(const std::vector<SingularSample>& samples,
                                          const std::vector<double>& t_grid,
                                          const CircleBoundary& omega,
                                          const SpeedField& speed,
                                          const PairingOptions& opt,
                                          std::vector<ScoreSeries>* series) {
  const int ncomp = component_count(samples);
  if (ncomp < 2) return {};

  std::vector<std::vector<SingularSample>> comps(ncomp);
  for (int c = 0; c < ncomp; ++c) comps[c] = decimate(samples, c, opt.max_samples);

  // Score series per unordered pair over the time grid; clouds are propagated
  // once per (component, t).
  const int nt = static_cast<int>(t_grid.size());
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < ncomp; ++a)
    for (int b = a + 1; b < ncomp; ++b) pairs.emplace_back(a, b);

  std::vector<std::vector<double>> scores(pairs.size(), std::vector<double>(nt, 0.0));
  parallel_for(nt, [&](size_t kb, size_t ke) {
    for (size_t k = kb; k < ke; ++k) {
      const double t = t_grid[k];
      std::vector<Cloud> clouds(ncomp);
      for (int c = 0; c < ncomp; ++c) clouds[c] = propagate(comps[c], t, omega, speed);
      for (size_t p = 0; p < pairs.size(); ++p)
        scores[p][k] = score_clouds(clouds[pairs[p].first], clouds[pairs[p].second], opt);
    }
  });

  if (series) {
    series->clear();
    for (size_t p = 0; p < pairs.size(); ++p) series->push_back({pairs[p], scores[p]});
  }

  const double dt_grid = nt >= 2 ? t_grid[1] - t_grid[0] : 0.0;
  std::vector<PairingEvent> events;
  for (size_t p = 0; p < pairs.size(); ++p) {
    const std::vector<double>& s = scores[p];
    // Local maxima above threshold.
    std::vector<int> maxima;
    for (int k = 0; k < nt; ++k) {
      if (s[k] < opt.pair_threshold) continue;
      if ((k == 0 || s[k] >= s[k - 1]) && (k + 1 == nt || s[k] > s[k + 1]))
        maxima.push_back(k);
    }
    // Merge maxima within delta_t, keeping the strongest.
    std::sort(maxima.begin(), maxima.end(), [&](int a, int b) { return s[a] > s[b]; });
    std::vector<int> kept;
    for (int k : maxima) {
      bool near = false;
      for (int j : kept)
        if (std::abs(j - k) * dt_grid < opt.delta_t) {
          near = true;
          break;
        }
      if (!near) kept.push_back(k);
    }
    std::sort(kept.begin(), kept.end());
    const bool multi = kept.size() > 1;  // same pair peaking at two distinct times
    for (int k : kept) {
      PairingEvent ev;
      ev.component_pair = pairs[p];
      ev.score = s[k];
      ev.partial = opt.partial;
      ev.ambiguous = multi;
      // Parabolic refinement with a plateau fallback.
      double t_hat = t_grid[k];
      if (k >= 1 && k + 1 < nt) {
        const double den = s[k - 1] - 2.0 * s[k] + s[k + 1];
        if (std::abs(den) > 1e-9) {
          const double frac = std::clamp(0.5 * (s[k - 1] - s[k + 1]) / den, -0.5, 0.5);
          t_hat += frac * dt_grid;
        } else {
          int lo = k, hi = k;
          while (lo - 1 >= 0 && s[lo - 1] >= s[k] - 1e-9) --lo;
          while (hi + 1 < nt && s[hi + 1] >= s[k] - 1e-9) ++hi;
          t_hat = 0.5 * (t_grid[lo] + t_grid[hi]);
        }
      }
      ev.t_hat = t_hat;
      const Cloud ca = propagate(comps[pairs[p].first], t_hat, omega, speed);
      const Cloud cb = propagate(comps[pairs[p].second], t_hat, omega, speed);
      ev.sigma_points = matched_midpoints(ca, cb, opt);
      if (!ev.sigma_points.empty()) events.push_back(std::move(ev));
    }
  }

  // Tie handling: events sharing a component either resolve by score or are
  // flagged ambiguous when the scores are within the tie margin.
  std::vector<char> drop(events.size(), 0);
  for (size_t i = 0; i < events.size(); ++i) {
    for (size_t j = i + 1; j < events.size(); ++j) {
      const auto& pi = events[i].component_pair;
      const auto& pj = events[j].component_pair;
      const bool share = pi.first == pj.first || pi.first == pj.second ||
                         pi.second == pj.first || pi.second == pj.second;
      if (!share) continue;
      if (std::abs(events[i].t_hat - events[j].t_hat) < opt.delta_t) continue;
      if (std::abs(events[i].score - events[j].score) <= opt.tie_margin) {
        events[i].ambiguous = true;
        events[j].ambiguous = true;
      } else if (events[i].score > events[j].score) {
        drop[j] = 1;
      } else {
        drop[i] = 1;
      }
    }
  }
  std::vector<PairingEvent> out;
  for (size_t i = 0; i < events.size(); ++i)
    if (!drop[i]) out.push_back(std::move(events[i]));
  std::sort(out.begin(), out.end(),
            [](const PairingEvent& a, const PairingEvent& b) { return a.t_hat < b.t_hat; });
  return out;
}

void fit_circle(const std::vector<Vec2>& pts, Vec2& center, double& radius,
                double& mean_dev) {
  // Kasa fit: solve [2x 2y 1][a b c]^T = x^2 + y^2 in least squares.
  double sxx = 0, sxy = 0, sx1 = 0, syy = 0, sy1 = 0, s11 = 0;
  double bx = 0, by = 0, b1 = 0;
  for (const Vec2& p : pts) {
    const double z = p.x * p.x + p.y * p.y;
    sxx += 4 * p.x * p.x;
    sxy += 4 * p.x * p.y;
    sx1 += 2 * p.x;
    syy += 4 * p.y * p.y;
    sy1 += 2 * p.y;
    s11 += 1;
    bx += 2 * p.x * z;
    by += 2 * p.y * z;
    b1 += z;
  }
  // Solve the symmetric 3x3 system by Cramer.
  const double m[3][3] = {{sxx, sxy, sx1}, {sxy, syy, sy1}, {sx1, sy1, s11}};
  const double rhs[3] = {bx, by, b1};
  auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det3(m);
  if (std::abs(d) < 1e-30) throw GeometryError("degenerate circle fit");
  double sol[3];
  for (int c = 0; c < 3; ++c) {
    double mm[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mm[i][j] = j == c ? rhs[i] : m[i][j];
    sol[c] = det3(mm) / d;
  }
  center = {sol[0], sol[1]};
  radius = std::sqrt(std::max(0.0, sol[2] + center.norm2()));
  mean_dev = 0.0;
  for (const Vec2& p : pts) mean_dev += std::abs((p - center).norm() - radius);
  mean_dev /= pts.size();
}

std::vector<SupportEstimate> estimate_supports(const std::vector<PairingEvent>& events) {
  if (events.empty()) throw GeometryError("insufficient Sigma samples: no events");
  std::vector<SupportEstimate> out;
  for (const PairingEvent& ev : events) {
    if (ev.sigma_points.size() < 8) throw GeometryError("insufficient Sigma samples");
    SupportEstimate est;
    est.t_hat = ev.t_hat;
    est.score = ev.score;
    est.partial = ev.partial;
    est.ambiguous = ev.ambiguous;
    est.cloud = ev.sigma_points;

    Vec2 centroid{0, 0};
    for (const auto& s : ev.sigma_points) centroid += s.x;
    centroid = centroid / static_cast<double>(ev.sigma_points.size());

    // Order by angle around the centroid; the largest angular gap decides
    // closed curve vs open arc.
    std::vector<std::pair<double, Vec2>> ang;
    ang.reserve(ev.sigma_points.size());
    for (const auto& s : ev.sigma_points)
      ang.emplace_back(std::atan2(s.x.y - centroid.y, s.x.x - centroid.x), s.x);
    std::sort(ang.begin(), ang.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double max_gap = 2.0 * M_PI + ang.front().first - ang.back().first;
    size_t gap_at = ang.size() - 1;  // gap between last and first
    for (size_t i = 0; i + 1 < ang.size(); ++i) {
      const double g = ang[i + 1].first - ang[i].first;
      if (g > max_gap) {
        max_gap = g;
        gap_at = i;
      }
    }
    est.closed = max_gap <= 60.0 * M_PI / 180.0;
    if (est.closed) {
      for (const auto& a : ang) est.polyline.push_back(a.second);
      double area = 0.0;
      for (size_t i = 0; i < est.polyline.size(); ++i) {
        const Vec2& p = est.polyline[i];
        const Vec2& q = est.polyline[(i + 1) % est.polyline.size()];
        area += cross(p, q);
      }
      est.enclosed_area = 0.5 * std::abs(area);
    } else {
      // Rotate so the largest gap splits the (open) polyline at its ends.
      for (size_t i = 1; i <= ang.size(); ++i)
        est.polyline.push_back(ang[(gap_at + i) % ang.size()].second);
    }

    std::vector<Vec2> pts;
    for (const auto& s : ev.sigma_points) pts.push_back(s.x);
    fit_circle(pts, est.circle_center, est.circle_radius, est.circle_mean_dev);
    out.push_back(std::move(est));
  }
  std::sort(out.begin(), out.end(),
            [](const SupportEstimate& a, const SupportEstimate& b) { return a.t_hat < b.t_hat; });
  return out;
}

}  // namespace recho::identify
