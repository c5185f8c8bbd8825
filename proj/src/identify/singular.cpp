#include "identify/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/errors.hpp"

namespace recho::identify {

using geometry::BoundaryCotangentSample;
using geometry::CircleBoundary;
using geometry::CotangentSample;
using geometry::SpeedField;

ExtractOptions extract_options(const IdentifySpec& spec, bool partial) {
  ExtractOptions o;
  o.threshold = spec.threshold;
  o.dead_time_steps = spec.dead_time_steps;
  o.min_component = spec.min_component;
  o.partial = partial;
  return o;
}

namespace {

struct Peak {
  int channel;
  double r;          // refined arrival time
  double amplitude;  // |du/dt| at the peak
  double slope;      // dr/dzeta from the slant stack
};

// Union-find for single-linkage clustering.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<SingularSample> extract_singular_samples(const CauchyRecord& data,
                                                     const CircleBoundary& omega,
                                                     const SpeedField& speed,
                                                     const ExtractOptions& opt) {
  const TimeSeriesRecord& u = data.dirichlet;
  const int nch = u.n_channels();
  const int nt = u.n_steps();
  if (nt < 5) throw SolverError("record too short for singular extraction");

  // du/dt by centered differences.
  std::vector<double> v(static_cast<size_t>(nt) * nch, 0.0);
  auto vat = [&](int k, int c) -> double& { return v[static_cast<size_t>(k) * nch + c]; };
  for (int k = 1; k + 1 < nt; ++k)
    for (int c = 0; c < nch; ++c)
      vat(k, c) = (u.at(k + 1, c) - u.at(k - 1, c)) / (2.0 * u.dt);

  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax <= 0.0) throw SolverError("no singular arrivals detected");
  const double cut = opt.threshold * vmax;

  // Per-channel local maxima of |v| with non-max suppression.
  std::vector<Peak> peaks;
  const int dead = std::max(1, static_cast<int>(opt.dead_time_steps));
  for (int c = 0; c < nch; ++c) {
    std::vector<int> cand;
    for (int k = 2; k + 2 < nt; ++k) {
      const double a = std::abs(vat(k, c));
      if (a < cut) continue;
      if (a >= std::abs(vat(k - 1, c)) && a > std::abs(vat(k + 1, c))) cand.push_back(k);
    }
    // Strongest-first suppression inside the dead-time window.
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      return std::abs(vat(a, c)) > std::abs(vat(b, c));
    });
    std::vector<int> kept;
    for (int k : cand) {
      bool close = false;
      for (int j : kept)
        if (std::abs(j - k) < dead) {
          close = true;
          break;
        }
      if (!close) kept.push_back(k);
    }
    for (int k : kept) {
      // Sub-step refinement of the arrival time by a parabola on |v|.
      const double a0 = std::abs(vat(k - 1, c)), a1 = std::abs(vat(k, c)),
                   a2 = std::abs(vat(k + 1, c));
      const double den = a0 - 2.0 * a1 + a2;
      double frac = 0.0;
      if (std::abs(den) > 1e-300) frac = std::clamp(0.5 * (a0 - a2) / den, -0.5, 0.5);
      peaks.push_back({c, u.time_of(k) + frac * u.dt, a1, 0.0});
    }
  }
  if (peaks.empty()) throw SolverError("no singular arrivals detected");

  // Channel geometry. Channels are assumed equally spaced in arclength along
  // the (possibly partial) recording arc.
  std::vector<double> zeta(nch);
  for (int c = 0; c < nch; ++c) zeta[c] = omega.arclength_of(u.channels[c].pos);
  const double circum = omega.length();
  auto zeta_gap = [&](int a, int b) {
    double d = zeta[b] - zeta[a];
    if (d > 0.5 * circum) d -= circum;
    if (d < -0.5 * circum) d += circum;
    return d;
  };
  // Adjacent-channel spacing (wrap-aware); uniform by construction.
  double dzeta = circum / nch;
  if (nch >= 2) {
    const double g = std::abs(zeta_gap(0, 1));
    if (g > 1e-12) dzeta = g;
  }

  // Slant stack around each peak: scan slopes p with |c(y) p| <= 1.
  for (Peak& pk : peaks) {
    const double c_y = speed.value(u.channels[pk.channel].pos);
    const double pmax = 1.0 / c_y;
    const int nslope = 41;
    double best_e = -1.0, best_p = 0.0;
    std::vector<double> energies(nslope);
    for (int is = 0; is < nslope; ++is) {
      const double p = -pmax + 2.0 * pmax * is / (nslope - 1);
      double e = 0.0;
      for (int dc = -opt.slant_half_channels; dc <= opt.slant_half_channels; ++dc) {
        int cc = pk.channel + dc;
        if (opt.partial) {
          if (cc < 0 || cc >= nch) continue;
        } else {
          cc = (cc % nch + nch) % nch;
        }
        const double shift = p * zeta_gap(pk.channel, cc);
        for (int dk = -opt.slant_half_samples; dk <= opt.slant_half_samples; ++dk) {
          const double t = pk.r + shift + dk * u.dt;
          const double f = (t - u.t_start) / u.dt;
          const int k = static_cast<int>(f);
          if (k < 1 || k + 2 >= nt) continue;
          const double a = f - k;
          const double val = vat(k, cc) * (1.0 - a) + vat(k + 1, cc) * a;
          e += val * val;
        }
      }
      energies[is] = e;
      if (e > best_e) {
        best_e = e;
        best_p = p;
      }
    }
    // Parabolic refinement over the slope grid.
    int ib = static_cast<int>(std::lround((best_p + pmax) * (nslope - 1) / (2.0 * pmax)));
    if (ib >= 1 && ib + 1 < nslope) {
      const double e0 = energies[ib - 1], e1 = energies[ib], e2 = energies[ib + 1];
      const double den = e0 - 2.0 * e1 + e2;
      if (std::abs(den) > 1e-300) {
        const double frac = std::clamp(0.5 * (e0 - e2) / den, -0.5, 0.5);
        best_p += frac * 2.0 * pmax / (nslope - 1);
      }
    }
    pk.slope = best_p;
  }

  // Assemble samples on the unit cosphere: tau = 1, eta' = -c(y) dr/dzeta.
  std::vector<SingularSample> out;
  out.reserve(peaks.size());
  for (const Peak& pk : peaks) {
    const Channel& ch = u.channels[pk.channel];
    const double c_y = speed.value(ch.pos);
    SingularSample s;
    s.b.r = pk.r;
    s.b.y = ch.pos;
    s.b.tau = 1.0;
    s.b.eta_prime = std::clamp(-c_y * pk.slope, -1.0, 1.0);
    s.amplitude = pk.amplitude;
    s.channel = pk.channel;
    out.push_back(s);
  }

  // Single-linkage clustering in normalized (t, arclength, slope) space.
  UnionFind uf(out.size());
  const double t_tol = opt.link_time_steps * u.dt;
  for (size_t a = 0; a < out.size(); ++a) {
    for (size_t b = a + 1; b < out.size(); ++b) {
      int dch = std::abs(out[a].channel - out[b].channel);
      if (!opt.partial) dch = std::min(dch, nch - dch);
      if (dch == 0 || dch > opt.link_channels) continue;
      const double dz = zeta_gap(out[a].channel, out[b].channel);
      const double p_mean = -0.5 * (out[a].b.eta_prime + out[b].b.eta_prime) /
                            speed.value(out[a].b.y);
      if (std::abs(out[b].b.r - out[a].b.r - p_mean * dz) > t_tol * dch) continue;
      if (std::abs(out[a].b.eta_prime - out[b].b.eta_prime) > opt.link_slope * dch) continue;
      uf.unite(static_cast<int>(a), static_cast<int>(b));
    }
  }
  // Renumber components, dropping those below the size cutoff.
  std::vector<int> size_of(out.size(), 0);
  for (size_t i = 0; i < out.size(); ++i) ++size_of[uf.find(static_cast<int>(i))];
  std::vector<int> id_of(out.size(), -1);
  int next_id = 0;
  std::vector<SingularSample> kept;
  for (size_t i = 0; i < out.size(); ++i) {
    const int root = uf.find(static_cast<int>(i));
    if (size_of[root] < opt.min_component) continue;
    if (id_of[root] < 0) id_of[root] = next_id++;
    out[i].component_id = id_of[root];
    kept.push_back(out[i]);
  }
  if (kept.empty()) throw SolverError("no singular arrivals detected");
  return kept;
}

BackPropagated back_propagate(const std::vector<SingularSample>& samples, double t,
                              const CircleBoundary& omega, const SpeedField& speed) {
  BackPropagated out;
  out.samples.reserve(samples.size());
  for (const SingularSample& s : samples) {
    if (s.b.r <= t + 1e-12) {
      ++out.dropped;
      continue;
    }
    try {
      out.samples.push_back(geometry::psi_inverse(t, s.b, omega, speed));
    } catch (const GeometryError&) {
      ++out.dropped;
    }
  }
  return out;
}

int component_count(const std::vector<SingularSample>& samples) {
  int m = -1;
  for (const SingularSample& s : samples) m = std::max(m, s.component_id);
  return m + 1;
}

}  // namespace recho::identify
