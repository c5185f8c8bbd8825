#include "wavefield/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace recho::wavefield {

using geometry::CircleBoundary;
using geometry::SpeedField;

double WaveSetup::dt() const {
  const double inv = std::sqrt(1.0 / (grid.dx * grid.dx) + 1.0 / (grid.dy * grid.dy));
  return solver.cfl / (speed->c_plus() * inv);
}

int WaveSetup::steps_for(double horizon) const {
  return static_cast<int>(std::floor(horizon / dt() + 1e-9)) + 1;
}

int WaveSetup::snap_step(double t) const {
  return static_cast<int>(std::lround(t / dt()));
}

namespace {

enum NodeKind : uint8_t { kEvolve = 0, kFrozen = 1, kDead = 2 };

// Channel interpolation stencil on the computational grid.
struct ChannelProbe {
  int i00 = 0;        // base index of the bilinear cell at the channel point
  double wx = 0, wy = 0;
  int n1_i00 = 0;     // same for the two outward offsets along the normal
  double n1_wx = 0, n1_wy = 0;
  int n2_i00 = 0;
  double n2_wx = 0, n2_wy = 0;
};

class Stepper {
 public:
  Stepper(const WaveSetup& ws)
      : grid_(ws.grid), W_(ws.solver.sponge_width), speed_(*ws.speed) {
    Nx_ = grid_.nx + 2 * W_;
    Ny_ = grid_.ny + 2 * W_;
    total_ = {Nx_, Ny_, grid_.x0 - W_ * grid_.dx, grid_.y0 - W_ * grid_.dy, grid_.dx,
              grid_.dy};
    dt_ = ws.dt();
    u_.assign(static_cast<size_t>(Nx_) * Ny_, 0.0);
    up_.assign(u_.size(), 0.0);
    c2_.resize(u_.size());
    sig_.resize(u_.size());
    const double h_min = std::min(grid_.dx, grid_.dy);
    const double sig_max = ws.solver.sponge_strength * speed_.c_plus() / (W_ * h_min);
    for (int j = 0; j < Ny_; ++j) {
      for (int i = 0; i < Nx_; ++i) {
        const Vec2 p = total_.node(i, j);
        double c = speed_.value(p);
        // Clamp in the sponge where analytic extrapolation may wander.
        c = std::clamp(c, speed_.c_minus(), speed_.c_plus());
        c2_[idx(i, j)] = c * c;
        const int di = std::max({0, W_ - i, i - (Nx_ - 1 - W_)});
        const int dj = std::max({0, W_ - j, j - (Ny_ - 1 - W_)});
        const int d = std::max(di, dj);
        const double frac = static_cast<double>(d) / W_;
        sig_[idx(i, j)] = sig_max * frac * frac;
      }
    }
  }

  size_t idx(int i, int j) const { return static_cast<size_t>(j) * Nx_ + i; }
  double dt() const { return dt_; }
  const GridGeom& total() const { return total_; }

  void zero() {
    std::fill(u_.begin(), u_.end(), 0.0);
    std::fill(up_.begin(), up_.end(), 0.0);
  }

  void set_mask(std::vector<uint8_t> mask) { mask_ = std::move(mask); }

  // One leapfrog update; the oldest level is overwritten and buffers swap.
  void step() {
    const double dt2 = dt_ * dt_;
    const double ix2 = 1.0 / (grid_.dx * grid_.dx);
    const double iy2 = 1.0 / (grid_.dy * grid_.dy);
    const bool masked = !mask_.empty();
    std::vector<double>& un = up_;  // reuse oldest storage
    parallel_for(Ny_ - 2, [&](size_t jb, size_t je) {
      for (size_t jj = jb; jj < je; ++jj) {
        const int j = static_cast<int>(jj) + 1;
        const size_t row = idx(0, j);
        for (int i = 1; i < Nx_ - 1; ++i) {
          const size_t k = row + i;
          if (masked && mask_[k] != kEvolve) {
            un[k] = mask_[k] == kDead ? 0.0 : u_[k];
            continue;
          }
          const double lap = (u_[k - 1] - 2.0 * u_[k] + u_[k + 1]) * ix2 +
                             (u_[k - Nx_] - 2.0 * u_[k] + u_[k + Nx_]) * iy2;
          const double sdt = sig_[k] * dt_;
          un[k] = (2.0 * u_[k] - (1.0 - sdt) * un[k] + dt2 * c2_[k] * lap) / (1.0 + sdt);
        }
      }
    });
    std::swap(u_, up_);
  }

  // Current-level injection: u += dt*f + dt^3/6 c^2 lap f (start of an IVP,
  // where the previous level is zero at the event step).
  void add_velocity_impulse(const Raster2D& f) {
    const double dt3 = dt_ * dt_ * dt_ / 6.0;
    const double ix2 = 1.0 / (grid_.dx * grid_.dx);
    const double iy2 = 1.0 / (grid_.dy * grid_.dy);
    for (int jy = 0; jy < f.ny; ++jy) {
      for (int jx = 0; jx < f.nx; ++jx) {
        const double fv = f.at(jx, jy);
        auto fat = [&](int a, int b) {
          return (a >= 0 && a < f.nx && b >= 0 && b < f.ny) ? f.at(a, b) : 0.0;
        };
        const double lapf = (fat(jx - 1, jy) - 2.0 * fv + fat(jx + 1, jy)) * ix2 +
                            (fat(jx, jy - 1) - 2.0 * fv + fat(jx, jy + 1)) * iy2;
        const size_t k = idx(jx + W_, jy + W_);
        u_[k] += dt_ * fv + dt3 * c2_[k] * lapf;
      }
    }
  }

  ChannelProbe make_probe(const Channel& ch) const {
    ChannelProbe p;
    const double hn = std::min(grid_.dx, grid_.dy);
    auto fill = [&](const Vec2& pt, int& i00, double& wx, double& wy) {
      const double fx = (pt.x - total_.x0) / grid_.dx;
      const double fy = (pt.y - total_.y0) / grid_.dy;
      const int ix = std::clamp(static_cast<int>(fx), 0, Nx_ - 2);
      const int iy = std::clamp(static_cast<int>(fy), 0, Ny_ - 2);
      i00 = static_cast<int>(idx(ix, iy));
      wx = fx - ix;
      wy = fy - iy;
    };
    fill(ch.pos, p.i00, p.wx, p.wy);
    fill(ch.pos + ch.normal * hn, p.n1_i00, p.n1_wx, p.n1_wy);
    fill(ch.pos + ch.normal * (2.0 * hn), p.n2_i00, p.n2_wx, p.n2_wy);
    return p;
  }

  double sample(int i00, double wx, double wy) const {
    return u_[i00] * (1 - wx) * (1 - wy) + u_[i00 + 1] * wx * (1 - wy) +
           u_[i00 + Nx_] * (1 - wx) * wy + u_[i00 + Nx_ + 1] * wx * wy;
  }

  double dirichlet_at(const ChannelProbe& p) const { return sample(p.i00, p.wx, p.wy); }

  double neumann_at(const ChannelProbe& p) const {
    const double hn = std::min(grid_.dx, grid_.dy);
    const double u0 = sample(p.i00, p.wx, p.wy);
    const double u1 = sample(p.n1_i00, p.n1_wx, p.n1_wy);
    const double u2 = sample(p.n2_i00, p.n2_wx, p.n2_wy);
    return (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * hn);
  }

  double neumann_given_value(const ChannelProbe& p, double u0) const {
    const double hn = std::min(grid_.dx, grid_.dy);
    const double u1 = sample(p.n1_i00, p.n1_wx, p.n1_wy);
    const double u2 = sample(p.n2_i00, p.n2_wx, p.n2_wy);
    return (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * hn);
  }

  Raster2D restrict_physical(bool from_prev = false) const {
    Raster2D out(grid_);
    const std::vector<double>& src = from_prev ? up_ : u_;
    for (int jy = 0; jy < grid_.ny; ++jy)
      for (int jx = 0; jx < grid_.nx; ++jx)
        out.at(jx, jy) = src[idx(jx + W_, jy + W_)];
    return out;
  }

  void check_finite(int step) const {
    // Sparse probe; a blow-up contaminates everything within a few steps.
    double m = 0.0;
    for (size_t k = 0; k < u_.size(); k += 97) m = std::max(m, std::abs(u_[k]));
    if (!std::isfinite(m) || m > 1e30)
      throw SolverError("solver blow-up at step " + std::to_string(step));
  }

  void set_node(size_t k, double v) { u_[k] = v; }
  double c2_at(size_t k) const { return c2_[k]; }
  int nx_total() const { return Nx_; }
  int ny_total() const { return Ny_; }
  int sponge() const { return W_; }

 private:
  GridGeom grid_;
  int W_;
  const SpeedField& speed_;
  int Nx_ = 0, Ny_ = 0;
  GridGeom total_;
  double dt_ = 0.0;
  std::vector<double> u_, up_, c2_, sig_;
  std::vector<uint8_t> mask_;
};

// Frozen-band bookkeeping for embedded Dirichlet boundaries: nodes in a thin
// band along the curve take interpolated channel values each step.
struct BandNode {
  size_t node;
  int ch0;
  double w;  // value = (1-w) v[ch0] + w v[ch0+1 mod N]
};

std::vector<BandNode> collect_band(const Stepper& st, const CircleBoundary& omega,
                                   int n_channels, double lo, double hi) {
  std::vector<BandNode> band;
  const GridGeom& g = st.total();
  for (int j = 0; j < st.ny_total(); ++j) {
    for (int i = 0; i < st.nx_total(); ++i) {
      const Vec2 p = g.node(i, j);
      const double s = omega.sdf(p);
      if (s >= lo && s <= hi) {
        const double theta = omega.arclength_of(p) / omega.radius();
        const double f = theta * n_channels / (2.0 * M_PI);
        int c0 = static_cast<int>(f) % n_channels;
        BandNode bn{st.idx(i, j), c0, f - std::floor(f)};
        band.push_back(bn);
      }
    }
  }
  return band;
}

}  // namespace

IvpResult solve_ivp(const Raster2D& f, double t0, double horizon, const WaveSetup& setup,
                    const std::vector<Channel>& channels) {
  Stepper st(setup);
  const double dt = st.dt();
  const int n_steps = setup.steps_for(horizon);
  const int k0 = setup.snap_step(t0);
  if (k0 < 0 || k0 >= n_steps - 1)
    throw SolverError("event time lies outside the record horizon");

  std::vector<ChannelProbe> probes;
  probes.reserve(channels.size());
  for (const Channel& ch : channels) probes.push_back(st.make_probe(ch));

  CauchyRecord rec;
  rec.dirichlet.dt = rec.neumann.dt = dt;
  rec.dirichlet.t_start = rec.neumann.t_start = 0.0;
  rec.dirichlet.channels = rec.neumann.channels = channels;
  rec.dirichlet.samples.assign(static_cast<size_t>(n_steps) * channels.size(), 0.0);
  rec.neumann.samples.assign(rec.dirichlet.samples.size(), 0.0);

  // Zero record until the event fires; u(k0) = 0, u(k0+1) = impulse.
  st.zero();
  st.add_velocity_impulse(f);
  for (int k = k0 + 1; k < n_steps; ++k) {
    for (size_t c = 0; c < channels.size(); ++c) {
      rec.dirichlet.at(k, c) = st.dirichlet_at(probes[c]);
      rec.neumann.at(k, c) = st.neumann_at(probes[c]);
    }
    if (k + 1 < n_steps) st.step();
    if ((k & 127) == 0) st.check_finite(k);
  }

  IvpResult out;
  out.record = std::move(rec);
  out.state.u = st.restrict_physical(false);
  out.state.u_prev = st.restrict_physical(true);
  out.state.t = (n_steps - 1) * dt;
  out.state.dt = dt;
  return out;
}

ForwardResult solve_forward(const SourceTrain& train, double T, const WaveSetup& setup,
                            const std::vector<Channel>& channels, int snapshot_every) {
  const double dt = setup.dt();
  const int n_steps = setup.steps_for(T);

  ForwardResult out;
  out.record.dirichlet.dt = out.record.neumann.dt = dt;
  out.record.dirichlet.t_start = out.record.neumann.t_start = 0.0;
  out.record.dirichlet.channels = out.record.neumann.channels = channels;
  out.record.dirichlet.samples.assign(static_cast<size_t>(n_steps) * channels.size(), 0.0);
  out.record.neumann.samples.assign(out.record.dirichlet.samples.size(), 0.0);

  if (snapshot_every > 0) {
    for (int k = 0; k < n_steps; k += snapshot_every)
      out.snapshots.emplace_back(k, Raster2D(setup.grid));
  }

  for (const SourceEvent& ev : train) {
    if (!(ev.t < T)) throw SolverError("event time lies outside the record horizon");
    out.snapped_times.push_back(setup.snap_step(ev.t) * dt);
    Stepper st(setup);
    const int k0 = setup.snap_step(ev.t);
    std::vector<ChannelProbe> probes;
    probes.reserve(channels.size());
    for (const Channel& ch : channels) probes.push_back(st.make_probe(ch));

    st.add_velocity_impulse(ev.profile);
    size_t snap_i = 0;
    while (snap_i < out.snapshots.size() && out.snapshots[snap_i].first <= k0) ++snap_i;
    for (int k = k0 + 1; k < n_steps; ++k) {
      for (size_t c = 0; c < channels.size(); ++c) {
        out.record.dirichlet.at(k, c) += st.dirichlet_at(probes[c]);
        out.record.neumann.at(k, c) += st.neumann_at(probes[c]);
      }
      if (snap_i < out.snapshots.size() && out.snapshots[snap_i].first == k) {
        Raster2D phys = st.restrict_physical();
        Raster2D& acc = out.snapshots[snap_i].second;
        for (size_t q = 0; q < acc.values.size(); ++q) acc.values[q] += phys.values[q];
        ++snap_i;
      }
      if (k + 1 < n_steps) st.step();
      if ((k & 127) == 0) st.check_finite(k);
    }
  }
  return out;
}

TimeSeriesRecord exterior_neumann(const TimeSeriesRecord& dirichlet,
                                  const CircleBoundary& omega, const WaveSetup& setup) {
  Stepper st(setup);
  if (std::abs(st.dt() - dirichlet.dt) > 1e-9 * dirichlet.dt)
    throw SolverError("record dt does not match solver dt");
  const int n_steps = dirichlet.n_steps();
  const int nch = dirichlet.n_channels();
  const double h_band = 2.0 * std::max(setup.grid.dx, setup.grid.dy);

  // Evolve outside, freeze a band just inside the curve, kill the deep interior.
  std::vector<uint8_t> mask(static_cast<size_t>(st.nx_total()) * st.ny_total(), kEvolve);
  for (int j = 0; j < st.ny_total(); ++j)
    for (int i = 0; i < st.nx_total(); ++i) {
      const double s = omega.sdf(st.total().node(i, j));
      if (s <= 0.0) mask[st.idx(i, j)] = s >= -h_band ? kFrozen : kDead;
    }
  st.set_mask(std::move(mask));
  const std::vector<BandNode> band = collect_band(st, omega, nch, -h_band, 0.0);

  std::vector<ChannelProbe> probes;
  probes.reserve(nch);
  for (const Channel& ch : dirichlet.channels) probes.push_back(st.make_probe(ch));

  TimeSeriesRecord out = TimeSeriesRecord::zeros_like(dirichlet);
  std::vector<double> vals(nch);
  for (int k = 0; k < n_steps; ++k) {
    for (int c = 0; c < nch; ++c) vals[c] = dirichlet.at(k, c);
    for (const BandNode& bn : band) {
      const double v = (1.0 - bn.w) * vals[bn.ch0] + bn.w * vals[(bn.ch0 + 1) % nch];
      st.set_node(bn.node, v);
    }
    for (int c = 0; c < nch; ++c)
      out.at(k, c) = st.neumann_given_value(probes[c], vals[c]);
    if (k + 1 < n_steps) st.step();
    if ((k & 127) == 0) st.check_finite(k);
  }
  return out;
}

TimeReversalResult solve_time_reversal(const CauchyRecord& data,
                                       const reconstruct::ConeMask& mask, double t_read,
                                       const CircleBoundary& omega, const WaveSetup& setup,
                                       double mask_ramp) {
  const TimeSeriesRecord& d = data.dirichlet;
  Stepper st(setup);
  if (std::abs(st.dt() - d.dt) > 1e-9 * d.dt)
    throw SolverError("record dt does not match solver dt");
  const int nch = d.n_channels();
  if (static_cast<int>(mask.h.size()) != nch)
    throw SolverError("mask channel count does not match the record");
  const double span = std::max(-d.t_start, d.t_end());
  if (mask.max_h() > span + 1e-9)
    throw SolverError("mask exceeds the record span");

  const double dt = st.dt();
  const int n_steps = d.n_steps();
  const int k_read = static_cast<int>(std::lround((t_read - d.t_start) / dt));
  if (k_read < 1 || k_read >= n_steps - 1)
    throw SolverError("t_read must lie strictly inside the record span");
  int k_hi = static_cast<int>(std::floor((mask.max_h() - d.t_start) / dt + 1e-9));
  k_hi = std::min(k_hi, n_steps - 1);

  TimeReversalResult out;
  out.u = Raster2D(setup.grid);
  out.ut = Raster2D(setup.grid);
  if (k_hi <= k_read + 1) return out;  // empty masked data above the readout

  const double h_band = 2.0 * std::max(setup.grid.dx, setup.grid.dy);
  std::vector<uint8_t> node_mask(static_cast<size_t>(st.nx_total()) * st.ny_total(),
                                 kEvolve);
  for (int j = 0; j < st.ny_total(); ++j)
    for (int i = 0; i < st.nx_total(); ++i) {
      const double s = omega.sdf(st.total().node(i, j));
      if (s >= 0.0) node_mask[st.idx(i, j)] = s <= h_band ? kFrozen : kDead;
    }
  st.set_mask(std::move(node_mask));
  const std::vector<BandNode> band = collect_band(st, omega, nch, 0.0, h_band);

  // Backward march: state (u = u_n, prev = u_{n+1}); the stencil is symmetric
  // in time, so the same step() walks down.
  std::vector<double> vals(nch);
  auto impose = [&](int k) {
    const double t = d.t_start + k * dt;
    for (int c = 0; c < nch; ++c) vals[c] = d.at(k, c) * mask.factor(t, c, mask_ramp);
    for (const BandNode& bn : band) {
      const double v = (1.0 - bn.w) * vals[bn.ch0] + bn.w * vals[(bn.ch0 + 1) % nch];
      st.set_node(bn.node, v);
    }
  };

  Raster2D u_plus(setup.grid), u_mid(setup.grid), u_minus(setup.grid);
  st.zero();
  int k_cur = k_hi;
  impose(k_cur);
  while (k_cur > k_read - 1) {
    st.step();
    --k_cur;
    impose(k_cur);
    if (k_cur == k_read + 1) u_plus = st.restrict_physical();
    else if (k_cur == k_read) u_mid = st.restrict_physical();
    if ((k_cur & 127) == 0) st.check_finite(k_cur);
  }
  u_minus = st.restrict_physical();

  // Zero outside Omega and assemble the centered time derivative.
  for (int jy = 0; jy < setup.grid.ny; ++jy)
    for (int jx = 0; jx < setup.grid.nx; ++jx) {
      if (omega.sdf(setup.grid.node(jx, jy)) >= 0.0) continue;
      out.u.at(jx, jy) = u_mid.at(jx, jy);
      out.ut.at(jx, jy) = (u_plus.at(jx, jy) - u_minus.at(jx, jy)) / (2.0 * dt);
    }
  return out;
}

double wave_energy(const Raster2D& u, const Raster2D& u_prev, double dt,
                   const SpeedField& speed) {
  const GridGeom g = u.geom();
  double kinetic = 0.0, potential = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = speed.value(g.node(i, j));
      const double v = (u.at(i, j) - u_prev.at(i, j)) / dt;
      kinetic += v * v / (c * c);
      if (i + 1 < g.nx)
        potential += (u.at(i + 1, j) - u.at(i, j)) * (u_prev.at(i + 1, j) - u_prev.at(i, j)) /
                     (g.dx * g.dx);
      if (j + 1 < g.ny)
        potential += (u.at(i, j + 1) - u.at(i, j)) * (u_prev.at(i, j + 1) - u_prev.at(i, j)) /
                     (g.dy * g.dy);
    }
  }
  return 0.5 * (kinetic + potential) * g.dx * g.dy;
}

}  // namespace recho::wavefield
