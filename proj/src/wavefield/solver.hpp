#pragma once

#include <utility>
#include <vector>

#include "core/config.hpp"
#include "core/raster.hpp"
#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "geometry/speed_field.hpp"
#include "reconstruct/mask.hpp"
#include "wavefield/source.hpp"

namespace recho::wavefield {

// Everything a solve needs besides the data: physical grid, solver knobs and
// the speed field. The computational grid adds `sponge_width` cells per side.
struct WaveSetup {
  GridGeom grid;
  SolverSpec solver;
  const geometry::SpeedField* speed = nullptr;

  double dt() const;  // from the CFL bound and c+
  int steps_for(double horizon) const;
  int snap_step(double t) const;  // nearest time-grid step
};

struct WaveState {
  Raster2D u;
  Raster2D u_prev;
  double t = 0.0;
  double dt = 0.0;
};

struct IvpResult {
  WaveState state;
  CauchyRecord record;
};

struct ForwardResult {
  CauchyRecord record;
  std::vector<std::pair<int, Raster2D>> snapshots;  // (step, field)
  std::vector<double> snapped_times;                // per event
};

struct TimeReversalResult {
  Raster2D u;
  Raster2D ut;
};

// Leapfrog evolution of u_tt = c^2 lap u on the sponge-extended grid with
// initial data (0, f) injected at t0; Cauchy traces recorded on the global
// time grid 0..horizon (zeros before t0).
IvpResult solve_ivp(const Raster2D& f, double t0, double horizon, const WaveSetup& setup,
                    const std::vector<Channel>& channels);

// Duhamel superposition: one solve_ivp per event, records summed on the
// common grid. Event times snap to the nearest step.
ForwardResult solve_forward(const SourceTrain& train, double T, const WaveSetup& setup,
                            const std::vector<Channel>& channels, int snapshot_every = 0);

// Exterior problem: waves in the annulus between the recording curve and the
// sponge, driven by the Dirichlet record; returns the Neumann trace.
TimeSeriesRecord exterior_neumann(const TimeSeriesRecord& dirichlet,
                                  const geometry::CircleBoundary& omega,
                                  const WaveSetup& setup);

// Masked time reversal inside Omega: backward evolution from the latest
// masked time, Dirichlet data imposed where |t| < h(y) (zero outside), zero
// terminal condition; returns field and time derivative at t_read.
// `mask_ramp` (seconds) smooths the cone edge strictly inside the cone.
TimeReversalResult solve_time_reversal(const CauchyRecord& data,
                                       const reconstruct::ConeMask& mask, double t_read,
                                       const geometry::CircleBoundary& omega,
                                       const WaveSetup& setup, double mask_ramp = 0.0);

// Exactly conserved discrete energy of the leapfrog pair while the field is
// supported inside the physical box.
double wave_energy(const Raster2D& u, const Raster2D& u_prev, double dt,
                   const geometry::SpeedField& speed);

}  // namespace recho::wavefield
