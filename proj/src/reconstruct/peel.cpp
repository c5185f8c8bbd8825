#include "reconstruct/peel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "geometry/fast_marching.hpp"
#include "translate/translation.hpp"

namespace recho::reconstruct {

using geometry::CircleBoundary;
using geometry::DistanceField;
using geometry::SpeedField;
using translate::TranslationSpec;
using wavefield::SourceEvent;
using wavefield::SourceTrain;
using wavefield::WaveSetup;

namespace {

double compute_rho(const std::vector<std::pair<double, Vec2>>& events,
                   const SpeedField& speed) {
  double rho = 0.0;
  for (size_t j = 0; j + 1 < events.size(); ++j) {
    const double d = geometry::distance(events[j].second, events[j + 1].second, speed);
    rho = std::max(rho, d / (events[j + 1].first - events[j].first));
  }
  return rho;
}

void merge_into(Raster2D& acc, const Raster2D& piece, MergeMode mode) {
  if (mode == MergeMode::sum) {
    for (size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += piece.values[i];
    return;
  }
  for (size_t i = 0; i < acc.values.size(); ++i)
    if (piece.values[i] != 0.0) acc.values[i] = piece.values[i];
}

double profile_error(const Raster2D& got, const Raster2D& truth) {
  return got.l2_diff_rel(truth);
}

}  // namespace

PeelResult peel_run(const CauchyRecord& data,
                    const std::vector<std::pair<double, Vec2>>& events,
                    const PeelParams& params, const CircleBoundary& omega,
                    const WaveSetup& setup) {
  const size_t J = events.size();
  if (J == 0) throw SolverError("peel_run: no events");
  const SpeedField& speed = *setup.speed;

  PeelResult res;
  res.rho = params.rho >= 0.0 ? params.rho : compute_rho(events, speed);
  if (res.rho >= 1.0 && !params.force)
    throw SolverError("peel_run: sub-sonic condition violated (rho >= 1)");

  const double T_record = data.dirichlet.t_end();
  if (!params.force) {
    // Horizon gate: T > t_1 + diam (translation variants), T > t_J + diam (VS).
    const double diam = geometry::diameter(omega, speed, 32);
    const double t_need =
        (params.variant == PeelVariant::vs ? events.back().first : events.front().first) +
        diam;
    if (T_record <= t_need)
      throw SolverError("peel_run: record horizon too short (need T > " +
                        std::to_string(t_need) + ")");
  }

  AnnulusOptions aopt;
  aopt.taper_cells = params.taper_cells;
  aopt.mask_ramp_steps = params.mask_ramp_steps;
  aopt.clamp_mask = params.clamp_mask;

  res.profiles.assign(J, Raster2D(setup.grid));
  res.base_profile = Raster2D(setup.grid);

  const double init_norm = data.dirichlet.l2_norm();
  CauchyRecord residual = data;

  auto log_iteration = [&](int n, double R_n, double eps_n) {
    PeelIteration it;
    it.n = n;
    it.R_n = R_n;
    it.eps_n = eps_n;
    it.residual_l2 = init_norm > 0.0 ? residual.dirichlet.l2_norm() / init_norm : 0.0;
    if (params.truth && params.truth->size() == J)
      for (size_t j = 0; j < J; ++j)
        it.per_source_error.push_back(
            profile_error(res.profiles[j], (*params.truth)[j].profile));
    res.log.push_back(std::move(it));
    if (res.log.size() >= 2 && !params.force) {
      const double prev = res.log[res.log.size() - 2].residual_l2;
      if (res.log.back().residual_l2 > 1.10 * prev + 1e-12)
        throw SolverError("divergent peel: residual grew by more than 10%");
    }
  };

  if (params.variant == PeelVariant::vs) {
    if (params.radii.size() != J)
      throw SolverError("VS peel needs one support radius per source");
    for (size_t j = 0; j < J; ++j) {
      const double R_j = params.radii[j];
      const double eps = params.eps > 0.0 ? params.eps : 2.0 * R_j;
      Raster2D prof = recover_annulus(residual, events[j].second, R_j, eps,
                                      events[j].first, omega, setup, aopt);
      merge_into(res.profiles[j], prof, params.merge);
      SourceTrain train;
      train.push_back({events[j].first, events[j].second, std::move(prof),
                       SupportKind::raster, R_j});
      residual = subtract_forward(residual, train, setup);
      log_iteration(static_cast<int>(j), R_j, eps);
    }
    return res;
  }

  // Translation variants (Theorems 2 and 3).
  const TranslationSpec::Kind kind = params.variant == PeelVariant::riemannian
                                         ? TranslationSpec::Kind::riemannian
                                         : TranslationSpec::Kind::euclidean;
  TranslationSpec spec;
  spec.kind = kind;
  spec.base_point = params.base_point;
  for (const auto& ev : events) spec.centers.push_back(ev.second);

  double R = params.R;
  if (!(R > 0.0)) throw SolverError("peel_run: initial radius R must be positive");
  const double eps0 = (1.0 - res.rho) * (J >= 2 ? events[1].first - events[0].first
                                                : T_record - events[0].first);
  double eps = params.eps > 0.0 ? params.eps : std::min(eps0, R);
  if (!(eps > 0.0)) throw SolverError("peel_run: nonpositive eps");
  const double ratio = speed.c_plus() / speed.c_minus();
  const double taper_margin = 2.0 * params.taper_cells * std::max(setup.grid.dx, setup.grid.dy);

  int n = 0;
  for (;;) {
    const bool last = R <= eps + 1e-12;
    const double eps_n = last ? R : eps;

    Raster2D piece0 = recover_annulus(residual, events[0].second, R, eps_n,
                                      events[0].first, omega, setup, aopt);
    Raster2D base_piece = translate::to_base_frame(piece0, events[0].second,
                                                   params.base_point, kind, speed,
                                                   R + taper_margin);

    SourceTrain train;
    for (size_t j = 0; j < J; ++j) {
      Raster2D piece =
          j == 0 ? piece0
                 : translate::apply_translation(base_piece, spec, j, speed, R + taper_margin);
      merge_into(res.profiles[j], piece, params.merge);
      train.push_back({events[j].first, events[j].second, std::move(piece),
                       SupportKind::raster, R});
    }
    merge_into(res.base_profile, base_piece, params.merge);

    residual = subtract_forward(residual, train, setup);
    log_iteration(n, R, eps_n);

    if (last) break;
    const double R_next =
        params.variant == PeelVariant::euclidean ? ratio * (R - eps) : R - eps;
    if (R_next >= R - 1e-12)
      throw SolverError(
          "peel_run: radius not decreasing (E2 margin exhausted at R=" + std::to_string(R) +
          ")");
    R = R_next;
    ++n;
  }
  return res;
}

}  // namespace recho::reconstruct
