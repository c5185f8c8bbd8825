#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/raster.hpp"
#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "geometry/fast_marching.hpp"
#include "geometry/speed_field.hpp"
#include "identify/pairing.hpp"
#include "identify/singular.hpp"
#include "reconstruct/peel.hpp"
#include "translate/conditions.hpp"
#include "translate/translation.hpp"
#include "wavefield/solver.hpp"
#include "wavefield/source.hpp"

namespace recho::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Session {
  RunConfig cfg;
  std::unique_ptr<geometry::SpeedField> speed;
  geometry::CircleBoundary omega;
  std::vector<Channel> channels;
  wavefield::WaveSetup setup;

  explicit Session(const std::string& config_path)
      : cfg(load_config(config_path)), omega(cfg.omega) {
    speed = geometry::make_speed_field(cfg.speed, cfg.domain.grid());
    channels = omega.make_channels(cfg.recording.channels, &cfg.recording);
    setup.grid = cfg.domain.grid();
    setup.solver = cfg.solver;
    setup.speed = speed.get();
  }
};

std::string path_join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open for writing: " + path);
  os << text;
}

json channels_json(const std::vector<Channel>& chs) {
  json arr = json::array();
  for (const Channel& c : chs) arr.push_back({c.pos.x, c.pos.y, c.normal.x, c.normal.y});
  return arr;
}

std::vector<Channel> channels_from_json(const json& arr) {
  std::vector<Channel> out;
  for (const auto& c : arr)
    out.push_back({{c[0].get<double>(), c[1].get<double>()},
                   {c[2].get<double>(), c[3].get<double>()}});
  return out;
}

// Loads the record pair written by cmd_simulate.
CauchyRecord load_records(const std::string& dir) {
  std::ifstream is(path_join(dir, "meta.json"));
  if (!is) throw FormatError("cannot open " + path_join(dir, "meta.json"));
  json meta = json::parse(is);
  const std::vector<Channel> chs = channels_from_json(meta.at("channels"));
  CauchyRecord rec;
  rec.dirichlet = read_record_csv(path_join(dir, "record_dirichlet.csv"), chs);
  rec.neumann = read_record_csv(path_join(dir, "record_neumann.csv"), chs);
  rec.validate();
  return rec;
}

constexpr const char* kPlotScript = R"(#!/usr/bin/env python3
"""Plots the CSV/JSON artifacts next to this script (no arguments needed)."""
import csv, json, os, sys
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))

def load_csv(name):
    with open(os.path.join(here, name)) as f:
        rows = list(csv.reader(f))
    head, data = rows[0], [[float(v) for v in r] for r in rows[1:]]
    return head, data

if os.path.exists(os.path.join(here, "record_dirichlet.csv")):
    head, data = load_csv("record_dirichlet.csv")
    t = [r[0] for r in data]
    fig, ax = plt.subplots(figsize=(8, 4))
    img = [[r[i] for r in data] for i in range(1, len(head))]
    ax.imshow(img, aspect="auto", extent=[t[0], t[-1], 0, len(head) - 1], origin="lower")
    ax.set_xlabel("t"); ax.set_ylabel("channel"); ax.set_title("boundary record")
    fig.savefig(os.path.join(here, "record.png"), dpi=120)

if os.path.exists(os.path.join(here, "score_vs_t.csv")):
    head, data = load_csv("score_vs_t.csv")
    t = [r[0] for r in data]
    fig, ax = plt.subplots(figsize=(8, 4))
    for i in range(1, len(head)):
        ax.plot(t, [r[i] for r in data], label=head[i])
    ax.set_xlabel("t"); ax.set_ylabel("pairing score"); ax.legend()
    fig.savefig(os.path.join(here, "scores.png"), dpi=120)

if os.path.exists(os.path.join(here, "events.json")):
    with open(os.path.join(here, "events.json")) as f:
        events = json.load(f)
    fig, ax = plt.subplots(figsize=(6, 6))
    for ev in events:
        xs = [p[0] for p in ev["sigma_points"]]
        ys = [p[1] for p in ev["sigma_points"]]
        ax.scatter(xs, ys, s=4, label="t=%.4f" % ev["t_hat"])
    ax.set_aspect("equal"); ax.legend()
    fig.savefig(os.path.join(here, "sigma_clouds.png"), dpi=120)
print("plots written next to", sys.argv[0])
)";

}  // namespace

CommandOutcome cmd_simulate(const CommonArgs& args) {
  Session s(args.config_path);
  if (s.cfg.sources.empty()) throw ConfigError("simulate: config has no sources");
  fs::create_directories(args.out_dir);

  const wavefield::SourceTrain train = wavefield::build_train(s.cfg, *s.speed);
  const auto fwd = wavefield::solve_forward(train, s.cfg.T, s.setup, s.channels,
                                            s.cfg.solver.snapshot_every);

  CommandOutcome out;
  out.command = "simulate";

  auto put = [&](const std::string& name) {
    out.artifacts.push_back(path_join(args.out_dir, name));
    return out.artifacts.back();
  };
  write_record_csv(fwd.record.dirichlet, put("record_dirichlet.csv"));
  write_record_csv(fwd.record.neumann, put("record_neumann.csv"));
  for (size_t j = 0; j < train.size(); ++j)
    write_raster(train[j].profile, put("truth_f" + std::to_string(j) + ".rgf"));
  for (const auto& [step, field] : fwd.snapshots) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%06d.rgf", step);
    write_raster(field, put(name));
  }

  json meta;
  meta["dt"] = fwd.record.dirichlet.dt;
  meta["n_steps"] = fwd.record.dirichlet.n_steps();
  meta["channels"] = channels_json(s.channels);
  meta["event_times_snapped"] = fwd.snapped_times;
  meta["seed"] = args.seed;
  json centers = json::array();
  for (const auto& ev : train) centers.push_back({ev.center.x, ev.center.y});
  meta["event_centers"] = centers;
  json radii = json::array();
  for (const auto& ev : train) radii.push_back(ev.radius);
  meta["event_radii"] = radii;
  write_text(put("meta.json"), meta.dump(2) + "\n");
  write_text(put("plot.py"), kPlotScript);

  out.metrics["dt"] = fwd.record.dirichlet.dt;
  out.metrics["n_steps"] = fwd.record.dirichlet.n_steps();
  out.metrics["record_l2"] = fwd.record.dirichlet.l2_norm();
  return out;
}

CommandOutcome cmd_identify(const CommonArgs& args) {
  Session s(args.config_path);
  const std::string rec_dir = args.records_dir.empty() ? args.out_dir : args.records_dir;
  const CauchyRecord data = load_records(rec_dir);
  fs::create_directories(args.out_dir);

  CommandOutcome out;
  out.command = "identify";
  const bool partial = s.cfg.recording.arc.has_value();

  std::vector<identify::SupportEstimate> supports;
  std::vector<identify::ScoreSeries> series;
  std::vector<double> t_grid;
  try {
    const auto samples = identify::extract_singular_samples(
        data, s.omega, *s.speed, identify::extract_options(s.cfg.identify, partial));
    t_grid = identify::make_t_grid(data, s.cfg.identify.t_decimate);
    const auto opt = identify::pairing_options(s.cfg.identify, s.setup.grid,
                                               data.dirichlet.dt, partial);
    const auto events =
        identify::detect_pairings(samples, t_grid, s.omega, *s.speed, opt, &series);
    if (!events.empty()) supports = identify::estimate_supports(events);
  } catch (const SolverError& e) {
    out.status = Status::warn;
    out.note = e.what();
  } catch (const GeometryError& e) {
    out.status = Status::warn;
    out.note = e.what();
  }

  auto put = [&](const std::string& name) {
    out.artifacts.push_back(path_join(args.out_dir, name));
    return out.artifacts.back();
  };

  json evs = json::array();
  for (const auto& est : supports) {
    json e;
    e["t_hat"] = est.t_hat;
    e["score"] = est.score;
    json pts = json::array();
    for (const auto& p : est.cloud) pts.push_back({p.x.x, p.x.y, p.xi.x, p.xi.y});
    e["sigma_points"] = pts;
    e["classification"] = est.closed ? "closed" : "open";
    e["partial"] = est.partial;
    e["ambiguous"] = est.ambiguous;
    e["circle_center"] = {est.circle_center.x, est.circle_center.y};
    e["circle_radius"] = est.circle_radius;
    e["circle_mean_dev"] = est.circle_mean_dev;
    e["enclosed_area"] = est.enclosed_area;
    evs.push_back(e);
  }
  write_text(put("events.json"), evs.dump(2) + "\n");

  {
    std::ofstream os(put("score_vs_t.csv"));
    os << "t";
    for (const auto& sr : series)
      os << ",pair_" << sr.pair.first << "_" << sr.pair.second;
    os << "\n";
    char buf[64];
    for (size_t k = 0; k < t_grid.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", t_grid[k]);
      os << buf;
      for (const auto& sr : series) {
        std::snprintf(buf, sizeof(buf), "%.17g", sr.scores[k]);
        os << ',' << buf;
      }
      os << "\n";
    }
  }
  write_text(put("plot.py"), kPlotScript);

  if (supports.empty() && out.status == Status::ok) {
    out.status = Status::warn;
    out.note = "no events detected";
  }
  out.metrics["n_events"] = supports.size();
  double n_amb = 0;
  for (const auto& e : supports) n_amb += e.ambiguous ? 1 : 0;
  out.metrics["n_ambiguous"] = n_amb;
  return out;
}

CommandOutcome cmd_reconstruct(const CommonArgs& args) {
  Session s(args.config_path);
  const std::string rec_dir = args.records_dir.empty() ? args.out_dir : args.records_dir;
  const CauchyRecord data = load_records(rec_dir);
  fs::create_directories(args.out_dir);

  CommandOutcome out;
  out.command = "reconstruct";

  // Events: identified (events.json) or ground truth from the config.
  std::vector<std::pair<double, Vec2>> events;
  std::vector<double> radii;
  if (!args.truth_centers && !args.events_path.empty()) {
    std::ifstream is(args.events_path);
    if (!is) throw FormatError("cannot open events: " + args.events_path);
    const json evs = json::parse(is);
    for (const auto& e : evs) {
      events.emplace_back(e.at("t_hat").get<double>(),
                          Vec2{e.at("circle_center")[0].get<double>(),
                               e.at("circle_center")[1].get<double>()});
      radii.push_back(e.at("circle_radius").get<double>());
    }
  } else {
    for (const auto& src : s.cfg.sources) {
      events.emplace_back(src.t, src.center);
      radii.push_back(src.support.radius);
    }
  }
  if (events.empty()) throw ConfigError("reconstruct: no events available");

  // Ground truth for error metrics when the records carry it.
  wavefield::SourceTrain truth;
  bool have_truth = true;
  for (size_t j = 0; j < events.size() && have_truth; ++j) {
    const std::string p = path_join(rec_dir, "truth_f" + std::to_string(j) + ".rgf");
    if (!fs::exists(p)) {
      have_truth = false;
      break;
    }
    wavefield::SourceEvent ev;
    ev.t = events[j].first;
    ev.center = events[j].second;
    ev.profile = read_raster(p);
    truth.push_back(std::move(ev));
  }

  // Condition gate per variant.
  const wavefield::SourceTrain cfg_train = wavefield::build_train(s.cfg, *s.speed);
  const auto report = translate::check_conditions(cfg_train, *s.speed);
  const PeelVariant variant = s.cfg.reconstruct.variant;
  std::string gate;
  if (!report.ss_pass) gate = "SS";
  if (variant == PeelVariant::vs && !report.ts_pass) gate = "TS";
  if (variant == PeelVariant::euclidean && !report.e2_pass) gate = "E2";
  if (!gate.empty() && !args.force) {
    out.status = Status::fail;
    double margin = 0.0;
    if (gate == "SS" && report.ss_margin) margin = *report.ss_margin;
    if (gate == "TS" && report.ts_margin) margin = *report.ts_margin;
    if (gate == "E2" && report.e2_margin) margin = *report.e2_margin;
    out.note = "condition " + gate + " fails (margin " + std::to_string(margin) +
               "); rerun with --force to override";
    return out;
  }

  reconstruct::PeelParams params;
  params.variant = variant;
  params.eps = s.cfg.reconstruct.eps;
  params.taper_cells = s.cfg.reconstruct.taper_cells;
  params.mask_ramp_steps = s.cfg.reconstruct.mask_ramp_steps;
  params.clamp_mask = s.cfg.reconstruct.clamp_mask;
  params.merge = s.cfg.reconstruct.merge;
  params.base_point = s.cfg.reconstruct.base_point;
  params.rho = report.rho;
  params.radii = radii;
  params.R = *std::max_element(radii.begin(), radii.end());
  params.force = args.force;
  if (have_truth) params.truth = &truth;

  const auto result = reconstruct::peel_run(data, events, params, s.omega, s.setup);

  auto put = [&](const std::string& name) {
    out.artifacts.push_back(path_join(args.out_dir, name));
    return out.artifacts.back();
  };
  for (size_t j = 0; j < result.profiles.size(); ++j)
    write_raster(result.profiles[j], put("recovered_f" + std::to_string(j) + ".rgf"));
  if (variant != PeelVariant::vs)
    write_raster(result.base_profile, put("recovered_base.rgf"));

  {
    std::ofstream os(put("iteration_log.jsonl"));
    for (const auto& it : result.log) {
      json line;
      line["n"] = it.n;
      line["R_n"] = it.R_n;
      line["eps"] = it.eps_n;
      line["residual_l2"] = it.residual_l2;
      if (!it.per_source_error.empty()) line["per_source_error"] = it.per_source_error;
      os << line.dump() << "\n";
    }
  }

  out.metrics["iterations"] = result.log.size();
  out.metrics["final_residual_l2"] = result.log.back().residual_l2;
  if (have_truth)
    for (size_t j = 0; j < result.profiles.size(); ++j)
      out.metrics["err_f" + std::to_string(j)] =
          result.profiles[j].l2_diff_rel(truth[j].profile);
  return out;
}

CommandOutcome cmd_check(const CommonArgs& args) {
  Session s(args.config_path);
  fs::create_directories(args.out_dir);
  const wavefield::SourceTrain train = wavefield::build_train(s.cfg, *s.speed);

  const auto rep = translate::check_conditions(train, *s.speed);
  const auto ml1 =
      translate::check_ml1_outgoing(train, s.omega, *s.speed, s.cfg.check.n_rays);

  // (R2) on the first source pulled to the base frame.
  const auto kind = s.cfg.reconstruct.variant == PeelVariant::riemannian
                        ? translate::TranslationSpec::Kind::riemannian
                        : translate::TranslationSpec::Kind::euclidean;
  const Raster2D base = translate::to_base_frame(
      train[0].profile, train[0].center, s.cfg.reconstruct.base_point, kind, *s.speed,
      2.0 * train[0].radius + 8.0 * std::max(s.setup.grid.dx, s.setup.grid.dy));
  const auto r2 = translate::check_R2(base, train[0].radius, *s.speed);

  json j;
  j["rho"] = rep.rho;
  j["R"] = rep.R;
  j["radii"] = rep.radii;
  j["gaps"] = rep.gaps;
  auto put_cond = [&](const char* name, bool pass, const std::optional<double>& margin) {
    j[name]["pass"] = pass;
    if (margin) j[name]["margin"] = *margin;
  };
  put_cond("SS", rep.ss_pass, rep.ss_margin);
  put_cond("SS2", rep.ss2_pass, rep.ss2_margin);
  put_cond("TS", rep.ts_pass, rep.ts_margin);
  put_cond("E2", rep.e2_pass, rep.e2_margin);
  j["ML1_outgoing"]["pass"] = ml1.pass();
  j["ML1_outgoing"]["rays_traced"] = ml1.rays_traced;
  json falsifiers = json::array();
  for (const auto& f : ml1.falsifiers)
    falsifiers.push_back({{"j", f.j}, {"k", f.k}, {"t", f.t}, {"x", {f.x.x, f.x.y}}});
  j["ML1_outgoing"]["falsifiers"] = falsifiers;
  j["R2"]["pass"] = r2.pass();
  j["R2"]["pass_radius"] = r2.pass_radius;
  j["R2"]["pass_antipodal"] = r2.pass_antipodal;
  j["R2"]["max_norm"] = r2.max_norm;
  if (r2.pass_antipodal) {
    j["R2"]["witness_plus"] = {r2.witness_plus.x, r2.witness_plus.y};
    j["R2"]["witness_minus"] = {r2.witness_minus.x, r2.witness_minus.y};
  }

  CommandOutcome out;
  out.command = "check";
  out.artifacts.push_back(path_join(args.out_dir, "conditions.json"));
  write_text(out.artifacts.back(), j.dump(2) + "\n");
  out.metrics["rho"] = rep.rho;
  out.metrics["R"] = rep.R;
  out.metrics["ml1_falsifiers"] = ml1.falsifiers.size();
  return out;
}

int report(const CommandOutcome& outcome) {
  json j;
  j["command"] = outcome.command;
  j["status"] = outcome.status == Status::ok ? "ok"
                : outcome.status == Status::warn ? "warn"
                                                 : "fail";
  j["artifacts"] = outcome.artifacts;
  j["metrics"] = outcome.metrics;
  if (!outcome.note.empty()) j["note"] = outcome.note;
  std::printf("%s\n", j.dump(2).c_str());
  if (outcome.status == Status::warn)
    std::fprintf(stderr, "warning: %s\n", outcome.note.c_str());
  if (outcome.status == Status::fail) {
    std::fprintf(stderr, "failed: %s\n", outcome.note.c_str());
    return 2;
  }
  return 0;
}

}  // namespace recho::cli
