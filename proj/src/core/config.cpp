#include "core/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace recho {

using nlohmann::json;

namespace {

Vec2 vec2_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(std::string(what) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string join_path(const std::string& dir, const std::string& rel) {
  if (rel.empty() || rel.front() == '/' || dir.empty()) return rel;
  return dir + "/" + rel;
}

SpeedSpec parse_speed(const json& j, const std::string& base_dir) {
  SpeedSpec s;
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    s.kind = SpeedKind::constant;
  } else if (kind == "gradient") {
    s.kind = SpeedKind::gradient;
    if (j.contains("grad")) s.grad = vec2_of(j.at("grad"), "speed.grad");
    if (j.contains("ref")) s.ref = vec2_of(j.at("ref"), "speed.ref");
  } else if (kind == "bump") {
    s.kind = SpeedKind::bump;
    s.amplitude = j.value("amplitude", 0.2);
    s.sigma = j.value("sigma", 0.4);
    if (j.contains("center")) s.bump_center = vec2_of(j.at("center"), "speed.center");
  } else if (kind == "raster") {
    s.kind = SpeedKind::raster;
    s.raster_path = join_path(base_dir, j.value("path", ""));
    if (s.raster_path.empty()) throw ConfigError("speed.path required for raster speed");
  } else {
    throw ConfigError("unknown speed kind: " + kind);
  }
  s.c0 = j.value("c0", 1.0);
  return s;
}

SupportSpec parse_support(const json& j, const std::string& base_dir) {
  SupportSpec s;
  const std::string kind = j.value("kind", "ball");
  if (kind == "ball") {
    s.kind = SupportKind::ball;
    s.radius = j.value("radius", 0.1);
    const std::string metric = j.value("metric", "geodesic");
    if (metric == "euclidean") s.metric = SupportMetric::euclidean;
    else if (metric == "geodesic") s.metric = SupportMetric::geodesic;
    else throw ConfigError("unknown support metric: " + metric);
  } else if (kind == "band") {
    s.kind = SupportKind::band;
    if (!j.contains("polyline")) throw ConfigError("band support needs a polyline");
    for (const auto& p : j.at("polyline")) s.polyline.push_back(vec2_of(p, "polyline point"));
    if (s.polyline.size() < 2) throw ConfigError("band polyline needs at least 2 points");
    s.band_width = j.value("width", 0.0);
  } else if (kind == "raster") {
    s.kind = SupportKind::raster;
    s.raster_path = join_path(base_dir, j.value("path", ""));
    if (s.raster_path.empty()) throw ConfigError("support.path required for raster support");
    s.radius = j.value("radius", 0.0);  // optional enclosing radius hint
  } else {
    throw ConfigError("unknown support kind: " + kind);
  }
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    cfg.domain.x0 = d.value("x0", -1.0);
    cfg.domain.y0 = d.value("y0", -1.0);
    cfg.domain.x1 = d.value("x1", 1.0);
    cfg.domain.y1 = d.value("y1", 1.0);
    cfg.domain.nx = d.value("nx", 256);
    cfg.domain.ny = d.value("ny", 256);
  }
  if (j.contains("omega")) {
    const auto& o = j.at("omega");
    if (o.contains("center")) cfg.omega.center = vec2_of(o.at("center"), "omega.center");
    cfg.omega.radius = o.value("radius", 0.85);
  }
  if (j.contains("speed")) cfg.speed = parse_speed(j.at("speed"), base_dir);
  cfg.T = j.value("T", 2.0);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.cfl = s.value("cfl", 0.5);
    cfg.solver.sponge_width = s.value("sponge_width", 40);
    cfg.solver.sponge_strength = s.value("sponge_strength", 15.0);
    cfg.solver.mollifier_cells = s.value("mollifier_cells", 3.0);
    cfg.solver.snapshot_every = s.value("snapshot_every", 0);
  }
  if (j.contains("recording")) {
    const auto& r = j.at("recording");
    cfg.recording.channels = r.value("channels", 256);
    if (r.contains("arc")) {
      const auto& a = r.at("arc");
      if (!a.is_array() || a.size() != 2)
        throw ConfigError("recording.arc: expected [theta0, theta1] in degrees");
      const double d2r = M_PI / 180.0;
      cfg.recording.arc = {a[0].get<double>() * d2r, a[1].get<double>() * d2r};
    }
  }
  if (j.contains("sources")) {
    for (const auto& s : j.at("sources")) {
      SourceSpec src;
      src.t = s.value("t", 0.0);
      if (s.contains("center")) src.center = vec2_of(s.at("center"), "source.center");
      if (s.contains("support")) src.support = parse_support(s.at("support"), base_dir);
      src.amplitude = s.value("amplitude", 1.0);
      cfg.sources.push_back(src);
    }
  }
  if (j.contains("identify")) {
    const auto& i = j.at("identify");
    cfg.identify.threshold = i.value("threshold", 0.1);
    cfg.identify.pair_threshold = i.value("pair_threshold", 0.5);
    cfg.identify.delta_x_cells = i.value("delta_x_cells", 3.0);
    cfg.identify.delta_theta_deg = i.value("delta_theta_deg", 10.0);
    cfg.identify.delta_t_steps = i.value("delta_t_steps", 4.0);
    cfg.identify.tie_margin = i.value("tie_margin", 0.1);
    cfg.identify.min_component = i.value("min_component", 3);
    cfg.identify.max_component_samples = i.value("max_component_samples", 160);
    cfg.identify.t_decimate = i.value("t_decimate", 2);
    cfg.identify.dead_time_steps = i.value("dead_time_steps", 8.0);
  }
  if (j.contains("reconstruct")) {
    const auto& r = j.at("reconstruct");
    const std::string v = r.value("variant", "vs");
    if (v == "vs") cfg.reconstruct.variant = PeelVariant::vs;
    else if (v == "riemannian") cfg.reconstruct.variant = PeelVariant::riemannian;
    else if (v == "euclidean") cfg.reconstruct.variant = PeelVariant::euclidean;
    else throw ConfigError("unknown reconstruct variant: " + v);
    cfg.reconstruct.eps = r.value("eps", 0.0);
    cfg.reconstruct.taper_cells = r.value("taper_cells", 2.0);
    cfg.reconstruct.mask_ramp_steps = r.value("mask_ramp_steps", 2.0);
    cfg.reconstruct.clamp_mask = r.value("clamp_mask", false);
    const std::string m = r.value("merge", "last_write");
    if (m == "last_write") cfg.reconstruct.merge = MergeMode::last_write;
    else if (m == "sum") cfg.reconstruct.merge = MergeMode::sum;
    else throw ConfigError("unknown merge mode: " + m);
    if (r.contains("base_point"))
      cfg.reconstruct.base_point = vec2_of(r.at("base_point"), "base_point");
  }
  if (j.contains("curvature")) {
    const auto& c = j.at("curvature");
    cfg.curvature.kappa = c.value("kappa", 1e9);
    cfg.curvature.K = c.value("K", 0.0);
  }
  if (j.contains("check")) {
    cfg.check.n_rays = j.at("check").value("n_rays", 128);
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  std::string dir;
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_config(ss.str(), dir);
}

void RunConfig::validate() const {
  if (domain.nx < 8 || domain.ny < 8) throw ConfigError("grid resolution too small");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw ConfigError("domain box is empty");
  if (!(solver.cfl > 0.0) || solver.cfl > 1.0)
    throw ConfigError("CFL number must lie in (0, 1]");
  if (solver.sponge_width < 2) throw ConfigError("sponge width must be at least 2 cells");
  if (!(omega.radius > 0.0)) throw ConfigError("omega radius must be positive");
  if (recording.channels < 4) throw ConfigError("need at least 4 recording channels");

  double prev = 0.0;
  for (size_t k = 0; k < sources.size(); ++k) {
    const SourceSpec& s = sources[k];
    if (!(s.t > prev)) throw ConfigError("source times not strictly increasing");
    prev = s.t;
    // Supports must stay inside the domain box (ball bound by radius; band by
    // polyline extent).
    const GridGeom g = domain.grid();
    if (s.support.kind == SupportKind::ball) {
      const double r = s.support.radius;
      if (!(r > 0.0)) throw ConfigError("support radius must be positive");
      if (s.center.x - r < g.x0 || s.center.x + r > domain.x1 || s.center.y - r < g.y0 ||
          s.center.y + r > domain.y1)
        throw ConfigError("support escapes domain");
    } else if (s.support.kind == SupportKind::band) {
      for (const Vec2& p : s.support.polyline) {
        if (!g.contains(p)) throw ConfigError("support escapes domain");
      }
    }
  }
  if (!sources.empty() && !(sources.back().t < T))
    throw ConfigError("final time T must exceed the last source time");
}

}  // namespace recho
