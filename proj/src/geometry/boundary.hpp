#pragma once

#include <vector>

#include "core/config.hpp"
#include "core/record.hpp"
#include "core/vec2.hpp"

namespace recho::geometry {

// Recording curve: a circle, parametrized by arclength with analytic tangent
// and outward normal. The tangential covector convention used throughout is a
// single signed scalar relative to the (counterclockwise) unit tangent.
class CircleBoundary {
 public:
  CircleBoundary(const Vec2& center, double radius) : c_(center), r_(radius) {}
  explicit CircleBoundary(const OmegaSpec& o) : c_(o.center), r_(o.radius) {}

  double length() const { return 2.0 * M_PI * r_; }
  double radius() const { return r_; }
  const Vec2& center() const { return c_; }

  Vec2 point(double s) const {
    const double a = s / r_;
    return {c_.x + r_ * std::cos(a), c_.y + r_ * std::sin(a)};
  }
  Vec2 tangent(double s) const {
    const double a = s / r_;
    return {-std::sin(a), std::cos(a)};
  }
  Vec2 normal(double s) const {
    const double a = s / r_;
    return {std::cos(a), std::sin(a)};
  }

  // Signed distance: negative inside, positive outside.
  double sdf(const Vec2& p) const { return (p - c_).norm() - r_; }
  bool contains(const Vec2& p, double tol = 0.0) const { return sdf(p) <= tol; }

  // Arclength of the radial projection of p onto the curve, in [0, length).
  double arclength_of(const Vec2& p) const {
    double a = std::atan2(p.y - c_.y, p.x - c_.x);
    if (a < 0) a += 2.0 * M_PI;
    return a * r_;
  }

  Vec2 normal_at(const Vec2& p) const { return normalized(p - c_); }
  Vec2 tangent_at(const Vec2& p) const {
    const Vec2 n = normal_at(p);
    return {-n.y, n.x};
  }

  // Channels at equal arclength spacing; with an arc restriction only the
  // channels inside [theta0, theta1] are emitted.
  std::vector<Channel> make_channels(int n, const RecordingSpec* rec = nullptr) const;

 private:
  Vec2 c_;
  double r_;
};

}  // namespace recho::geometry
