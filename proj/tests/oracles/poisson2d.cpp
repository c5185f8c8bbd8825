#include "oracles/poisson2d.hpp"

#include <cmath>
#include <vector>

namespace recho::oracles {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on Legendre polynomials.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

double poisson2d_value(const std::function<double(Vec2)>& f, double t, const Vec2& x,
                       int n_phi, int n_theta) {
  if (t <= 0.0) return 0.0;
  std::vector<double> gx, gw;
  gauss_legendre(n_phi, gx, gw);

  double acc = 0.0;
  for (int j = 0; j < n_theta; ++j) {
    const double theta = 2.0 * M_PI * j / n_theta;
    const Vec2 omega{std::cos(theta), std::sin(theta)};
    double line = 0.0;
    for (int i = 0; i < n_phi; ++i) {
      const double phi = 0.25 * M_PI * (gx[i] + 1.0);  // [0, pi/2]
      const double s = std::sin(phi);
      line += gw[i] * f(x + omega * (t * s)) * t * s;
    }
    acc += line * (0.25 * M_PI);  // phi-interval scaling
  }
  // theta trapezoid weight (2pi / n) and the 1/(2pi) prefactor.
  return acc / n_theta;
}

}  // namespace recho::oracles
