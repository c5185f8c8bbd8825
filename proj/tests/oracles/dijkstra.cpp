#include "oracles/dijkstra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace recho::oracles {

DijkstraOracle::DijkstraOracle(const Vec2& source, const recho::geometry::SpeedField& speed,
                               const GridGeom& base_grid, int refine) {
  grid_ = base_grid;
  grid_.nx = (base_grid.nx - 1) * refine + 1;
  grid_.ny = (base_grid.ny - 1) * refine + 1;
  grid_.dx = base_grid.dx / refine;
  grid_.dy = base_grid.dy / refine;

  const int nx = grid_.nx, ny = grid_.ny;
  std::vector<double> c(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      c[static_cast<size_t>(j) * nx + i] = speed.value(grid_.node(i, j));

  dist_.assign(c.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

  const int si = static_cast<int>(std::lround((source.x - grid_.x0) / grid_.dx));
  const int sj = static_cast<int>(std::lround((source.y - grid_.y0) / grid_.dy));
  const int s = sj * nx + si;
  dist_[s] = 0.0;
  heap.push({0.0, s});

  const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  double len[8];
  for (int e = 0; e < 8; ++e)
    len[e] = std::sqrt(di[e] * di[e] * grid_.dx * grid_.dx +
                       dj[e] * dj[e] * grid_.dy * grid_.dy);

  while (!heap.empty()) {
    const auto [d, k] = heap.top();
    heap.pop();
    if (d > dist_[k] + 1e-15) continue;
    const int i = k % nx, j = k / nx;
    for (int e = 0; e < 8; ++e) {
      const int ii = i + di[e], jj = j + dj[e];
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      const int kk = jj * nx + ii;
      const double w = len[e] * 2.0 / (c[k] + c[kk]);
      if (dist_[k] + w < dist_[kk]) {
        dist_[kk] = dist_[k] + w;
        heap.push({dist_[kk], kk});
      }
    }
  }
}

double DijkstraOracle::at(const Vec2& p) const {
  const int i = std::clamp(static_cast<int>(std::lround((p.x - grid_.x0) / grid_.dx)), 0,
                           grid_.nx - 1);
  const int j = std::clamp(static_cast<int>(std::lround((p.y - grid_.y0) / grid_.dy)), 0,
                           grid_.ny - 1);
  return dist_[static_cast<size_t>(j) * grid_.nx + i];
}

}  // namespace recho::oracles
