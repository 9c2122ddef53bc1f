#include "ddpen/grid/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddpen::grid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared distance transform of a sampled function f (Felzenszwalb and
// Huttenlocher). v and z are scratch buffers of size n and n + 1.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v,
            std::vector<double>& z) {
  int k = 0;
  // Skip leading infinities so the envelope starts at a finite parabola.
  int first = 0;
  while (first < n && std::isinf(f[first])) {
    ++first;
  }
  if (first == n) {
    std::fill(d, d + n, kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (std::isinf(f[q])) {
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) -
           (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) {
      ++k;
    }
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

DistanceField::DistanceField(int width, int height, double resolution,
                             Point2 origin, std::vector<double> distances)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(std::move(origin)),
      dist_(std::move(distances)) {
  has_obstacles_ = std::any_of(dist_.begin(), dist_.end(),
                               [](double d) { return d < kNoObstacle; });
}

double DistanceField::sample(const Point2& p, Eigen::Vector2d* gradient) const {
  if (gradient != nullptr) {
    gradient->setZero();
  }
  if (!has_obstacles_) {
    return kNoObstacle;
  }
  const double lx = (p.x() - origin_.x()) / resolution_;
  const double ly = (p.y() - origin_.y()) / resolution_;
  if (!(lx >= 0.0 && ly >= 0.0 && lx <= width_ && ly <= height_)) {
    return kNoObstacle;
  }
  // Continuous coordinates relative to cell centers.
  const double gx = std::clamp(lx - 0.5, 0.0, width_ - 1.0);
  const double gy = std::clamp(ly - 0.5, 0.0, height_ - 1.0);
  const int x0 = std::min(static_cast<int>(gx), std::max(width_ - 2, 0));
  const int y0 = std::min(static_cast<int>(gy), std::max(height_ - 2, 0));
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = gx - x0;
  const double fy = gy - y0;
  const double d00 = at({x0, y0});
  const double d10 = at({x1, y0});
  const double d01 = at({x0, y1});
  const double d11 = at({x1, y1});
  const double bottom = d00 + fx * (d10 - d00);
  const double top = d01 + fx * (d11 - d01);
  if (gradient != nullptr) {
    // The clamped band along the border is constant in the clamped axis.
    const bool x_free = lx - 0.5 > 0.0 && lx - 0.5 < width_ - 1.0;
    const bool y_free = ly - 0.5 > 0.0 && ly - 0.5 < height_ - 1.0;
    const double ddx = ((d10 - d00) * (1.0 - fy) + (d11 - d01) * fy) / resolution_;
    const double ddy = (top - bottom) / resolution_;
    *gradient = Eigen::Vector2d(x_free ? ddx : 0.0, y_free ? ddy : 0.0);
  }
  return bottom + fy * (top - bottom);
}

std::vector<double> squared_cell_distances(const CostMap& map,
                                           double lethal_threshold) {
  const int w = map.width();
  const int h = map.height();
  std::vector<double> grid(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    grid[i] = map.at(i) >= lethal_threshold ? 0.0 : kInf;
  }
  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  // Columns.
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      f[y] = grid[static_cast<std::size_t>(y) * w + x];
    }
    edt_1d(f.data(), d.data(), h, v, z);
    for (int y = 0; y < h; ++y) {
      grid[static_cast<std::size_t>(y) * w + x] = d[y];
    }
  }
  // Rows.
  for (int y = 0; y < h; ++y) {
    double* row = grid.data() + static_cast<std::size_t>(y) * w;
    std::copy(row, row + w, f.begin());
    edt_1d(f.data(), row, w, v, z);
  }
  return grid;
}

DistanceField distance_field(const CostMap& map, double lethal_threshold) {
  std::vector<double> sq = squared_cell_distances(map, lethal_threshold);
  for (double& value : sq) {
    value = std::isinf(value) ? DistanceField::kNoObstacle
                              : std::sqrt(value) * map.resolution();
  }
  return DistanceField(map.width(), map.height(), map.resolution(),
                       map.origin(), std::move(sq));
}

}  // namespace ddpen::grid
