#include "padic/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace padic {

Grid::Grid(DomainKind kind, double half_width, std::size_t points)
    : kind_(kind), half_width_(half_width), points_(points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("Grid: half_width must be positive and finite");
  }
  if (points < min_points) {
    throw std::invalid_argument("Grid: at least " + std::to_string(min_points) +
                                " points are required, got " + std::to_string(points));
  }
  const double span = kind == DomainKind::half_line ? half_width : 2.0 * half_width;
  spacing_ = span / static_cast<double>(points - 1);
}

double Grid::node(std::size_t i) const {
  if (kind_ == DomainKind::half_line) return static_cast<double>(i) * spacing_;
  // Measured from the centre so that mirrored nodes are exact negatives.
  const double offset = static_cast<double>(i) - 0.5 * static_cast<double>(points_ - 1);
  return offset * spacing_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> t(points_);
  for (std::size_t i = 0; i < points_; ++i) t[i] = node(i);
  return t;
}

Grid Grid::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("Grid::scaled: factor must be positive");
  return Grid(kind_, half_width_ * factor, points_);
}

Profile::Profile(Grid g, std::vector<double> v, double left, double right)
    : grid(g), values(std::move(v)), left_tail(left), right_tail(right) {
  if (values.size() != grid.points()) {
    throw std::invalid_argument("Profile: " + std::to_string(values.size()) +
                                " values for a grid of " + std::to_string(grid.points()) +
                                " points");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("Profile: non-finite value at index " + std::to_string(i));
    }
  }
  if (!std::isfinite(left_tail) || !std::isfinite(right_tail)) {
    throw std::invalid_argument("Profile: tails must be finite");
  }
}

Profile Profile::constant(const Grid& g, double c) {
  if (g.kind() == DomainKind::half_line) {
    return half_line(g, std::vector<double>(g.points(), c), c);
  }
  return Profile(g, std::vector<double>(g.points(), c), c, c);
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace padic
