#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace padic {

enum class DomainKind { half_line, full_line };

/// Uniform sample points on [0, T] (half line) or [-T, T] (full line).
class Grid {
 public:
  static constexpr std::size_t min_points = 16;

  /// Throws std::invalid_argument unless half_width > 0 and points >= 16.
  Grid(DomainKind kind, double half_width, std::size_t points);

  static Grid half_line(double half_width, std::size_t points) {
    return Grid(DomainKind::half_line, half_width, points);
  }
  static Grid full_line(double half_width, std::size_t points) {
    return Grid(DomainKind::full_line, half_width, points);
  }

  DomainKind kind() const { return kind_; }
  double half_width() const { return half_width_; }
  std::size_t points() const { return points_; }
  double spacing() const { return spacing_; }

  /// Node i. Half-line nodes start exactly at 0; full-line nodes are
  /// symmetric, and the middle node is exactly 0 when points is odd.
  double node(std::size_t i) const;
  std::vector<double> nodes() const;

  /// Same grid with every coordinate multiplied by factor > 0.
  Grid scaled(double factor) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  DomainKind kind_;
  double half_width_;
  std::size_t points_;
  double spacing_;
};

/// Samples of a field on a grid plus its declared limits at -inf and +inf.
///
/// For half-line profiles the left tail is the odd-reflection marker
/// -right_tail; it is kept for symmetry with full-line profiles and never
/// used as data.
struct Profile {
  Grid grid;
  std::vector<double> values;
  double left_tail = 0.0;
  double right_tail = 0.0;

  /// Throws std::invalid_argument on size mismatch or non-finite samples.
  Profile(Grid g, std::vector<double> v, double left, double right);

  static Profile half_line(Grid g, std::vector<double> v, double right_tail) {
    return Profile(g, std::move(v), -right_tail, right_tail);
  }

  static Profile constant(const Grid& g, double c);

  std::span<const double> samples() const { return values; }
};

double sup_norm(std::span<const double> v);
double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace padic
