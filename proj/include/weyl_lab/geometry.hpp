#pragma once

// Computational domains for the flat Dirichlet problem.
//
// Placement conventions: Rectangle and IntervalProduct occupy [0, L_1] x ...,
// Disk and Annulus are centred at the origin, Polygon uses its vertices as
// given. Grids are always the lattice h*Z^n anchored at the origin.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace weyl_lab {

/// A point in R^n, n <= 3. Unused trailing coordinates stay zero.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& p, const Point& q);

struct Rectangle {
  double a;
  double b;
};

struct Disk {
  double r;
};

struct Annulus {
  double r_in;
  double r_out;
};

/// Simple, counter-clockwise polygon.
struct Polygon {
  std::vector<Point> vertices;
};

/// Box [0, L_1] x ... x [0, L_n] for n in {1, 2, 3}.
struct IntervalProduct {
  std::vector<double> lengths;
};

struct BoundingBox {
  Point lo;
  Point hi;
};

class Domain {
 public:
  using Shape = std::variant<Rectangle, Disk, Annulus, Polygon, IntervalProduct>;

  /// Validates the shape invariants; throws Error(invalid_argument) otherwise.
  explicit Domain(Shape shape);

  static Domain rectangle(double a, double b) { return Domain(Rectangle{a, b}); }
  static Domain unit_square() { return rectangle(1.0, 1.0); }
  static Domain disk(double r) { return Domain(Disk{r}); }
  static Domain annulus(double r_in, double r_out) { return Domain(Annulus{r_in, r_out}); }
  static Domain polygon(std::vector<Point> vertices) { return Domain(Polygon{std::move(vertices)}); }
  static Domain interval(double length) { return Domain(IntervalProduct{{length}}); }
  static Domain box(std::vector<double> lengths) { return Domain(IntervalProduct{std::move(lengths)}); }
  /// Unit square minus its upper-right quarter.
  static Domain l_shape();

  const Shape& shape() const noexcept { return shape_; }
  int dimension() const noexcept { return dimension_; }
  std::string name() const;

  /// n-dimensional volume (length for n = 1, area for n = 2).
  double area() const;
  /// (n-1)-dimensional boundary measure; for n = 1 the number of endpoints.
  double perimeter() const;
  double diameter() const;
  BoundingBox bounds() const;

  /// Strict interior test. Points within a relative 1e-12 of the boundary are
  /// treated as boundary points and return false.
  bool contains(const Point& p) const;
  /// Closed-region test with the same boundary tolerance.
  bool in_closure(const Point& p) const;
  /// Euclidean distance to the boundary, the field s(x). Throws
  /// Error(point_outside_domain) for points outside the closure.
  double boundary_distance(const Point& p) const;

  Domain scaled(double factor) const;

 private:
  double signed_boundary_distance(const Point& p) const;
  double boundary_tolerance() const;

  Shape shape_;
  int dimension_ = 2;
};

/// Interior lattice points of a domain with a dense lattice -> index lookup.
class InteriorGrid {
 public:
  using Lattice = std::array<std::int64_t, 3>;

  InteriorGrid(int dimension, double h, Lattice lo, Lattice extent,
               std::vector<Lattice> lattice_points);

  int dimension() const noexcept { return dimension_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return lattice_.size(); }

  Point point(std::size_t i) const;
  const Lattice& lattice(std::size_t i) const { return lattice_[i]; }
  const std::vector<Lattice>& lattice_points() const noexcept { return lattice_; }

  /// Interior index of a lattice site, or nullopt for exterior/boundary sites.
  std::optional<std::size_t> index_of(const Lattice& site) const;

 private:
  int dimension_;
  double h_;
  Lattice lo_;
  Lattice extent_;
  std::vector<Lattice> lattice_;
  std::vector<std::int32_t> lookup_;
};

/// Lattice points of h*Z^n strictly inside d, ordered lexicographically with
/// the last axis slowest (y-major in 2D). Throws Error(grid_too_coarse) when
/// no lattice point is interior.
InteriorGrid interior_grid(const Domain& d, double h);

}  // namespace weyl_lab
