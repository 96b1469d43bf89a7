#include "weyl_lab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "weyl_lab/error.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "geometry";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(a, b, c);
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(q1, p1, p2)) return true;
  if (o2 == 0 && on_segment(q2, p1, p2)) return true;
  if (o3 == 0 && on_segment(p1, q1, q2)) return true;
  if (o4 == 0 && on_segment(p2, q1, q2)) return true;
  return false;
}

double shoelace(const std::vector<Point>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

// Crossing-number test. The half-open rule (yi > py) != (yj > py) assigns
// vertices on the ray to exactly one incident edge, so rays through vertices
// or along horizontal edges are counted consistently.
bool ray_cast_inside(const std::vector<Point>& v, const Point& p) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Point& a = v[i];
    const Point& b = v[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

void require(bool ok, std::string_view message) {
  if (!ok) fail(Errc::invalid_argument, kModule, message);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double distance(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Domain::Domain(Shape shape) : shape_(std::move(shape)) {
  std::visit(
      Overloaded{
          [&](const Rectangle& s) {
            require(positive_finite(s.a) && positive_finite(s.b), "rectangle sides must be positive");
            dimension_ = 2;
          },
          [&](const Disk& s) {
            require(positive_finite(s.r), "disk radius must be positive");
            dimension_ = 2;
          },
          [&](const Annulus& s) {
            require(positive_finite(s.r_in) && positive_finite(s.r_out), "annulus radii must be positive");
            require(s.r_in < s.r_out, "annulus requires r_in < r_out");
            dimension_ = 2;
          },
          [&](const Polygon& s) {
            const auto& v = s.vertices;
            require(v.size() >= 3, "polygon needs at least 3 vertices");
            for (const auto& p : v) require(std::isfinite(p.x) && std::isfinite(p.y), "non-finite vertex");
            for (std::size_t i = 0; i < v.size(); ++i) {
              require(!(v[i] == v[(i + 1) % v.size()]), "polygon has repeated consecutive vertices");
            }
            const std::size_t n = v.size();
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = i + 1; j < n; ++j) {
                const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if (adjacent) continue;
                require(!segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]),
                        "polygon is not simple");
              }
            }
            require(shoelace(v) > 0.0, "polygon must be counter-clockwise with positive area");
            dimension_ = 2;
          },
          [&](const IntervalProduct& s) {
            require(!s.lengths.empty() && s.lengths.size() <= 3, "interval product needs 1 to 3 lengths");
            for (double l : s.lengths) require(positive_finite(l), "interval lengths must be positive");
            dimension_ = static_cast<int>(s.lengths.size());
          },
      },
      shape_);
}

Domain Domain::l_shape() {
  return polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}});
}

std::string Domain::name() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Rectangle& s) { out << "rectangle(" << s.a << "," << s.b << ")"; },
                 [&](const Disk& s) { out << "disk(" << s.r << ")"; },
                 [&](const Annulus& s) { out << "annulus(" << s.r_in << "," << s.r_out << ")"; },
                 [&](const Polygon& s) { out << "polygon(" << s.vertices.size() << " vertices)"; },
                 [&](const IntervalProduct& s) {
                   out << "box(";
                   for (std::size_t i = 0; i < s.lengths.size(); ++i) out << (i ? "," : "") << s.lengths[i];
                   out << ")";
                 },
             },
             shape_);
  return out.str();
}

double Domain::area() const {
  using std::numbers::pi;
  return std::visit(Overloaded{
                        [](const Rectangle& s) { return s.a * s.b; },
                        [](const Disk& s) { return pi * s.r * s.r; },
                        [](const Annulus& s) { return pi * (s.r_out * s.r_out - s.r_in * s.r_in); },
                        [](const Polygon& s) { return shoelace(s.vertices); },
                        [](const IntervalProduct& s) {
                          double v = 1.0;
                          for (double l : s.lengths) v *= l;
                          return v;
                        },
                    },
                    shape_);
}

double Domain::perimeter() const {
  using std::numbers::pi;
  return std::visit(Overloaded{
                        [](const Rectangle& s) { return 2.0 * (s.a + s.b); },
                        [](const Disk& s) { return 2.0 * pi * s.r; },
                        [](const Annulus& s) { return 2.0 * pi * (s.r_out + s.r_in); },
                        [](const Polygon& s) {
                          double p = 0.0;
                          const auto& v = s.vertices;
                          for (std::size_t i = 0; i < v.size(); ++i) p += distance(v[i], v[(i + 1) % v.size()]);
                          return p;
                        },
                        [](const IntervalProduct& s) {
                          const auto& l = s.lengths;
                          if (l.size() == 1) return 2.0;
                          if (l.size() == 2) return 2.0 * (l[0] + l[1]);
                          return 2.0 * (l[0] * l[1] + l[1] * l[2] + l[0] * l[2]);
                        },
                    },
                    shape_);
}

double Domain::diameter() const {
  return std::visit(Overloaded{
                        [](const Rectangle& s) { return std::hypot(s.a, s.b); },
                        [](const Disk& s) { return 2.0 * s.r; },
                        [](const Annulus& s) { return 2.0 * s.r_out; },
                        [](const Polygon& s) {
                          double best = 0.0;
                          const auto& v = s.vertices;
                          for (std::size_t i = 0; i < v.size(); ++i)
                            for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, distance(v[i], v[j]));
                          return best;
                        },
                        [](const IntervalProduct& s) {
                          double sq = 0.0;
                          for (double l : s.lengths) sq += l * l;
                          return std::sqrt(sq);
                        },
                    },
                    shape_);
}

BoundingBox Domain::bounds() const {
  return std::visit(Overloaded{
                        [](const Rectangle& s) { return BoundingBox{{0, 0, 0}, {s.a, s.b, 0}}; },
                        [](const Disk& s) { return BoundingBox{{-s.r, -s.r, 0}, {s.r, s.r, 0}}; },
                        [](const Annulus& s) { return BoundingBox{{-s.r_out, -s.r_out, 0}, {s.r_out, s.r_out, 0}}; },
                        [](const Polygon& s) {
                          BoundingBox box{s.vertices.front(), s.vertices.front()};
                          for (const auto& p : s.vertices) {
                            box.lo.x = std::min(box.lo.x, p.x);
                            box.lo.y = std::min(box.lo.y, p.y);
                            box.hi.x = std::max(box.hi.x, p.x);
                            box.hi.y = std::max(box.hi.y, p.y);
                          }
                          box.lo.z = box.hi.z = 0.0;
                          return box;
                        },
                        [](const IntervalProduct& s) {
                          BoundingBox box;
                          for (std::size_t i = 0; i < s.lengths.size(); ++i) box.hi[static_cast<int>(i)] = s.lengths[i];
                          return box;
                        },
                    },
                    shape_);
}

double Domain::signed_boundary_distance(const Point& p) const {
  return std::visit(
      Overloaded{
          [&](const Rectangle& s) {
            return std::min({p.x, s.a - p.x, p.y, s.b - p.y});
          },
          [&](const Disk& s) { return s.r - std::hypot(p.x, p.y); },
          [&](const Annulus& s) {
            const double rho = std::hypot(p.x, p.y);
            return std::min(rho - s.r_in, s.r_out - rho);
          },
          [&](const Polygon& s) {
            const auto& v = s.vertices;
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, segment_distance(p, v[i], v[(i + 1) % v.size()]));
            return ray_cast_inside(v, p) ? d : -d;
          },
          [&](const IntervalProduct& s) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < s.lengths.size(); ++i) {
              const double c = p[static_cast<int>(i)];
              d = std::min({d, c, s.lengths[i] - c});
            }
            return d;
          },
      },
      shape_);
}

double Domain::boundary_tolerance() const { return 1e-12 * diameter(); }

bool Domain::contains(const Point& p) const { return signed_boundary_distance(p) > boundary_tolerance(); }

bool Domain::in_closure(const Point& p) const { return signed_boundary_distance(p) >= -boundary_tolerance(); }

double Domain::boundary_distance(const Point& p) const {
  const double sd = signed_boundary_distance(p);
  if (sd < -boundary_tolerance()) {
    std::ostringstream msg;
    msg << "point (" << p.x << ", " << p.y << ", " << p.z << ") lies outside " << name();
    fail(Errc::point_outside_domain, kModule, msg.str());
  }
  return sd > boundary_tolerance() ? sd : 0.0;
}

Domain Domain::scaled(double factor) const {
  require(positive_finite(factor), "scale factor must be positive");
  return std::visit(Overloaded{
                        [&](const Rectangle& s) { return Domain::rectangle(s.a * factor, s.b * factor); },
                        [&](const Disk& s) { return Domain::disk(s.r * factor); },
                        [&](const Annulus& s) { return Domain::annulus(s.r_in * factor, s.r_out * factor); },
                        [&](const Polygon& s) {
                          auto v = s.vertices;
                          for (auto& p : v) p = {p.x * factor, p.y * factor, 0.0};
                          return Domain::polygon(std::move(v));
                        },
                        [&](const IntervalProduct& s) {
                          auto l = s.lengths;
                          for (auto& x : l) x *= factor;
                          return Domain::box(std::move(l));
                        },
                    },
                    shape_);
}

InteriorGrid::InteriorGrid(int dimension, double h, Lattice lo, Lattice extent, std::vector<Lattice> lattice_points)
    : dimension_(dimension), h_(h), lo_(lo), extent_(extent), lattice_(std::move(lattice_points)) {
  std::size_t cells = 1;
  for (int k = 0; k < 3; ++k) cells *= static_cast<std::size_t>(extent_[k]);
  lookup_.assign(cells, -1);
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    const auto& s = lattice_[i];
    std::size_t flat = 0;
    for (int k = 2; k >= 0; --k) flat = flat * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(s[k] - lo_[k]);
    lookup_[flat] = static_cast<std::int32_t>(i);
  }
}

Point InteriorGrid::point(std::size_t i) const {
  const auto& s = lattice_[i];
  return {static_cast<double>(s[0]) * h_, static_cast<double>(s[1]) * h_, static_cast<double>(s[2]) * h_};
}

std::optional<std::size_t> InteriorGrid::index_of(const Lattice& site) const {
  std::size_t flat = 0;
  for (int k = 2; k >= 0; --k) {
    const std::int64_t off = site[k] - lo_[k];
    if (off < 0 || off >= extent_[k]) return std::nullopt;
    flat = flat * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(off);
  }
  const std::int32_t idx = lookup_[flat];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

InteriorGrid interior_grid(const Domain& d, double h) {
  if (!(std::isfinite(h) && h > 0.0)) fail(Errc::invalid_argument, kModule, "mesh width h must be positive");
  const int n = d.dimension();
  const BoundingBox box = d.bounds();
  InteriorGrid::Lattice lo{0, 0, 0};
  InteriorGrid::Lattice hi{0, 0, 0};
  for (int k = 0; k < n; ++k) {
    lo[k] = static_cast<std::int64_t>(std::ceil(box.lo[k] / h - 1e-9));
    hi[k] = static_cast<std::int64_t>(std::floor(box.hi[k] / h + 1e-9));
  }
  InteriorGrid::Lattice extent{1, 1, 1};
  for (int k = 0; k < n; ++k) extent[k] = std::max<std::int64_t>(hi[k] - lo[k] + 1, 1);

  std::vector<InteriorGrid::Lattice> sites;
  InteriorGrid::Lattice s{0, 0, 0};
  for (s[2] = lo[2]; s[2] <= hi[2]; ++s[2]) {
    for (s[1] = lo[1]; s[1] <= hi[1]; ++s[1]) {
      for (s[0] = lo[0]; s[0] <= hi[0]; ++s[0]) {
        const Point p{static_cast<double>(s[0]) * h, static_cast<double>(s[1]) * h, static_cast<double>(s[2]) * h};
        if (d.contains(p)) sites.push_back(s);
      }
    }
  }
  if (sites.empty()) {
    std::ostringstream msg;
    msg << "no lattice point of spacing h=" << h << " lies strictly inside " << d.name();
    fail(Errc::grid_too_coarse, kModule, msg.str());
  }
  return InteriorGrid(n, h, lo, extent, std::move(sites));
}

}  // namespace weyl_lab
