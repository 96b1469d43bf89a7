#include "weyl_lab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "weyl_lab/bessel.hpp"
#include "weyl_lab/error.hpp"
#include "weyl_lab/quadrature.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "oracles";
constexpr std::size_t kRadialNodes = 400;
constexpr double kTieGap = 1e-12;

struct Mode {
  double lambda;
  ModeLabel label;
};

bool label_less(const ModeLabel& p, const ModeLabel& q) {
  if (p.index[0] != q.index[0]) return p.index[0] < q.index[0];
  if (p.parity != q.parity) return p.parity < q.parity;
  if (p.index[1] != q.index[1]) return p.index[1] < q.index[1];
  return p.index[2] < q.index[2];
}

// Ascending eigenvalues; within floating-point ties (relative gap < 1e-12)
// ordered by label.
void sort_modes(std::vector<Mode>& modes) {
  std::sort(modes.begin(), modes.end(), [](const Mode& p, const Mode& q) {
    if (p.lambda != q.lambda) return p.lambda < q.lambda;
    return label_less(p.label, q.label);
  });
  std::size_t start = 0;
  for (std::size_t j = 1; j <= modes.size(); ++j) {
    if (j < modes.size() && modes[j].lambda - modes[j - 1].lambda <= kTieGap * modes[j].lambda) continue;
    std::sort(modes.begin() + static_cast<std::ptrdiff_t>(start), modes.begin() + static_cast<std::ptrdiff_t>(j),
              [](const Mode& p, const Mode& q) { return label_less(p.label, q.label); });
    start = j;
  }
}

void require_positive(double v, std::string_view what) {
  if (!(std::isfinite(v) && v > 0.0)) fail(Errc::invalid_argument, kModule, std::string(what) + " must be positive");
}

class BoxEigenbasis final : public Eigenbasis {
 public:
  BoxEigenbasis(std::vector<double> lengths, std::vector<ModeLabel> labels)
      : lengths_(std::move(lengths)), labels_(std::move(labels)) {
    amplitude_ = 1.0;
    for (double l : lengths_) amplitude_ *= std::sqrt(2.0 / l);
    for (const auto& lab : labels_)
      for (std::size_t k = 0; k < lengths_.size(); ++k) max_index_ = std::max(max_index_, lab.index[k]);
  }

  std::size_t size() const override { return labels_.size(); }

  double value(std::size_t j, const Point& x) const override {
    double v = amplitude_;
    for (std::size_t k = 0; k < lengths_.size(); ++k) {
      v *= std::sin(labels_[j].index[k] * std::numbers::pi * x[static_cast<int>(k)] / lengths_[k]);
    }
    return v;
  }

  void values(const Point& x, std::span<double> out) const override {
    const std::size_t dims = lengths_.size();
    const auto stride = static_cast<std::size_t>(max_index_) + 1;
    std::vector<double> table(dims * stride, 0.0);
    for (std::size_t k = 0; k < dims; ++k) {
      const double phase = std::numbers::pi * x[static_cast<int>(k)] / lengths_[k];
      for (std::size_t m = 1; m < stride; ++m) table[k * stride + m] = std::sin(static_cast<double>(m) * phase);
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
      double v = amplitude_;
      for (std::size_t k = 0; k < dims; ++k) v *= table[k * stride + static_cast<std::size_t>(labels_[j].index[k])];
      out[j] = v;
    }
  }

 private:
  std::vector<double> lengths_;
  std::vector<ModeLabel> labels_;
  double amplitude_ = 1.0;
  int max_index_ = 0;
};

struct DiskMode {
  int nu;
  int parity;
  double zero;
  double inv_sqrt_norm;
};

class DiskEigenbasis final : public Eigenbasis {
 public:
  DiskEigenbasis(double r, std::vector<DiskMode> modes) : r_(r), modes_(std::move(modes)) {}

  std::size_t size() const override { return modes_.size(); }

  double value(std::size_t j, const Point& x) const override {
    const DiskMode& m = modes_[j];
    const double rho = std::hypot(x.x, x.y);
    const double theta = std::atan2(x.y, x.x);
    const double angular = m.parity == 0 ? std::cos(m.nu * theta) : std::sin(m.nu * theta);
    return m.inv_sqrt_norm * bessel_j(m.nu, std::min(m.zero * rho / r_, m.zero)) * angular;
  }

 private:
  double r_;
  std::vector<DiskMode> modes_;
};

Spectrum box_like(const Domain& domain, const std::vector<double>& lengths, double lambda_max, std::string oracle) {
  require_positive(lambda_max, "lambda_max");
  const std::size_t dims = lengths.size();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<Mode> modes;
  std::array<int, 3> idx{1, 1, 1};
  auto level = [&](const std::array<int, 3>& i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dims; ++k) s += static_cast<double>(i[k]) * i[k] / (lengths[k] * lengths[k]);
    return pi2 * s;
  };
  // Enumerate the positive lattice inside the ellipsoid, last axis slowest.
  const int top2 = dims > 2 ? static_cast<int>(lengths[2] * std::sqrt(lambda_max) / std::numbers::pi) + 1 : 1;
  const int top1 = dims > 1 ? static_cast<int>(lengths[1] * std::sqrt(lambda_max) / std::numbers::pi) + 1 : 1;
  const int top0 = static_cast<int>(lengths[0] * std::sqrt(lambda_max) / std::numbers::pi) + 1;
  for (idx[2] = 1; idx[2] <= top2; ++idx[2]) {
    for (idx[1] = 1; idx[1] <= top1; ++idx[1]) {
      for (idx[0] = 1; idx[0] <= top0; ++idx[0]) {
        std::array<int, 3> lab{idx[0], dims > 1 ? idx[1] : 0, dims > 2 ? idx[2] : 0};
        const double lambda = level(lab);
        if (lambda > lambda_max) break;
        modes.push_back({lambda, ModeLabel{lab, 0}});
      }
    }
  }
  if (modes.empty()) fail(Errc::empty_spectrum, kModule, "lambda_max lies below the ground state");
  sort_modes(modes);

  std::vector<double> eigenvalues;
  std::vector<ModeLabel> labels;
  for (const auto& m : modes) {
    eigenvalues.push_back(m.lambda);
    labels.push_back(m.label);
  }
  auto basis = std::make_shared<const BoxEigenbasis>(lengths, labels);
  return Spectrum::analytic(domain, std::move(oracle), std::move(eigenvalues), std::move(labels), std::move(basis),
                            lambda_max);
}

double radial_norm_squared(int nu, double zero, double r) {
  const GaussRule& rule = gauss_legendre(kRadialNodes);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double rho = 0.5 * r * (rule.nodes[i] + 1.0);
    const double j = bessel_j(nu, zero * rho / r);
    s += rule.weights[i] * j * j * rho;
  }
  const double radial = 0.5 * r * s;
  return (nu == 0 ? 2.0 : 1.0) * std::numbers::pi * radial;
}

}  // namespace

Spectrum rectangle_spectrum(double a, double b, double lambda_max) {
  require_positive(a, "rectangle side a");
  require_positive(b, "rectangle side b");
  return box_like(Domain::rectangle(a, b), {a, b}, lambda_max, "rectangle");
}

Spectrum interval_spectrum(double length, double lambda_max) {
  require_positive(length, "interval length");
  return box_like(Domain::interval(length), {length}, lambda_max, "interval");
}

Spectrum box_spectrum(const std::vector<double>& lengths, double lambda_max) {
  Domain d = Domain::box(lengths);
  return box_like(d, lengths, lambda_max, "box");
}

Spectrum disk_spectrum(double r, double lambda_max) {
  require_positive(r, "disk radius");
  require_positive(lambda_max, "lambda_max");
  const double limit = r * std::sqrt(lambda_max);
  std::vector<Mode> modes;
  for (int nu = 0;; ++nu) {
    // j_{nu,1} > nu, so no further order contributes once nu >= limit.
    if (static_cast<double>(nu) >= limit) break;
    const auto zeros = bessel_zeros_below(nu, std::nextafter(limit, std::numeric_limits<double>::infinity()));
    if (zeros.empty()) break;
    for (std::size_t k = 0; k < zeros.size(); ++k) {
      const double lambda = (zeros[k] / r) * (zeros[k] / r);
      if (lambda > lambda_max) continue;
      for (int parity = 0; parity < (nu == 0 ? 1 : 2); ++parity) {
        modes.push_back({lambda, ModeLabel{{nu, static_cast<int>(k) + 1, 0}, parity}});
      }
    }
  }
  if (modes.empty()) fail(Errc::empty_spectrum, kModule, "lambda_max lies below the disk ground state");

  sort_modes(modes);
  std::vector<double> eigenvalues;
  std::vector<ModeLabel> labels;
  std::vector<DiskMode> ordered;
  for (const auto& m : modes) {
    eigenvalues.push_back(m.lambda);
    labels.push_back(m.label);
    const int nu = m.label.index[0];
    const int k = m.label.index[1];
    const double exact_zero = bessel_zero(nu, k);
    ordered.push_back({nu, m.label.parity, exact_zero, 1.0 / std::sqrt(radial_norm_squared(nu, exact_zero, r))});
  }
  auto basis = std::make_shared<const DiskEigenbasis>(r, std::move(ordered));
  return Spectrum::analytic(Domain::disk(r), "disk", std::move(eigenvalues), std::move(labels), std::move(basis),
                            lambda_max);
}

Spectrum analytic_spectrum(const Domain& d, double lambda_max) {
  if (const auto* rect = std::get_if<Rectangle>(&d.shape())) return rectangle_spectrum(rect->a, rect->b, lambda_max);
  if (const auto* box = std::get_if<IntervalProduct>(&d.shape())) {
    return box->lengths.size() == 1 ? interval_spectrum(box->lengths[0], lambda_max) : box_spectrum(box->lengths, lambda_max);
  }
  if (const auto* disk = std::get_if<Disk>(&d.shape())) return disk_spectrum(disk->r, lambda_max);
  fail(Errc::invalid_argument, kModule, "no closed-form spectrum for " + d.name());
}

double disk_mode_norm_closed_form(int nu, double zero, double r) {
  const double j = bessel_j(nu + 1, zero);
  return (nu == 0 ? 2.0 : 1.0) * std::numbers::pi * 0.5 * r * r * j * j;
}

}  // namespace weyl_lab
