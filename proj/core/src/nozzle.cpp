#include "axiflow/nozzle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace axiflow {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kCylinder:
      return "cylinder";
    case ProfileKind::kTanhStep:
      return "tanh_step";
    case ProfileKind::kBump:
      return "bump";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(std::string_view name) {
  if (name == "cylinder") return ProfileKind::kCylinder;
  if (name == "tanh_step") return ProfileKind::kTanhStep;
  if (name == "bump") return ProfileKind::kBump;
  throw std::invalid_argument("unknown nozzle kind '" + std::string(name) + "'");
}

NozzleProfile::NozzleProfile(ProfileKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
  const auto expect = [&](std::size_t n) {
    if (params_.size() != n) {
      throw std::invalid_argument(std::string(to_string(kind_)) + ": expected " +
                                  std::to_string(n) + " parameters, got " +
                                  std::to_string(params_.size()));
    }
  };
  switch (kind_) {
    case ProfileKind::kCylinder: {
      expect(1);
      const double a = params_[0];
      if (!(a > 0.0)) throw std::invalid_argument("cylinder: radius must be positive");
      min_radius_ = max_radius_ = left_radius_ = right_radius_ = a;
      break;
    }
    case ProfileKind::kTanhStep: {
      expect(2);
      const double a = params_[0];
      const double ell = params_[1];
      if (!(a > 0.0)) throw std::invalid_argument("tanh_step: outlet radius must be positive");
      if (!(ell > 0.0)) throw std::invalid_argument("tanh_step: length scale must be positive");
      left_radius_ = 1.0;
      right_radius_ = a;
      min_radius_ = std::min(1.0, a);
      max_radius_ = std::max(1.0, a);
      const double peak = (a - 1.0) / (2.0 * ell);
      min_slope_ = std::min(0.0, peak);
      max_slope_ = std::max(0.0, peak);
      break;
    }
    case ProfileKind::kBump: {
      expect(3);
      const double a0 = params_[0];
      const double h = params_[1];
      const double w = params_[2];
      if (!(w > 0.0)) throw std::invalid_argument("bump: width must be positive");
      min_radius_ = a0 + std::min(h, 0.0);
      max_radius_ = a0 + std::max(h, 0.0);
      if (!(min_radius_ > 0.0)) throw std::invalid_argument("bump: infimum radius must be positive");
      left_radius_ = right_radius_ = a0;
      const double peak = std::sqrt(2.0) * std::abs(h) / w * std::exp(-0.5);
      min_slope_ = -peak;
      max_slope_ = peak;
      break;
    }
  }
}

double NozzleProfile::radius(double x) const {
  switch (kind_) {
    case ProfileKind::kCylinder:
      return params_[0];
    case ProfileKind::kTanhStep: {
      const double a = params_[0];
      return 0.5 * (1.0 + a) + 0.5 * (a - 1.0) * std::tanh(x / params_[1]);
    }
    case ProfileKind::kBump: {
      const double w = params_[2];
      return params_[0] + params_[1] * std::exp(-(x * x) / (w * w));
    }
  }
  return 0.0;
}

double NozzleProfile::slope(double x) const {
  switch (kind_) {
    case ProfileKind::kCylinder:
      return 0.0;
    case ProfileKind::kTanhStep: {
      const double a = params_[0];
      const double ell = params_[1];
      const double c = std::cosh(x / ell);
      return 0.5 * (a - 1.0) / (ell * c * c);
    }
    case ProfileKind::kBump: {
      const double h = params_[1];
      const double w = params_[2];
      return -2.0 * h * x / (w * w) * std::exp(-(x * x) / (w * w));
    }
  }
  return 0.0;
}

NozzleProfile make_profile(ProfileKind kind, std::span<const double> params) {
  return NozzleProfile(kind, std::vector<double>(params.begin(), params.end()));
}

double pick_domain_length(const NozzleProfile& profile, double tol_flat, double l_min,
                          double l_max) {
  if (!(tol_flat > 0.0) || !(l_min > 0.0)) {
    throw std::invalid_argument("pick_domain_length: tolerance and L_min must be positive");
  }
  for (double l = l_min; l <= l_max; l *= 2.0) {
    const double left = std::abs(profile.radius(-l) - profile.left_radius());
    const double right = std::abs(profile.radius(l) - profile.right_radius());
    if (left < tol_flat && right < tol_flat) return l;
  }
  throw std::runtime_error("pick_domain_length: profile not flat to " + std::to_string(tol_flat) +
                           " before L_max = " + std::to_string(l_max));
}

std::string_view to_string(QuadratureRule rule) {
  return rule == QuadratureRule::kMidpoint ? "midpoint" : "gauss2x2";
}

QuadratureRule quadrature_rule_from_string(std::string_view name) {
  if (name == "midpoint") return QuadratureRule::kMidpoint;
  if (name == "gauss2x2") return QuadratureRule::kGauss2x2;
  throw std::invalid_argument("unknown quadrature rule '" + std::string(name) + "'");
}

MappedGrid::MappedGrid(NozzleProfile profile, double half_length, int nx, int nr, double delta,
                       QuadratureRule rule)
    : profile_(std::move(profile)),
      half_length_(half_length),
      nx_(nx),
      nr_(nr),
      delta_(delta),
      rule_(rule) {
  if (nx_ < 4 || nr_ < 4) throw std::invalid_argument("grid: nx and nr must be at least 4");
  if (!(half_length_ > 0.0)) throw std::invalid_argument("grid: L must be positive");
  if (!(delta_ >= 0.0) || delta_ > profile_.min_radius()) {
    throw std::invalid_argument("grid: axis shield delta must lie in [0, b]");
  }
  wall_.resize(static_cast<std::size_t>(nx_) + 1);
  wall_slope_.resize(wall_.size());
  for (int i = 0; i <= nx_; ++i) {
    wall_[static_cast<std::size_t>(i)] = profile_.radius(xi(i));
    wall_slope_[static_cast<std::size_t>(i)] = profile_.slope(xi(i));
    if (!(wall_[static_cast<std::size_t>(i)] > 0.0)) {
      throw std::invalid_argument("grid: degenerate geometry (non-positive wall radius)");
    }
  }
  build_quadrature();
}

double MappedGrid::mesh_size() const {
  return std::max(h_xi(), h_sigma() * profile_.max_radius());
}

double MappedGrid::node_area(int i, int j) const {
  const double wx = (i == 0 || i == nx_) ? 0.5 : 1.0;
  const double wr = (j == 0 || j == nr_) ? 0.5 : 1.0;
  return wx * wr * h_xi() * h_sigma() * wall(i);
}

void MappedGrid::build_quadrature() {
  struct RefPoint {
    double a;
    double b;
    double w;
  };
  std::vector<RefPoint> ref;
  if (rule_ == QuadratureRule::kMidpoint) {
    ref = {{0.5, 0.5, 1.0}};
  } else {
    const double g = 0.5 / std::sqrt(3.0);
    ref = {{0.5 - g, 0.5 - g, 0.25}, {0.5 + g, 0.5 - g, 0.25}, {0.5 - g, 0.5 + g, 0.25},
           {0.5 + g, 0.5 + g, 0.25}};
  }
  const double hx = h_xi();
  const double hs = h_sigma();
  quad_.clear();
  quad_.reserve(cell_count() * ref.size());
  for (int i = 0; i < nx_; ++i) {
    for (int j = 0; j < nr_; ++j) {
      for (const auto& p : ref) {
        const double xi_q = xi(i) + p.a * hx;
        const double sigma_q = sigma(j) + p.b * hs;
        const double f = profile_.radius(xi_q);
        const double fp = profile_.slope(xi_q);
        if (!(f > 0.0)) throw std::invalid_argument("grid: degenerate geometry");
        // Corner order: (i,j), (i+1,j), (i,j+1), (i+1,j+1).
        const double dn_dxi[4] = {-(1.0 - p.b) / hx, (1.0 - p.b) / hx, -p.b / hx, p.b / hx};
        const double dn_dsigma[4] = {-(1.0 - p.a) / hs, -p.a / hs, (1.0 - p.a) / hs, p.a / hs};
        QuadPoint q{};
        q.node[0] = index(i, j);
        q.node[1] = index(i + 1, j);
        q.node[2] = index(i, j + 1);
        q.node[3] = index(i + 1, j + 1);
        for (int k = 0; k < 4; ++k) {
          q.dx[k] = dn_dxi[k] - sigma_q * fp / f * dn_dsigma[k];
          q.dr[k] = dn_dsigma[k] / f;
        }
        q.x = xi_q;
        q.r = sigma_q * f;
        q.weight = p.w * hx * hs * f;
        quad_.push_back(q);
      }
    }
  }
}

NodalGradient MappedGrid::gradient(std::span<const double> field, int i, int j) const {
  const auto at = [&](int ii, int jj) { return field[index(ii, jj)]; };
  double d_xi;
  if (i == 0) {
    d_xi = (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2.0 * h_xi());
  } else if (i == nx_) {
    d_xi = (3.0 * at(nx_, j) - 4.0 * at(nx_ - 1, j) + at(nx_ - 2, j)) / (2.0 * h_xi());
  } else {
    d_xi = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h_xi());
  }
  double d_sigma;
  if (j == 0) {
    d_sigma = (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * h_sigma());
  } else if (j == nr_) {
    d_sigma = (3.0 * at(i, nr_) - 4.0 * at(i, nr_ - 1) + at(i, nr_ - 2)) / (2.0 * h_sigma());
  } else {
    d_sigma = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h_sigma());
  }
  const double f = wall(i);
  return {d_xi - sigma(j) * wall_slope(i) / f * d_sigma, d_sigma / f};
}

MappedGrid MappedGrid::with_delta(double delta) const {
  MappedGrid copy = *this;
  if (!(delta >= 0.0) || delta > profile_.min_radius()) {
    throw std::invalid_argument("grid: axis shield delta must lie in [0, b]");
  }
  copy.delta_ = delta;
  return copy;
}

MappedGrid build_grid(const NozzleProfile& profile, double half_length, int nx, int nr,
                      double delta, QuadratureRule rule) {
  return MappedGrid(profile, half_length, nx, nr, delta, rule);
}

}  // namespace axiflow
