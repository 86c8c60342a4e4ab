#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace axiflow {

enum class ProfileKind { kCylinder, kTanhStep, kBump };

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// Wall radius r = f(x) of an axially symmetric nozzle.
///
/// Families:
///   cylinder(a)          f ≡ a
///   tanh_step(a, ell)    f = (1+a)/2 + (a−1)/2·tanh(x/ell), from 1 to a
///   bump(a0, h, w)       f = a0 + h·exp(−x²/w²)
class NozzleProfile {
 public:
  NozzleProfile(ProfileKind kind, std::vector<double> params);

  ProfileKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

  double radius(double x) const;
  double slope(double x) const;

  /// inf over ℝ of f.
  double min_radius() const { return min_radius_; }
  double max_radius() const { return max_radius_; }
  /// Limits of f as x → −∞ and x → +∞.
  double left_radius() const { return left_radius_; }
  double right_radius() const { return right_radius_; }
  /// inf and sup over ℝ of f'.
  double min_slope() const { return min_slope_; }
  double max_slope() const { return max_slope_; }

  /// Hölder exponent of f' (recorded only; all families are smooth).
  double holder_exponent() const { return 1.0; }

  bool operator==(const NozzleProfile&) const = default;

 private:
  ProfileKind kind_;
  std::vector<double> params_;
  double min_radius_ = 0.0;
  double max_radius_ = 0.0;
  double left_radius_ = 0.0;
  double right_radius_ = 0.0;
  double min_slope_ = 0.0;
  double max_slope_ = 0.0;
};

NozzleProfile make_profile(ProfileKind kind, std::span<const double> params);

/// Smallest L on the doubling schedule L_min, 2L_min, ... with
/// |f(±L) − r_±| < tol_flat. Throws if L_max is passed first.
double pick_domain_length(const NozzleProfile& profile, double tol_flat, double l_min = 4.0,
                          double l_max = 1024.0);

enum class QuadratureRule { kMidpoint, kGauss2x2 };

std::string_view to_string(QuadratureRule rule);
QuadratureRule quadrature_rule_from_string(std::string_view name);

/// One quadrature point of the bilinear discretization. The physical
/// gradient at the point is Σ_k psi[node[k]] · (dx[k], dr[k]).
struct QuadPoint {
  std::size_t node[4];
  double dx[4];
  double dr[4];
  double r;       ///< physical radius of the point
  double x;       ///< physical axial position
  double weight;  ///< physical area weight dx·dr
};

/// Physical derivatives (∂/∂x, ∂/∂r) of a nodal field at one node.
struct NodalGradient {
  double dx;
  double dr;
};

/// Uniform tensor grid on (ξ, σ) ∈ [−L, L] × [0, 1] mapped to the meridian
/// domain by x = ξ, r = σ·f(ξ). Nodes are numbered station-major:
/// index(i, j) = i·(nr + 1) + j with i the station and j the radial row.
class MappedGrid {
 public:
  MappedGrid(NozzleProfile profile, double half_length, int nx, int nr, double delta,
             QuadratureRule rule = QuadratureRule::kMidpoint);

  const NozzleProfile& profile() const { return profile_; }
  double half_length() const { return half_length_; }
  int nx() const { return nx_; }
  int nr() const { return nr_; }
  double delta() const { return delta_; }
  QuadratureRule rule() const { return rule_; }

  std::size_t node_count() const { return static_cast<std::size_t>(nx_ + 1) * (nr_ + 1); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (nr_ + 1) + static_cast<std::size_t>(j);
  }

  double h_xi() const { return 2.0 * half_length_ / nx_; }
  double h_sigma() const { return 1.0 / nr_; }
  /// Largest physical cell extent, used to scale discretization tolerances.
  double mesh_size() const;

  double xi(int i) const { return -half_length_ + (2.0 * half_length_ * i) / nx_; }
  double sigma(int j) const { return static_cast<double>(j) / nr_; }
  double x(int i) const { return xi(i); }
  double r(int i, int j) const { return sigma(j) * wall_[static_cast<std::size_t>(i)]; }
  double wall(int i) const { return wall_[static_cast<std::size_t>(i)]; }
  double wall_slope(int i) const { return wall_slope_[static_cast<std::size_t>(i)]; }

  bool is_boundary(int i, int j) const { return i == 0 || i == nx_ || j == 0 || j == nr_; }

  /// Dual area associated with a node (quarter cells at edges).
  double node_area(int i, int j) const;

  const std::vector<QuadPoint>& quadrature() const { return quad_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * nr_; }

  /// Second-order finite-difference gradient of a nodal field: centered in
  /// the interior, one-sided at the edges of the (ξ, σ) rectangle, mapped to
  /// physical coordinates through x = ξ, r = σ·f(ξ).
  NodalGradient gradient(std::span<const double> field, int i, int j) const;

  /// Same grid and geometry with a different axis shield.
  MappedGrid with_delta(double delta) const;

 private:
  void build_quadrature();

  NozzleProfile profile_;
  double half_length_;
  int nx_;
  int nr_;
  double delta_;
  QuadratureRule rule_;
  std::vector<double> wall_;
  std::vector<double> wall_slope_;
  std::vector<QuadPoint> quad_;
};

MappedGrid build_grid(const NozzleProfile& profile, double half_length, int nx, int nr,
                      double delta, QuadratureRule rule = QuadratureRule::kMidpoint);

}  // namespace axiflow
