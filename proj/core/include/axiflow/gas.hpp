#pragma once

#include <array>

namespace axiflow {

/// Pointwise state of the truncated gas at a given squared speed.
struct TruncatedSpeedState {
  double density;      ///< g̃(q²)
  double momentum;     ///< s = G̃(q²) = (ρq)²
  double coefficient;  ///< g̃ + 2q² dg̃/dq², the ellipticity coefficient
};

/// F, F' and F'' at one momentum value, sharing a single density solve.
struct CoenergyTerms {
  double value;
  double d1;
  double d2;
};

struct EllipticityBounds {
  double nu;
  double lambda;
};

/// Nondimensional polytropic gas, p = ρ^γ/γ with critical speed and density
/// both equal to one, together with the subsonic truncation of the
/// density-momentum relation.
///
/// Naming follows the quantities, not symbols:
///   density_from_speed      ρ = g(q²)
///   momentum_from_speed     s = (ρq)² = G(q²)
///   density_from_momentum   ρ = H(s), subsonic branch
///   truncated_*             the frozen relation H̃ and what derives from it
///
/// The truncation equals H on [0, m̃²], is constant from ((m̃+1)/2)² on, and
/// in between is the quintic Hermite polynomial matching H, H', H'' on the
/// left and (H(((m̃+1)/2)²), 0, 0) on the right.
///
/// Instances are immutable; every member is safe to call concurrently.
class GasModel {
 public:
  explicit GasModel(double gamma = 1.4, double m_tilde = 0.98);

  double gamma() const { return gamma_; }
  double m_tilde() const { return m_tilde_; }
  double stagnation_density() const { return rho_stag_; }
  /// Momentum value m̃² where the truncation starts.
  double truncation_start() const { return s0_; }
  /// Momentum value ((m̃+1)/2)² beyond which the density is frozen.
  double truncation_end() const { return s1_; }
  double frozen_density() const { return rho_frozen_; }

  double density_from_speed(double q_sq) const;
  double momentum_from_speed(double q_sq) const;
  double speed_from_momentum(double s) const;
  double density_from_momentum(double s) const;
  /// dH/ds on [0, 1); -inf at s = 1.
  double density_from_momentum_derivative(double s) const;

  double truncated_density_from_momentum(double s) const;
  double truncated_density_derivative(double s) const;

  /// F(s) = ∫₀ˢ dt / H̃(t).
  double coenergy(double s) const;
  double coenergy_derivative(double s) const { return 1.0 / truncated_density_from_momentum(s); }
  /// F''(s) = -H̃'(s)/H̃(s)², nonnegative.
  double coenergy_second_derivative(double s) const;

  CoenergyTerms coenergy_terms(double s) const;

  TruncatedSpeedState truncated_density_from_speed(double q_sq) const;
  EllipticityBounds ellipticity_bounds() const { return bounds_; }

  double pressure(double rho) const;
  double sound_speed_sq(double rho) const;

  /// q²/2 + ∫₁^ρ p'(t)/t dt − 1/2, zero on the Bernoulli surface.
  double bernoulli_residual(double q_sq, double rho) const;

 private:
  // s(ρ) = ρ² q²(ρ) along the Bernoulli relation, and its ρ-derivatives.
  double momentum_of_density(double rho) const;
  double momentum_of_density_d1(double rho) const;
  double momentum_of_density_d2(double rho) const;

  double blend(double t) const;
  double blend_d1(double t) const;
  double coenergy_closed_form(double s, double rho) const;
  double coenergy_blend_segment(double s) const;

  double gamma_;
  double m_tilde_;
  double rho_stag_;
  double s0_;
  double s1_;
  double rho_frozen_;
  std::array<double, 6> blend_coeffs_{};  // in t = (s - s0)/(s1 - s0)
  double coenergy_s0_ = 0.0;
  double coenergy_s1_ = 0.0;
  double speed_sq_s0_ = 0.0;  // q² where the truncation starts
  double speed_sq_s1_ = 0.0;
  EllipticityBounds bounds_{};
};

}  // namespace axiflow
