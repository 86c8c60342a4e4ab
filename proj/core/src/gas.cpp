#include "axiflow/gas.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "axiflow/root_find.hpp"

namespace axiflow {
namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(what) + ": argument " + std::to_string(v) +
                            " outside [0, 1]");
  }
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

GasModel::GasModel(double gamma, double m_tilde) : gamma_(gamma), m_tilde_(m_tilde) {
  if (!(gamma > 1.0)) throw std::invalid_argument("gas: gamma must exceed 1");
  if (!(m_tilde > 0.0 && m_tilde < 1.0)) {
    throw std::invalid_argument("gas: m_tilde must lie in (0, 1)");
  }
  rho_stag_ = std::pow(0.5 * (gamma_ + 1.0), 1.0 / (gamma_ - 1.0));
  s0_ = m_tilde_ * m_tilde_;
  const double mid = 0.5 * (m_tilde_ + 1.0);
  s1_ = mid * mid;

  const double rho0 = density_from_momentum(s0_);
  rho_frozen_ = density_from_momentum(s1_);
  const double w = s1_ - s0_;
  const double d1s = momentum_of_density_d1(rho0);
  const double h1 = 1.0 / d1s;
  const double h2 = -momentum_of_density_d2(rho0) / (d1s * d1s * d1s);

  // Quintic Hermite in t ∈ [0, 1]: value/slope/curvature of H at t = 0,
  // (frozen value, 0, 0) at t = 1.
  const double a1 = h1 * w;
  const double a2 = 0.5 * h2 * w * w;
  const double r0 = rho_frozen_ - (rho0 + a1 + a2);
  const double r1 = -(a1 + 2.0 * a2);
  const double r2 = -2.0 * a2;
  blend_coeffs_ = {rho0,
                   a1,
                   a2,
                   10.0 * r0 - 4.0 * r1 + 0.5 * r2,
                   -15.0 * r0 + 7.0 * r1 - r2,
                   6.0 * r0 - 3.0 * r1 + 0.5 * r2};

  const double slope_scale = std::abs(a1);
  for (int i = 0; i <= 2000; ++i) {
    const double t = i / 2000.0;
    if (blend_d1(t) > 1e-12 * slope_scale) {
      throw std::invalid_argument("gas: truncation blend is not monotone for gamma=" +
                                  std::to_string(gamma_) + ", m_tilde=" + std::to_string(m_tilde_));
    }
  }

  coenergy_s0_ = coenergy_closed_form(s0_, rho0);
  coenergy_s1_ = coenergy_s0_ + coenergy_blend_segment(s1_);
  speed_sq_s0_ = s0_ / (rho0 * rho0);
  speed_sq_s1_ = s1_ / (rho_frozen_ * rho_frozen_);

  bounds_.nu = std::numeric_limits<double>::infinity();
  bounds_.lambda = 0.0;
  constexpr int kSamples = 20000;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = s1_ * i / kSamples;
    const double h = truncated_density_from_momentum(s);
    const double hp = truncated_density_derivative(s);
    const double c = h * h / (h - 2.0 * s * hp);
    bounds_.nu = std::min(bounds_.nu, c);
    bounds_.lambda = std::max(bounds_.lambda, c);
  }
}

double GasModel::momentum_of_density(double rho) const {
  return rho * rho * (gamma_ + 1.0 - 2.0 * std::pow(rho, gamma_ - 1.0)) / (gamma_ - 1.0);
}

double GasModel::momentum_of_density_d1(double rho) const {
  return 2.0 * (gamma_ + 1.0) * rho * (1.0 - std::pow(rho, gamma_ - 1.0)) / (gamma_ - 1.0);
}

double GasModel::momentum_of_density_d2(double rho) const {
  return 2.0 * (gamma_ + 1.0) * (1.0 - gamma_ * std::pow(rho, gamma_ - 1.0)) / (gamma_ - 1.0);
}

double GasModel::density_from_speed(double q_sq) const {
  require_unit_interval(q_sq, "density_from_speed");
  return std::pow(0.5 * (gamma_ + 1.0 - (gamma_ - 1.0) * q_sq), 1.0 / (gamma_ - 1.0));
}

double GasModel::momentum_from_speed(double q_sq) const {
  require_unit_interval(q_sq, "momentum_from_speed");
  // extended precision so that s is close to correctly rounded; H amplifies
  // errors in s by 1/(1 − q²) near the sonic point
  const long double g = gamma_;
  const long double rho = std::pow(0.5L * (g + 1.0L - (g - 1.0L) * q_sq), 1.0L / (g - 1.0L));
  return static_cast<double>(rho * rho * q_sq);
}

double GasModel::density_from_momentum(double s) const {
  require_unit_interval(s, "density_from_momentum");
  if (s == 0.0) return rho_stag_;
  if (s == 1.0) return 1.0;
  // ρ − 1 behaves like √(1 − s) near the sonic point.
  const double guess = 1.0 + (rho_stag_ - 1.0) * std::sqrt(1.0 - s);
  const double rho = newton_bisect(
      [&](double r) { return std::pair{momentum_of_density(r) - s, momentum_of_density_d1(r)}; }, 1.0,
      rho_stag_, guess, /*decreasing=*/true);
  if (s < 0.9) return rho;
  // the residual loses digits to cancellation as s → 1; polish in long double
  const long double g = gamma_;
  long double r = rho;
  for (int k = 0; k < 2; ++k) {
    const long double p = std::pow(r, g - 1.0L);
    const long double d = 2.0L * (g + 1.0L) * r * (1.0L - p) / (g - 1.0L);
    if (d == 0.0L) break;
    r -= (r * r * (g + 1.0L - 2.0L * p) / (g - 1.0L) - s) / d;
  }
  return static_cast<double>(r);
}

double GasModel::density_from_momentum_derivative(double s) const {
  if (s == 1.0) return -std::numeric_limits<double>::infinity();
  return 1.0 / momentum_of_density_d1(density_from_momentum(s));
}

double GasModel::speed_from_momentum(double s) const {
  const double rho = density_from_momentum(s);
  return s / (rho * rho);
}

double GasModel::blend(double t) const {
  const auto& c = blend_coeffs_;
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
}

double GasModel::blend_d1(double t) const {
  const auto& c = blend_coeffs_;
  return c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
}

double GasModel::truncated_density_from_momentum(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("truncated_density_from_momentum: negative momentum");
  if (s <= s0_) return density_from_momentum(s);
  if (s >= s1_) return rho_frozen_;
  return blend((s - s0_) / (s1_ - s0_));
}

double GasModel::truncated_density_derivative(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("truncated_density_derivative: negative momentum");
  if (s <= s0_) return density_from_momentum_derivative(s);
  if (s >= s1_) return 0.0;
  return blend_d1((s - s0_) / (s1_ - s0_)) / (s1_ - s0_);
}

double GasModel::coenergy_second_derivative(double s) const {
  const double h = truncated_density_from_momentum(s);
  return -truncated_density_derivative(s) / (h * h);
}

double GasModel::coenergy_closed_form(double s, double rho) const {
  // With ρ = H(s) and q² = s/ρ²:  F = 2ρq² − 2(p(ρ_stag) − p(ρ)).  The
  // pressure difference is formed through expm1/log1p so that F keeps full
  // relative accuracy as s → 0.
  if (s == 0.0) return 0.0;
  const double w0 = 0.5 * (gamma_ + 1.0);
  const double k = gamma_ / (gamma_ - 1.0);
  const double rel = -(gamma_ - 1.0) * s / (2.0 * rho * rho * w0);
  return 2.0 * s / rho + (2.0 / gamma_) * std::pow(w0, k) * std::expm1(k * std::log1p(rel));
}

double GasModel::coenergy_blend_segment(double s) const {
  const double w = s1_ - s0_;
  return adaptive_simpson([&](double x) { return 1.0 / blend((x - s0_) / w); }, s0_, s, 1e-13);
}

double GasModel::coenergy(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("coenergy: negative momentum");
  if (s <= s0_) return coenergy_closed_form(s, density_from_momentum(s));
  if (s < s1_) return coenergy_s0_ + coenergy_blend_segment(s);
  return coenergy_s1_ + (s - s1_) / rho_frozen_;
}

CoenergyTerms GasModel::coenergy_terms(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("coenergy: negative momentum");
  if (s <= s0_) {
    const double rho = density_from_momentum(s);
    const double hp = (s == 1.0) ? 0.0 : 1.0 / momentum_of_density_d1(rho);
    return {coenergy_closed_form(s, rho), 1.0 / rho, -hp / (rho * rho)};
  }
  if (s >= s1_) return {coenergy_s1_ + (s - s1_) / rho_frozen_, 1.0 / rho_frozen_, 0.0};
  const double w = s1_ - s0_;
  const double t = (s - s0_) / w;
  const double h = blend(t);
  return {coenergy_s0_ + coenergy_blend_segment(s), 1.0 / h, -blend_d1(t) / (w * h * h)};
}

TruncatedSpeedState GasModel::truncated_density_from_speed(double q_sq) const {
  if (!(q_sq >= 0.0)) throw std::domain_error("truncated_density_from_speed: negative q_sq");
  if (q_sq <= speed_sq_s0_) {
    const double rho = density_from_speed(q_sq);
    const double s = rho * rho * q_sq;
    const double hp = 1.0 / momentum_of_density_d1(rho);
    return {rho, s, rho * rho / (rho - 2.0 * s * hp)};
  }
  if (q_sq >= speed_sq_s1_) {
    return {rho_frozen_, q_sq * rho_frozen_ * rho_frozen_, rho_frozen_};
  }
  const double s = newton_bisect(
      [&](double x) {
        const double h = truncated_density_from_momentum(x);
        const double hp = truncated_density_derivative(x);
        return std::pair{x / (h * h) - q_sq, (h - 2.0 * x * hp) / (h * h * h)};
      },
      s0_, s1_, 0.5 * (s0_ + s1_), /*decreasing=*/false, 1e-13);
  const double h = truncated_density_from_momentum(s);
  const double hp = truncated_density_derivative(s);
  return {h, s, h * h / (h - 2.0 * s * hp)};
}

double GasModel::pressure(double rho) const {
  if (!(rho > 0.0)) throw std::domain_error("pressure: density must be positive");
  return std::pow(rho, gamma_) / gamma_;
}

double GasModel::sound_speed_sq(double rho) const {
  if (!(rho > 0.0)) throw std::domain_error("sound_speed_sq: density must be positive");
  return std::pow(rho, gamma_ - 1.0);
}

double GasModel::bernoulli_residual(double q_sq, double rho) const {
  return 0.5 * q_sq + (std::pow(rho, gamma_ - 1.0) - 1.0) / (gamma_ - 1.0) - 0.5;
}

}  // namespace axiflow
