#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "axiflow/gas.hpp"
#include "axiflow/root_find.hpp"

using axiflow::GasModel;

TEST_CASE("density and momentum against high-precision values") {
  const GasModel gas(1.4);
  CHECK(gas.density_from_speed(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gas.density_from_speed(0.0) == doctest::Approx(1.577440965614878).epsilon(1e-14));
  CHECK(gas.density_from_speed(0.25) == doctest::Approx(1.418223250232487).epsilon(1e-14));
  CHECK(gas.momentum_from_speed(0.0) == 0.0);
  CHECK(gas.momentum_from_speed(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gas.momentum_from_speed(0.25) == doctest::Approx(0.502839296875).epsilon(1e-14));
  CHECK(gas.speed_from_momentum(0.502839296875) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(gas.speed_from_momentum(0.0) == 0.0);
  CHECK(gas.speed_from_momentum(1.0) == 1.0);
  CHECK(gas.speed_from_momentum(0.5) == doctest::Approx(0.2481995383527063).epsilon(1e-12));
  CHECK(gas.density_from_momentum(1.0) == 1.0);
  CHECK(gas.density_from_momentum(0.0) == doctest::Approx(1.577440965614878).epsilon(1e-15));
  CHECK(gas.density_from_momentum(0.1) == doctest::Approx(1.550233671052889).epsilon(1e-13));
  CHECK(gas.density_from_momentum(0.9) == doctest::Approx(1.195626053408544).epsilon(1e-13));
  CHECK(gas.density_from_momentum(0.502839296875) == doctest::Approx(1.418223250232487).epsilon(1e-13));
}

TEST_CASE("stagnation density for several gamma") {
  CHECK(GasModel(1.2).stagnation_density() == doctest::Approx(1.61051).epsilon(1e-14));
  CHECK(GasModel(5.0 / 3.0).stagnation_density() == doctest::Approx(1.539600717839002).epsilon(1e-14));
  const GasModel air(1.4);
  CHECK(air.sound_speed_sq(air.stagnation_density()) == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("domain errors outside the subsonic range") {
  const GasModel gas;
  CHECK_THROWS_AS(gas.density_from_speed(-0.1), std::domain_error);
  CHECK_THROWS_AS(gas.density_from_speed(1.1), std::domain_error);
  CHECK_THROWS_AS(gas.momentum_from_speed(1.5), std::domain_error);
  CHECK_THROWS_AS(gas.speed_from_momentum(-1e-3), std::domain_error);
  CHECK_THROWS_AS(gas.density_from_momentum(1.0001), std::domain_error);
  CHECK_THROWS_AS(gas.pressure(0.0), std::domain_error);
  CHECK_THROWS_AS(gas.sound_speed_sq(-1.0), std::domain_error);
  CHECK_THROWS_AS(GasModel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(1.4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(1.4, 0.0), std::invalid_argument);
}

TEST_CASE("root finder reports its bracket") {
  try {
    axiflow::newton_bisect([](double x) { return std::pair{x * x * x - 0.3, 3.0 * x * x}; }, 0.0, 1.0,
                           0.9, false, 1e-15, 2);
    FAIL("expected RootFindError");
  } catch (const axiflow::RootFindError& e) {
    CHECK(e.lo() >= 0.0);
    CHECK(e.hi() <= 1.0);
    CHECK(e.lo() < e.hi());
  }
  const double root = axiflow::newton_bisect(
      [](double x) { return std::pair{x * x * x - 0.3, 3.0 * x * x}; }, 0.0, 1.0, 0.9, false);
  CHECK(root == doctest::Approx(std::cbrt(0.3)).epsilon(1e-15));
}

TEST_CASE("truncated density") {
  const GasModel gas(1.4, 0.98);
  CHECK(gas.truncation_start() == doctest::Approx(0.9604));
  CHECK(gas.truncation_end() == doctest::Approx(0.9801));
  CHECK(gas.truncated_density_from_momentum(0.5) == gas.density_from_momentum(0.5));
  CHECK(gas.truncated_density_from_momentum(2.0) == doctest::Approx(gas.density_from_momentum(0.9801)).epsilon(1e-14));
  double prev = gas.truncated_density_from_momentum(0.9604);
  for (int i = 1; i <= 1000; ++i) {
    const double h = gas.truncated_density_from_momentum(0.9604 + 0.0197 * i / 1000.0);
    CHECK(h <= prev);
    prev = h;
  }
}

TEST_CASE("truncated density is C2 across both junctions") {
  const GasModel gas(1.4, 0.98);
  for (double s : {gas.truncation_start(), gas.truncation_end()}) {
    const double e = 1e-9;
    CHECK(gas.truncated_density_from_momentum(s - e) == doctest::Approx(gas.truncated_density_from_momentum(s + e)).epsilon(1e-8));
    CHECK(gas.truncated_density_derivative(s - e) == doctest::Approx(gas.truncated_density_derivative(s + e)).epsilon(1e-5));
    // one-sided differences with Richardson extrapolation; H''' jumps at both junctions
    auto left = [&](double h) {
      return (gas.truncated_density_derivative(s) - gas.truncated_density_derivative(s - h)) / h;
    };
    auto right = [&](double h) {
      return (gas.truncated_density_derivative(s + h) - gas.truncated_density_derivative(s)) / h;
    };
    const double h = 1e-6;
    const double d2l = 2 * left(h / 2) - left(h);
    const double d2r = 2 * right(h / 2) - right(h);
    CHECK(std::abs(d2l - d2r) <= 1e-3 * (1.0 + std::abs(d2l)));
  }
}

TEST_CASE("blend stays monotone across gamma and threshold") {
  for (double g : {1.2, 1.4, 5.0 / 3.0}) {
    for (double mt : {0.5, 0.9, 0.98}) {
      const GasModel gas(g, mt);
      const auto b = gas.ellipticity_bounds();
      CHECK(b.nu > 0.0);
      CHECK(b.lambda >= b.nu);
    }
  }
}

TEST_CASE("coenergy") {
  const GasModel gas;
  CHECK(gas.coenergy(0.0) == 0.0);
  CHECK(gas.coenergy(0.5) == doctest::Approx(0.3328640834096873).epsilon(1e-13));
  CHECK(gas.coenergy(0.9) == doctest::Approx(0.6358779516701853).epsilon(1e-13));
  const double h = 1e-6;
  const double fd = (gas.coenergy(0.3 + h) - gas.coenergy(0.3 - h)) / (2 * h);
  CHECK(fd == doctest::Approx(gas.coenergy_derivative(0.3)).epsilon(1e-8));
  const double s = 1e-6;
  CHECK(gas.coenergy(s) == doctest::Approx(s / gas.stagnation_density()).epsilon(1e-6));
}

TEST_CASE("coenergy derivative identity F' H = 1 over the truncated range") {
  const GasModel gas;
  for (int i = 1; i < 400; ++i) {
    const double s = 1.2 * i / 400.0;
    const double h = 1e-6;
    const double fd = (gas.coenergy(s + h) - gas.coenergy(s - h)) / (2 * h);
    CHECK(fd * gas.truncated_density_from_momentum(s) == doctest::Approx(1.0).epsilon(1e-8));
    const auto t = gas.coenergy_terms(s);
    CHECK(t.value == doctest::Approx(gas.coenergy(s)).epsilon(1e-14));
    CHECK(t.d2 == doctest::Approx(gas.coenergy_second_derivative(s)).epsilon(1e-12));
    CHECK(t.d2 >= 0.0);
  }
}

TEST_CASE("truncated density from speed") {
  const GasModel gas;
  const double q0 = gas.speed_from_momentum(gas.truncation_start());
  for (int i = 0; i <= 100; ++i) {
    const double q2 = q0 * i / 100.0;
    CHECK(gas.truncated_density_from_speed(q2).density == doctest::Approx(gas.density_from_speed(q2)).epsilon(1e-12));
  }
  CHECK(gas.truncated_density_from_speed(0.0).coefficient == doctest::Approx(gas.stagnation_density()).epsilon(1e-14));
  const auto b = gas.ellipticity_bounds();
  CHECK(b.nu == doctest::Approx(0.187049).epsilon(1e-5));
  CHECK(b.lambda == doctest::Approx(1.57744).epsilon(1e-5));
  for (int i = 0; i <= 10000; ++i) {
    const auto st = gas.truncated_density_from_speed(4.0 * i / 10000.0);
    CHECK(st.coefficient > 0.0);
    CHECK(st.coefficient >= b.nu * (1 - 1e-3));
    CHECK(st.coefficient <= b.lambda * (1 + 1e-9));
    CHECK(st.momentum / (st.density * st.density) == doctest::Approx(4.0 * i / 10000.0).epsilon(1e-10));
  }
}

TEST_CASE("pressure law") {
  const GasModel gas;
  CHECK(gas.pressure(1.0) == doctest::Approx(1.0 / 1.4));
  CHECK(gas.sound_speed_sq(1.0) == 1.0);
  const double h = 1e-4;
  for (int i = 1; i < 100; ++i) {
    const double rho = 0.05 + 2.0 * i / 100.0;
    CHECK(gas.pressure(rho + h) - 2 * gas.pressure(rho) + gas.pressure(rho - h) >= 0.0);
  }
}

TEST_CASE("monotonicity and round trips on dense samples") {
  for (double g : {1.2, 1.4, 5.0 / 3.0}) {
    const GasModel gas(g);
    double prev_g = gas.density_from_speed(0.0);
    double prev_h = gas.density_from_momentum(0.0);
    double prev_flux = 0.0;
    for (int i = 1; i <= 10000; ++i) {
      const double u = i / 10000.0;
      const double rg = gas.density_from_speed(u);
      const double rh = gas.density_from_momentum(u);
      CHECK(rg < prev_g);
      CHECK(rh < prev_h);
      prev_g = rg;
      prev_h = rh;
      const double flux = std::sqrt(gas.momentum_from_speed(u));
      CHECK(flux > prev_flux);
      prev_flux = flux;
      CHECK(gas.speed_from_momentum(gas.momentum_from_speed(u)) == doctest::Approx(u).epsilon(1e-10));
      CHECK(std::abs(gas.bernoulli_residual(u, rg)) <= 1e-10);
    }
  }
}

TEST_CASE("inverse stays accurate next to the sonic point") {
  for (double g : {1.2, 1.4, 5.0 / 3.0}) {
    const GasModel gas(g);
    for (int i = 9900; i <= 10000; ++i) {
      const double q2 = i / 10000.0;
      const double rho = gas.density_from_speed(q2);
      CHECK(std::abs(gas.density_from_momentum(gas.momentum_from_speed(q2)) - rho) <= 1e-12 * rho);
    }
  }
}
