#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace axiflow {

/// Raised when a bracketed scalar root search does not converge.
class RootFindError : public std::runtime_error {
 public:
  RootFindError(const std::string& what, double lo, double hi)
      : std::runtime_error(format(what, lo, hi)), lo_(lo), hi_(hi) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  static std::string format(const std::string& what, double lo, double hi) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (bracket [" << lo << ", " << hi << "])";
    return os.str();
  }

  double lo_;
  double hi_;
};

/// Safeguarded Newton iteration on a bracket [lo, hi] that is known to
/// contain a sign change. `fn(x)` returns {f(x), f'(x)}. Steps that leave the
/// current bracket, or fail to shrink it fast enough, fall back to bisection.
/// `decreasing` states the sign pattern: f(lo) >= 0 >= f(hi) when true.
template <typename Fn>
double newton_bisect(Fn&& fn, double lo, double hi, double x0, bool decreasing,
                     double xtol = 1e-15, int max_iter = 200) {
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  double step_old = hi - lo;
  double step = step_old;
  for (int it = 0; it < max_iter; ++it) {
    const auto [f, df] = fn(x);
    if (f == 0.0) return x;
    const bool root_right = decreasing ? (f > 0.0) : (f < 0.0);
    if (root_right) {
      lo = x;
    } else {
      hi = x;
    }
    const double newton = (df != 0.0) ? x - f / df : lo - 1.0;
    const bool outside = !(newton > lo && newton < hi);
    const bool slow = std::abs(2.0 * f) > std::abs(step_old * df);
    step_old = step;
    if (outside || slow) {
      step = 0.5 * (hi - lo);
      x = lo + step;
    } else {
      step = x - newton;
      x = newton;
    }
    const double scale = std::max(1.0, std::abs(x));
    if (std::abs(step) <= xtol * scale || hi - lo <= xtol * scale) return x;
  }
  throw RootFindError("newton_bisect: no convergence", lo, hi);
}

}  // namespace axiflow
