#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "gpde/derivator.hpp"

namespace gpde {

/// x'_g(t) + lambda(t) x(t) = forcing(t) on [t0, t1], x(t0) = x0.
///
/// A null forcing means 0. When the coefficient is constant, prefer
/// `constant(...)`: the exponential bookkeeping then avoids quadrature
/// entirely.
struct LinearGOde {
  std::function<double(double)> lambda;
  std::function<double(double)> forcing;
  double x0 = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  bool lambda_is_constant = false;
  double lambda_value = 0.0;

  static LinearGOde constant(double lambda, std::function<double(double)> forcing, double x0,
                             double t0, double t1);
  static LinearGOde varying(std::function<double(double)> lambda,
                            std::function<double(double)> forcing, double x0, double t0,
                            double t1);
  double lambda_at(double t) const { return lambda_is_constant ? lambda_value : lambda(t); }
  double forcing_at(double t) const { return forcing ? forcing(t) : 0.0; }
};

/// Thrown when lambda(t) * delta_g(t) = 1 at a jump: the equation cannot
/// be transported through that jump.
struct RegressivityViolation : std::runtime_error {
  RegressivityViolation(double time, double lambda, int mode = -1);
  double time;
  double lambda;
  int mode;  // filled by the spectral layer, -1 otherwise
};

/// The jump-adjusted coefficient pair: d_tilde = lambda / (1 - lambda*dg)
/// and the forcing scale 1 / (1 - lambda*dg).
struct RegressiveCoefficients {
  double d_tilde;
  double scale;
};
RegressiveCoefficients regressive_coefficients(double lambda, double delta_g);

/// The exponent density of the signed g-exponential: lambda off the jump
/// set, -ln|1 - lambda*dg| / dg at a jump of size dg.
double log_coefficient(double lambda, double delta_g);

/// State transport across a single jump: x(1 - lambda*dg) + f*dg.
inline double jump_update(double x, double lambda, double f, double delta_g) {
  return x * (1.0 - lambda * delta_g) + f * delta_g;
}

/// Signed exponential for a linear g-ODE on [t0, t1], normalised to
/// e(t0) = 1. Kept as log-magnitude plus sign so that quotients
/// e(s)/e(t) stay representable when the plain values would overflow.
/// The sign flips once after each jump where 1 - lambda*dg < 0.
class SignedGExponential {
 public:
  SignedGExponential(const LinearGOde& ode, const Derivator& d);

  double log_magnitude(double t) const;
  int sign(double t) const;
  int flips_before(double t) const;
  /// e(t) itself; may overflow for large exponents, use ratio() instead.
  double value(double t) const;
  /// e(s) / e(t), formed in log space.
  double ratio(double s, double t) const;
  const JumpList& jumps() const { return jumps_; }

 private:
  double smooth_log(double t) const;  // integral of lambda over [t0,t) minus jumps

  const Derivator* d_;
  LinearGOde ode_;
  JumpList jumps_;
  std::vector<double> log_prefix_;  // cumulative jump contributions before jump i
  std::vector<int> flip_prefix_;
};

/// Solution sample on a grid: left values everywhere, right limits stored
/// at the grid points that carry a jump of g.
struct GFunctionSample {
  std::vector<double> grid;
  std::vector<double> values;
  struct RightLimit {
    std::size_t index;
    double value;
  };
  std::vector<RightLimit> right_limits;

  bool has_right(std::size_t i) const;
  double right(std::size_t i) const;  // right limit, or the left value off jumps
};

/// Closed-form solve of a linear g-ODE on a grid. The grid must start at
/// ode.t0 and contain every jump time of the derivator in [t0, t1); right
/// limits at those jumps satisfy the jump relation exactly by
/// construction.
GFunctionSample solve_linear(const LinearGOde& ode, const Derivator& d,
                             const std::vector<double>& grid, double tol = 1e-12);

/// Sup over the grid of the defect of the integral form,
/// |x(t) - x0 - integral_[t0,t) (forcing - lambda x)|, with x interpolated
/// linearly in g between samples (constant across dead time).
double residual(const LinearGOde& ode, const Derivator& d, const GFunctionSample& sol,
                double tol = 1e-10);

}  // namespace gpde
