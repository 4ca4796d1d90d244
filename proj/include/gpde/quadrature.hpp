#pragma once

#include <functional>
#include <vector>

namespace gpde {

/// Adaptive Gauss-Kronrod (7-15) quadrature of f over [a, b] to absolute
/// tolerance `tol`. All nodes are interior, so integrable endpoint
/// singularities of the integrand are handled by bisection alone.
/// `subdivide` lists interior points where the integrand loses smoothness;
/// the interval is pre-split there. Throws std::runtime_error on a
/// non-finite integrand value and std::invalid_argument for tol <= 0.
double integrate_classical(const std::function<double(double)>& f, double a, double b, double tol,
                           const std::vector<double>& subdivide = {});

/// Same driver for vector-valued integrands writing into `out` (fixed
/// dimension); the error estimate is the max over components.
void integrate_classical_vec(const std::function<void(double, std::vector<double>&)>& f,
                             std::size_t dim, double a, double b, double tol,
                             std::vector<double>& out, const std::vector<double>& subdivide = {});

}  // namespace gpde
