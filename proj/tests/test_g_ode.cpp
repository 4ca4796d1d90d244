#include <doctest.h>

#include <cmath>
#include <random>

#include "gpde/derivator.hpp"
#include "gpde/g_ode.hpp"
#include "oracles.hpp"

using gpde::Derivator;
using gpde::GFunctionSample;
using gpde::LinearGOde;
using gpde::Segment;

namespace {

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = a + (b - a) * i / n;
  return g;
}

}  // namespace

TEST_CASE("regressive coefficients") {
  auto rc = gpde::regressive_coefficients(3.0, 0.0);
  CHECK(rc.d_tilde == 3.0);
  CHECK(rc.scale == 1.0);
  rc = gpde::regressive_coefficients(3.0, 1.0);
  CHECK(rc.d_tilde == doctest::Approx(-1.5));
  CHECK(rc.scale == doctest::Approx(-0.5));
  CHECK_THROWS_AS(gpde::regressive_coefficients(1.0, 1.0), gpde::RegressivityViolation);
}

TEST_CASE("log coefficient") {
  CHECK(gpde::log_coefficient(2.0, 0.0) == 2.0);
  CHECK(gpde::log_coefficient(3.0, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(gpde::log_coefficient(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(gpde::log_coefficient(2.0, 0.5), gpde::RegressivityViolation);
}

TEST_CASE("jump update") {
  CHECK(gpde::jump_update(2.0, 1.0, 0.0, 1.0) == 0.0);
  CHECK(gpde::jump_update(1.0, 0.0, 5.0, 2.0) == 11.0);
  CHECK(gpde::jump_update(1.0, 3.0, 0.0, 1.0) == -2.0);
}

TEST_CASE("signed exponential") {
  const Derivator id = Derivator::identity(3.0);
  const LinearGOde ode = LinearGOde::constant(2.0, nullptr, 1.0, 0.0, 3.0);
  const gpde::SignedGExponential e(ode, id);
  for (double t : {0.0, 0.5, 1.0, 2.75})
    CHECK(e.value(t) == doctest::Approx(std::exp(2.0 * t)).epsilon(1e-14));
  CHECK(e.sign(3.0) == 1);

  // one unit jump: ratio across it is -1/2 for lambda 3, +2 for lambda 1/2
  const Derivator step = Derivator::step(1.0, 1.0, 2.0);
  const gpde::SignedGExponential e3(LinearGOde::constant(3.0, nullptr, 1.0, 0.0, 2.0), step);
  CHECK(e3.value(1.5) / e3.value(1.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(e3.flips_before(1.5) == 1);
  CHECK(e3.flips_before(1.0) == 0);
  const gpde::SignedGExponential eh(LinearGOde::constant(0.5, nullptr, 1.0, 0.0, 2.0), step);
  CHECK(eh.value(1.5) / eh.value(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eh.flips_before(2.0) == 0);
  // no sign loss: e(t) * 1/e(t) = 1 at every point
  for (double t : {0.25, 1.0, 1.25, 1.875}) CHECK(e3.ratio(t, t) == 1.0);
}

TEST_CASE("classical decay") {
  const Derivator id = Derivator::identity(2.0);
  const LinearGOde ode = LinearGOde::constant(1.0, nullptr, 1.0, 0.0, 2.0);
  const GFunctionSample sol = gpde::solve_linear(ode, id, uniform_grid(0.0, 2.0, 200));
  CHECK(sol.values[100] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(sol.right_limits.empty());
}

TEST_CASE("classical reduction with forcing") {
  const double lambda = 2.0;
  const Derivator id = Derivator::identity(3.0);
  const LinearGOde ode =
      LinearGOde::constant(lambda, [](double t) { return std::sin(t); }, 0.75, 0.0, 3.0);
  const GFunctionSample sol = gpde::solve_linear(ode, id, uniform_grid(0.0, 3.0, 150));
  for (std::size_t i = 0; i < sol.grid.size(); i += 10) {
    const double t = sol.grid[i];
    const double ref = 0.75 * std::exp(-lambda * t) +
                       (lambda * std::sin(t) - std::cos(t) + std::exp(-lambda * t)) /
                           (1.0 + lambda * lambda);
    CHECK(sol.values[i] == doctest::Approx(ref).margin(1e-9));
  }
}

TEST_CASE("dead time freezes the state") {
  // flat from 0 to 1, then affine
  const Derivator d({Segment::constant(0.0, 1.0, 0.0), Segment::affine(1.0, 2.0, 0.0, 1.0)});
  const LinearGOde ode = LinearGOde::constant(4.2, nullptr, 3.0, 0.0, 2.0);
  const GFunctionSample sol = gpde::solve_linear(ode, d, uniform_grid(0.0, 2.0, 40));
  for (std::size_t i = 0; i < sol.grid.size(); ++i)
    if (sol.grid[i] <= 1.0) CHECK(sol.values[i] == 3.0);
  CHECK(sol.values.back() == doctest::Approx(3.0 * std::exp(-4.2)).epsilon(1e-12));
}

TEST_CASE("jump relation at a single jump") {
  const Derivator step = Derivator::step(1.0, 1.0, 2.0);
  const LinearGOde ode = LinearGOde::constant(3.0, nullptr, 1.0, 0.0, 2.0);
  const GFunctionSample sol = gpde::solve_linear(ode, step, {0.0, 0.5, 1.0, 1.5, 2.0});
  REQUIRE(sol.right_limits.size() == 1);
  const auto& r = sol.right_limits[0];
  CHECK(sol.grid[r.index] == 1.0);
  CHECK(r.value == doctest::Approx(-2.0 * sol.values[r.index]).epsilon(1e-15));
  // the value after the jump continues from the right limit
  CHECK(sol.values[3] == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("grid must contain the jumps") {
  const Derivator step = Derivator::step(1.0, 1.0, 2.0);
  const LinearGOde ode = LinearGOde::constant(3.0, nullptr, 1.0, 0.0, 2.0);
  CHECK_THROWS_AS(gpde::solve_linear(ode, step, {0.0, 0.5, 1.5, 2.0}), std::invalid_argument);
}

TEST_CASE("regressivity violation names the jump") {
  const Derivator step = Derivator::step(1.0, 0.5, 2.0);
  const LinearGOde ode = LinearGOde::constant(2.0, nullptr, 1.0, 0.0, 2.0);
  try {
    gpde::solve_linear(ode, step, {0.0, 1.0, 2.0});
    FAIL("expected a regressivity violation");
  } catch (const gpde::RegressivityViolation& rv) {
    CHECK(rv.time == 1.0);
    CHECK(rv.lambda == 2.0);
  }
}

TEST_CASE("closed form agrees with the stepwise oracle") {
  const Derivator g = Derivator::silkworm();
  const std::vector<double> grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.25, 3.5,
                                    3.75, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0};
  auto h = [](double) { return 0.3; };
  const LinearGOde ode = LinearGOde::constant(1.7, h, 2.0, 0.0, 7.0);
  const GFunctionSample sol = gpde::solve_linear(ode, g, grid, 1e-13);
  const std::vector<double> ref = oracles::stepwise_solve(1.7, h, 2.0, g, grid, 400);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(sol.values[i] == doctest::Approx(ref[i]).margin(1e-9));
}

TEST_CASE("randomized closed form vs stepwise") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> lam_dist(0.1, 10.0);
  std::uniform_real_distribution<double> t_dist(0.2, 1.8);
  std::uniform_real_distribution<double> dg_dist(0.1, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    const double lambda = lam_dist(rng);
    double jt = t_dist(rng);
    double dg = dg_dist(rng);
    while (std::abs(1.0 - lambda * dg) < 1e-3) dg = dg_dist(rng);
    const Derivator d({Segment::affine(0.0, jt, 0.0, 1.0, dg),
                       Segment::affine(jt, 2.0, jt + dg, 1.0)});
    auto h = [](double t) { return 0.5 + std::sin(t); };
    const LinearGOde ode = LinearGOde::constant(lambda, h, 1.0, 0.0, 2.0);
    std::vector<double> grid = uniform_grid(0.0, 2.0, 50);
    grid.push_back(jt);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const GFunctionSample sol = gpde::solve_linear(ode, d, grid, 1e-13);
    const std::vector<double> ref = oracles::stepwise_solve(lambda, h, 1.0, d, grid, 400);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(sol.values[i] == doctest::Approx(ref[i]).margin(2e-9));
  }
}

TEST_CASE("residual of the solved sample is small") {
  const Derivator g = Derivator::silkworm();
  std::vector<double> grid;
  for (int i = 0; i <= 4000; ++i) grid.push_back(7.0 * i / 4000.0);
  grid.push_back(4.0);
  grid.push_back(5.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const LinearGOde ode =
      LinearGOde::constant(0.8, [](double t) { return 0.2 * std::cos(t); }, 1.0, 0.0, 7.0);
  const GFunctionSample sol = gpde::solve_linear(ode, g, grid, 1e-13);
  CHECK(gpde::residual(ode, g, sol) < 1e-8);

  // trivially static equation: residual is exactly zero
  const Derivator id = Derivator::identity(1.0);
  const LinearGOde fixed = LinearGOde::constant(0.0, nullptr, 1.5, 0.0, 1.0);
  GFunctionSample flat;
  flat.grid = uniform_grid(0.0, 1.0, 10);
  flat.values.assign(flat.grid.size(), 1.5);
  CHECK(gpde::residual(fixed, id, flat) == 0.0);
}

TEST_CASE("residual flags a perturbed sample") {
  const Derivator id = Derivator::identity(1.0);
  const LinearGOde ode = LinearGOde::constant(1.0, nullptr, 1.0, 0.0, 1.0);
  GFunctionSample sol = gpde::solve_linear(ode, id, uniform_grid(0.0, 1.0, 2000));
  for (double& v : sol.values) v += 0.1;
  CHECK(gpde::residual(ode, id, sol) >= 0.09);
}
