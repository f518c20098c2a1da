#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "temper/rng.hpp"
#include "temper/selection.hpp"

using namespace temper;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Test-side elpd oracle for the normal location model: closed-form deleted
// posterior and a direct normal log-pdf.
double elpd_oracle_normal(const NormalLocationSpec& spec,
                          const std::vector<double>& y, double tau) {
  const std::size_t n = y.size();
  const double sig2 = spec.sigma * spec.sigma;
  const double prec0 = spec.has_flat_prior() ? 0.0 : 1.0 / spec.prior_var;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double rest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rest += y[j];
    }
    const double m = static_cast<double>(n - 1);
    const double var_i = 1.0 / (m * tau / sig2 + prec0);
    const double mean_i =
        var_i * (prec0 * spec.prior_mean + m * tau * (rest / m) / sig2);
    const double pred_var = sig2 + var_i;
    const double r = y[i] - mean_i;
    sum += -0.5 * std::log(2.0 * std::numbers::pi * pred_var) -
           r * r / (2.0 * pred_var);
  }
  return sum / static_cast<double>(n);
}

// Test-side elpd oracle for the beta-Bernoulli model via the success-mass
// ratio rather than the log-gamma route.
double elpd_oracle_bernoulli(const BetaBernoulliSpec& spec,
                             const std::vector<double>& y, double tau) {
  const double x = std::accumulate(y.begin(), y.end(), 0.0);
  double sum = 0.0;
  for (double yi : y) {
    const double a = tau * (x - yi) + spec.prior_a;
    const double b = tau * (static_cast<double>(y.size()) - 1.0 - (x - yi)) +
                     spec.prior_b;
    sum += yi == 1.0 ? std::log(a / (a + b)) : std::log(b / (a + b));
  }
  return sum / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("temperature grids") {
  const TempGrid grid = TempGrid::default_grid();
  CHECK(grid.size() == 61);
  CHECK(grid[0] == 0.01);
  CHECK(grid[60] == 100.0);
  double nearest = 1e9;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    nearest = std::min(nearest, std::fabs(grid[i] - 1.0));
  }
  CHECK(nearest < 1e-13);

  CHECK_THROWS_AS(TempGrid({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TempGrid({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TempGrid({-1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TempGrid::log_spaced(0.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("temperature schedules") {
  CHECK(schedule_tau(make_coarsened_schedule(1.0), 99) ==
        doctest::Approx(0.01).epsilon(1e-14));
  CHECK(schedule_tau(make_fixed_schedule(2.5), 12345) == 2.5);
  CHECK(schedule_tau(make_power_decay_schedule(1.0, 0.5), 100) ==
        doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(make_power_decay_schedule(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_coarsened_schedule(0.0), std::invalid_argument);
  CHECK_THROWS_AS(schedule_tau(make_fixed_schedule(1.0), 0),
                  std::invalid_argument);
}

TEST_CASE("elpd_loo hand value for the beta-Bernoulli model") {
  const ModelSpec spec = BetaBernoulliSpec(1.0, 1.0);
  const Dataset data = UnivariateData({1.0, 0.0});
  CHECK(elpd_loo(spec, data, 1.0) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-13));
  CHECK(elpd_loo(spec, data, 1.0) == doctest::Approx(-1.0986123).epsilon(1e-6));
}

TEST_CASE("elpd_loo equals the per-fold loo predictive composition bit for bit") {
  RandomSource rng(51);
  std::vector<double> y(12);
  for (double& v : y) v = rng.normal();
  const NormalLocationSpec spec(1.0, 0.0, 2.0);
  const UnivariateData data(y);
  const double tau = 0.37;
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Normal pred = loo_predictive_normal_location(spec, data, tau, i);
    sum += log_density(DensityKernel(pred), y[i]);
  }
  CHECK(elpd_loo(ModelSpec(spec), Dataset(data), tau) ==
        sum / static_cast<double>(y.size()));
}

TEST_CASE("elpd_loo matches independent closed-form oracles") {
  RandomSource rng(52);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.next_u64() % 18;
    const double tau = std::exp(-3.0 + 6.0 * rng.uniform());

    std::vector<double> y(n);
    for (double& v : y) v = rng.normal();
    const NormalLocationSpec nspec(0.9, 0.2, 1.5);
    const double got = elpd_loo(ModelSpec(nspec), Dataset(UnivariateData(y)), tau);
    CHECK(got == doctest::Approx(elpd_oracle_normal(nspec, y, tau)).epsilon(1e-12));

    std::vector<double> b(n);
    for (double& v : b) v = rng.bernoulli(0.35) ? 1.0 : 0.0;
    const BetaBernoulliSpec bspec(1.0, 2.0);
    const double got_b =
        elpd_loo(ModelSpec(bspec), Dataset(UnivariateData(b)), tau);
    CHECK(got_b ==
          doctest::Approx(elpd_oracle_bernoulli(bspec, b, tau)).epsilon(1e-12));
  }
}

TEST_CASE("elpd_loo is invariant under data permutation") {
  const ModelSpec spec = BetaBernoulliSpec(2.0, 2.0);
  std::vector<double> y{1, 1, 0, 1, 0, 0, 1, 0};
  const double base = elpd_loo(spec, Dataset(UnivariateData(y)), 0.8);
  CHECK(std::isfinite(base));
  std::reverse(y.begin(), y.end());
  CHECK(elpd_loo(spec, Dataset(UnivariateData(y)), 0.8) ==
        doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("elpd_loo preconditions") {
  const ModelSpec spec = NormalLocationSpec::flat(1.0);
  CHECK_THROWS_AS(elpd_loo(spec, Dataset(UnivariateData({1.0})), 1.0),
                  std::invalid_argument);

  Eigen::MatrixXd X = Eigen::MatrixXd::Random(3, 5);
  Eigen::VectorXd y = Eigen::VectorXd::Random(3);
  const ModelSpec reg = LinRegSpec(1.0, Eigen::MatrixXd::Identity(5, 5));
  CHECK_THROWS_AS(elpd_loo(reg, Dataset(RegressionData(X, y)), 1.0),
                  std::invalid_argument);
}

TEST_CASE("select_from_scores argmax semantics") {
  const TempGrid grid = TempGrid::log_spaced(0.01, 100.0, 5);

  SUBCASE("strictly increasing scores select the upper boundary") {
    const std::vector<double> scores{-3, -2, -1, -0.5, 0.0};
    const TauSelection sel = select_from_scores(grid, scores);
    CHECK(sel.tau_star == grid[4]);
    CHECK(sel.at_upper_boundary);
    CHECK(!sel.at_lower_boundary);
  }
  SUBCASE("constant scores tie-break to the smallest temperature") {
    const std::vector<double> scores(5, -1.25);
    const TauSelection sel = select_from_scores(grid, scores);
    CHECK(sel.tau_star == grid[0]);
    CHECK(sel.at_lower_boundary);
    CHECK(!sel.at_upper_boundary);
  }
  SUBCASE("interior argmax sets no flags") {
    const std::vector<double> scores{-3, -1, -0.5, -1, -3};
    const TauSelection sel = select_from_scores(grid, scores);
    CHECK(sel.tau_star == grid[2]);
    CHECK(!sel.at_lower_boundary);
    CHECK(!sel.at_upper_boundary);
  }
  SUBCASE("-infinity loses to any finite score") {
    const std::vector<double> scores{kNegInf, kNegInf, -50.0, kNegInf, kNegInf};
    const TauSelection sel = select_from_scores(grid, scores);
    CHECK(sel.tau_star == grid[2]);
    CHECK(sel.elpd_at_star == -50.0);
  }
  SUBCASE("all -infinity reports the smallest point with clear flags") {
    const std::vector<double> scores(5, kNegInf);
    const TauSelection sel = select_from_scores(grid, scores);
    CHECK(sel.tau_star == grid[0]);
    CHECK(sel.elpd_at_star == kNegInf);
    CHECK(!sel.at_lower_boundary);
    CHECK(!sel.at_upper_boundary);
  }
}

TEST_CASE("select_tau_cv boundary behaviour on engineered data") {
  const TempGrid grid = TempGrid::default_grid();

  SUBCASE("decreasing elpd curve hits the lower boundary") {
    // fold scores are log(1/(tau+2)), strictly decreasing in tau
    const ModelSpec spec = BetaBernoulliSpec(1.0, 1.0);
    const TauSelection sel =
        select_tau_cv(spec, Dataset(UnivariateData({1.0, 0.0})), grid);
    CHECK(sel.tau_star == grid[0]);
    CHECK(sel.at_lower_boundary);
  }
  SUBCASE("tightly clustered data pushes the selection to the upper boundary") {
    const ModelSpec spec = NormalLocationSpec::flat(1.0);
    const Dataset data =
        UnivariateData({0.0, 0.001, -0.001, 0.0005, -0.0005});
    const TauSelection sel = select_tau_cv(spec, data, grid);
    CHECK(sel.tau_star == grid[grid.size() - 1]);
    CHECK(sel.at_upper_boundary);
  }
}

TEST_CASE("select_tau_cv is stable under grid refinement") {
  RandomSource rng(55);
  std::vector<double> y(50);
  for (double& v : y) v = rng.normal();
  const ModelSpec spec = NormalLocationSpec(1.0, 0.0, 1.0);
  const Dataset data = UnivariateData(y);
  const TauSelection coarse = select_tau_cv(spec, data, TempGrid::default_grid());
  const TauSelection fine =
      select_tau_cv(spec, data, TempGrid::log_spaced(0.01, 100.0, 121));
  const double cell = 4.0 / 60.0;  // coarse log10 spacing
  CHECK(std::fabs(std::log10(fine.tau_star) - std::log10(coarse.tau_star)) <=
        cell + 1e-12);
}

TEST_CASE("analytic risk reference values") {
  CHECK(risk_normal(1, 1.0, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(risk_normal_flat(1, 1.0) ==
        doctest::Approx(0.3465736).epsilon(1e-6));
  CHECK(risk_normal_flat(100, 1.0) ==
        doctest::Approx(0.0049752).epsilon(1e-4));
  CHECK(risk_normal_flat(100, 1.0) ==
        doctest::Approx(0.5 * std::log1p(0.01)).epsilon(1e-15));
  CHECK(risk_normal_flat(1000, 0.01) ==
        doctest::Approx(0.0026551).epsilon(1e-4));
  // large tau limit: approximately 1/(2n)
  CHECK(risk_normal_flat(100, 1e8) == doctest::Approx(0.005).epsilon(1e-3));
  CHECK_THROWS_AS(risk_normal_flat(100, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(risk_normal(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("risk_normal with infinite prior variance reduces to the flat formula") {
  for (long n : {1L, 10L, 100L, 100000L}) {
    for (double tau : {0.01, 0.3, 1.0, 7.0, 100.0}) {
      const double a = risk_normal(n, tau, std::numeric_limits<double>::infinity());
      const double b = risk_normal_flat(n, tau);
      CHECK(a == doctest::Approx(b).epsilon(1e-15));
    }
  }
}

TEST_CASE("risk derivative sign structure and finite differences") {
  CHECK(risk_derivative_normal_flat(10, 1.0) == 0.0);
  CHECK(risk_derivative_normal_flat(10, 0.5) < 0.0);
  CHECK(risk_derivative_normal_flat(10, 2.0) > 0.0);

  for (long n : {10L, 100L}) {
    for (double tau : {0.1, 1.0, 10.0}) {
      const double h = 1e-6;
      const double fd =
          (risk_normal_flat(n, tau + h) - risk_normal_flat(n, tau - h)) /
          (2.0 * h);
      const double exact = risk_derivative_normal_flat(n, tau);
      if (tau == 1.0) {
        CHECK(std::fabs(fd) < 1e-8);
      } else {
        CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("risk is decreasing below tau=1 and increasing above") {
  for (long n : {5L, 50L, 500L}) {
    double prev = risk_normal_flat(n, 1e-3);
    for (int i = 1; i <= 100; ++i) {
      const double tau = std::exp(std::log(1e-3) + i * (0.0 - std::log(1e-3)) / 100.0);
      const double r = risk_normal_flat(n, tau);
      CHECK(r < prev);
      prev = r;
    }
    prev = risk_normal_flat(n, 1.0);
    for (int i = 1; i <= 100; ++i) {
      const double tau = std::exp(i * std::log(1e3) / 100.0);
      const double r = risk_normal_flat(n, tau);
      CHECK(r > prev);
      prev = r;
    }
  }
}

TEST_CASE("coarsened schedules freeze the risk at an alpha-dependent level") {
  for (double alpha : {0.5, 5.0}) {
    const TempSchedule sched = make_coarsened_schedule(alpha);
    const double limit = 0.5 * std::log1p(1.0 / alpha) +
                         1.0 / (2.0 * (1.0 + 1.0 / alpha)) - 0.5;
    const double at_big_n = risk_normal_flat(1000000, schedule_tau(sched, 1000000));
    CHECK(std::fabs(at_big_n - limit) < 1e-4);
  }
}

TEST_CASE("power-decay schedules drive the risk to zero") {
  const TempSchedule sched = make_power_decay_schedule(1.0, 0.5);
  double prev = 1e9;
  for (long n : {100L, 1000L, 10000L, 100000L}) {
    const double r = risk_normal_flat(n, schedule_tau(sched, n));
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 0.01);
}
