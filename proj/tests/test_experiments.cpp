#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "temper/experiments.hpp"

using namespace temper;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ExperimentConfig flat_normal_config(Metric metric, std::vector<long> n_values,
                                    int replicates, TempGrid grid) {
  ExperimentConfig cfg{NormalIID(0.0, 1.0), NormalLocationSpec::flat(1.0), {}};
  cfg.n_values = std::move(n_values);
  cfg.replicates = replicates;
  cfg.grid = std::move(grid);
  cfg.metric = metric;
  cfg.root_seed = 20240817;
  return cfg;
}

bool tables_identical(const ReplicateTable& a, const ReplicateTable& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const ReplicateRow& x = a.rows[i];
    const ReplicateRow& y = b.rows[i];
    if (x.n != y.n || x.replicate != y.replicate || x.tau != y.tau ||
        std::memcmp(&x.value, &y.value, sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("generators") {
  SUBCASE("degenerate Bernoulli data") {
    RandomSource rng(1);
    const Dataset d = generate(BernoulliIID(1.0), 5, rng);
    for (double v : std::get<UnivariateData>(d).values) CHECK(v == 1.0);
  }
  SUBCASE("same stream gives identical datasets") {
    RandomSource a(9), b(9);
    const Dataset da = generate(StudentTIID(10.0, 0.0, 1.0), 50, a);
    const Dataset db = generate(StudentTIID(10.0, 0.0, 1.0), 50, b);
    CHECK(std::get<UnivariateData>(da).values ==
          std::get<UnivariateData>(db).values);
  }
  SUBCASE("outlier-free regression recovers the coefficients by OLS") {
    Eigen::VectorXd beta(3);
    beta << 0.1, -0.4, 0.25;
    const MixtureRegression gen(beta, 1.0, 0.0, 0.1);
    RandomSource rng(10);
    const auto data = std::get<RegressionData>(generate(gen, 100000, rng));
    const Eigen::VectorXd ols =
        (data.X.transpose() * data.X)
            .ldlt()
            .solve(data.X.transpose() * data.y);
    // coefficient standard error is about 1/sqrt(n)
    const double bound = 4.0 / std::sqrt(100000.0);
    for (int j = 0; j < 3; ++j) CHECK(std::fabs(ols(j) - beta(j)) < bound);
  }
}

TEST_CASE("true predictive kernels") {
  CHECK(std::get<Normal>(true_predictive(TrueModel(NormalIID(0.0, 1.0)))).sd ==
        1.0);
  const auto t =
      std::get<StudentT>(true_predictive(TrueModel(StudentTIID(10, 0, 1))));
  CHECK(t.df == 10.0);
  CHECK(std::get<Bernoulli>(true_predictive(TrueModel(BernoulliIID(0.4)))).p ==
        0.4);

  Eigen::VectorXd beta(2);
  beta << 0.5, -0.5;
  const MixtureRegression gen(beta, 1.0, 0.5, 0.1);
  const NormalMixture mix = true_predictive(gen, Eigen::VectorXd::Zero(2));
  CHECK(mix.weights == std::vector<double>{0.5, 0.5});
  CHECK(mix.components[0].mean == 0.0);
  CHECK(mix.components[0].sd == 1.0);
  CHECK(mix.components[1].sd == doctest::Approx(0.1));

  CHECK_THROWS_AS(true_predictive(TrueModel(MixtureRegression(beta, 1, 0.5, 0.1))),
                  std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg{BernoulliIID(0.5), NormalLocationSpec::flat(1.0), {10}};
  CHECK_THROWS_AS(validate(cfg), IncompatibleConfigError);

  ExperimentConfig ok{BernoulliIID(0.5), BetaBernoulliSpec(1, 1), {10}};
  CHECK_NOTHROW(validate(ok));

  ExperimentConfig elpd_n1{NormalIID(0, 1), NormalLocationSpec::flat(1.0), {1}};
  elpd_n1.metric = Metric::Elpd;
  CHECK_THROWS_AS(validate(elpd_n1), IncompatibleConfigError);

  Eigen::VectorXd beta(3);
  beta << 1, 2, 3;
  ExperimentConfig dim{MixtureRegression(beta, 1.0, 0.5, 0.1),
                       LinRegSpec(1.0, Eigen::MatrixXd::Identity(2, 2)),
                       {20}};
  CHECK_THROWS_AS(validate(dim), IncompatibleConfigError);

  ExperimentConfig bad{NormalIID(0, 1), NormalLocationSpec::flat(1.0), {10}};
  bad.replicates = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("run_replicates produces one row per (n, replicate, tau)") {
  auto cfg = flat_normal_config(Metric::Tvd, {10}, 1,
                                TempGrid({0.5, 1.0, 2.0}));
  const ReplicateTable table = run_replicates(cfg);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].n == 10);
  CHECK(table.rows[0].replicate == 0);
  CHECK(table.rows[0].tau == 0.5);
  CHECK(table.rows[2].tau == 2.0);
}

TEST_CASE("KL table values match the closed form recomputed from the seeds") {
  auto cfg = flat_normal_config(Metric::Kl, {10, 25}, 4,
                                TempGrid({0.1, 1.0, 10.0}));
  const ReplicateTable table = run_replicates(cfg);
  const RandomSource root(cfg.root_seed);
  const auto& spec = std::get<NormalLocationSpec>(cfg.model);
  std::size_t idx = 0;
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      RandomSource stream = root.derive(rep).derive(ni);
      const Dataset data = generate(cfg.true_model, cfg.n_values[ni], stream);
      for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const Normal pred = predictive_normal_location(
            spec, std::get<UnivariateData>(data), cfg.grid[g]);
        const double expected = kl_normal(Normal(0.0, 1.0), pred);
        CHECK(table.rows[idx].value == expected);
        ++idx;
      }
    }
  }
}

TEST_CASE("serial and parallel runs are bit-identical") {
  auto cfg = flat_normal_config(Metric::Tvd, {10, 20}, 6,
                                TempGrid({0.5, 1.0, 2.0}));
  const ReplicateTable serial = run_replicates(cfg, 1);
  const ReplicateTable parallel = run_replicates(cfg, 3);
  CHECK(tables_identical(serial, parallel));
  const ReplicateTable again = run_replicates(cfg, 1);
  CHECK(tables_identical(serial, again));
}

TEST_CASE("metric sanity on a small sweep") {
  auto tvd_cfg = flat_normal_config(Metric::Tvd, {20}, 8,
                                    TempGrid({0.1, 1.0, 10.0}));
  for (const auto& row : run_replicates(tvd_cfg).rows) {
    CHECK(row.value >= 0.0);
    CHECK(row.value <= 1.0);
  }
  auto kl_cfg = flat_normal_config(Metric::Kl, {20}, 8,
                                   TempGrid({0.1, 1.0, 10.0}));
  for (const auto& row : run_replicates(kl_cfg).rows) CHECK(row.value >= 0.0);
}

TEST_CASE("regression sweep runs with shared covariate draws") {
  Eigen::VectorXd beta(2);
  beta << 0.5, -0.25;
  ExperimentConfig cfg{MixtureRegression(beta, 1.0, 0.5, 0.1),
                       LinRegSpec(1.0, 10.0 * Eigen::MatrixXd::Identity(2, 2)),
                       {15}};
  cfg.replicates = 2;
  cfg.grid = TempGrid({0.5, 1.0, 2.0});
  cfg.metric = Metric::Tvd;
  cfg.mc_samples = 8;
  cfg.root_seed = 5;
  const ReplicateTable table = run_replicates(cfg, 1);
  REQUIRE(table.rows.size() == 6);
  for (const auto& row : table.rows) {
    CHECK(row.value > 0.0);
    CHECK(row.value <= 1.0);
  }
  CHECK(tables_identical(table, run_replicates(cfg, 2)));
}

TEST_CASE("summarize") {
  SUBCASE("a single replicate collapses mean and quantiles") {
    auto cfg = flat_normal_config(Metric::Tvd, {10}, 1, TempGrid({0.5, 2.0}));
    const SummaryCurve curve = summarize(run_replicates(cfg), false);
    REQUIRE(curve.points.size() == 2);
    for (const auto& pt : curve.points) {
      CHECK(pt.mean == pt.q05);
      CHECK(pt.mean == pt.q95);
      CHECK(pt.degenerate_fraction == 0.0);
    }
  }
  SUBCASE("quantile convention on the integers 1..100") {
    ReplicateTable table;
    for (int r = 0; r < 100; ++r) {
      table.rows.push_back({50, r, 1.0, static_cast<double>(r + 1)});
    }
    const SummaryCurve curve = summarize(table, false);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].mean == doctest::Approx(50.5).epsilon(1e-14));
    CHECK(curve.points[0].q05 == doctest::Approx(5.95).epsilon(1e-12));
    CHECK(curve.points[0].q95 == doctest::Approx(95.05).epsilon(1e-12));
  }
  SUBCASE("sqrt-n scaling doubles a constant metric at n=4") {
    ReplicateTable table;
    table.rows.push_back({4, 0, 1.0, 0.7});
    table.rows.push_back({4, 1, 1.0, 0.7});
    const SummaryCurve curve = summarize(table, true);
    CHECK(curve.scaled);
    CHECK(curve.points[0].mean == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(curve.points[0].q05 == doctest::Approx(1.4).epsilon(1e-14));
  }
  SUBCASE("degenerate values are excluded from moments and counted") {
    ReplicateTable table;
    table.rows.push_back({4, 0, 1.0, 0.5});
    table.rows.push_back({4, 1, 1.0, kNegInf});
    table.rows.push_back({4, 2, 1.0, 0.7});
    table.rows.push_back({4, 3, 1.0, 0.9});
    const SummaryCurve curve = summarize(table, false);
    CHECK(curve.points[0].mean == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(curve.points[0].degenerate_fraction == doctest::Approx(0.25));
  }
  SUBCASE("empty tables are rejected") {
    CHECK_THROWS_AS(summarize(ReplicateTable{}, false), std::invalid_argument);
  }
}

TEST_CASE("flatness on the analytic risk curve") {
  const TempGrid grid = TempGrid::default_grid();
  SummaryCurve curve;
  for (long n : {10L, 100L, 1000L}) {
    for (double tau : grid.points()) {
      SummaryPoint pt{};
      pt.n = n;
      pt.tau = tau;
      pt.mean = risk_normal_flat(n, tau);
      pt.q05 = pt.q95 = pt.mean;
      curve.points.push_back(pt);
    }
  }
  const FlatnessReport report = flatness(curve, 0.1, 100.0);
  REQUIRE(report.rows.size() == 3);

  // direct max-min over the same values as an independent check
  for (const auto& row : report.rows) {
    double lo = 1e300, hi = -1e300;
    for (double tau : grid.points()) {
      if (tau >= 0.1 && tau <= 100.0) {
        const double r = risk_normal_flat(row.n, tau);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    CHECK(row.spread == doctest::Approx(hi - lo).epsilon(1e-14));
  }

  CHECK(report.rows[2].n == 1000);
  CHECK(report.rows[2].spread > 1.8e-5);
  CHECK(report.rows[2].spread < 2.2e-5);
  CHECK(report.rows[2].ratio == doctest::Approx(0.04).epsilon(0.1));
  CHECK(report.rows[0].spread > report.rows[1].spread);
  CHECK(report.rows[1].spread > report.rows[2].spread);

  SUBCASE("constant curves are exactly flat") {
    SummaryCurve flat_curve;
    for (double tau : grid.points()) {
      SummaryPoint pt{};
      pt.n = 7;
      pt.tau = tau;
      pt.mean = 0.125;
      flat_curve.points.push_back(pt);
    }
    const FlatnessReport r = flatness(flat_curve, 0.1, 100.0);
    CHECK(r.rows[0].spread == 0.0);
    CHECK(r.rows[0].ratio == 0.0);
  }
  SUBCASE("ranges covering fewer than two grid points are rejected") {
    CHECK_THROWS_AS(flatness(curve, 150.0, 200.0), std::invalid_argument);
    CHECK_THROWS_AS(flatness(curve, 0.999, 1.001), std::invalid_argument);
  }
}

TEST_CASE("tau selection histogram") {
  ExperimentConfig cfg{NormalIID(0.0, 1.0), NormalLocationSpec(1.0, 0.0, 1.0), {5}};
  cfg.replicates = 60;
  cfg.metric = Metric::Elpd;
  cfg.root_seed = 99;

  const auto rows = tau_selection_histogram(cfg, 2);
  REQUIRE(rows.size() == 60);
  int boundary = 0;
  for (const auto& row : rows) {
    CHECK(!(row.at_lower_boundary && row.at_upper_boundary));
    if (row.at_lower_boundary || row.at_upper_boundary) ++boundary;
  }
  // small-sample selections pile up on the grid boundaries
  CHECK(boundary > 0);

  const auto rows_again = tau_selection_histogram(cfg, 1);
  REQUIRE(rows_again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].tau_star == rows_again[i].tau_star);
    CHECK(rows[i].elpd_at_star == rows_again[i].elpd_at_star);
  }

  cfg.metric = Metric::Tvd;
  CHECK_THROWS_AS(tau_selection_histogram(cfg), IncompatibleConfigError);
}

TEST_CASE("well-specified sweep: distance falls and sqrt(n)-scaling stabilizes") {
  auto cfg = flat_normal_config(Metric::Tvd, {10, 100}, 50,
                                TempGrid::log_spaced(0.1, 100.0, 13));
  const SummaryCurve curve = summarize(run_replicates(cfg, 2), false);

  const auto mean_at = [&](long n) {
    double best = 1e9, out = 0.0;
    for (const auto& pt : curve.points) {
      if (pt.n == n && std::fabs(pt.tau - 1.0) < best) {
        best = std::fabs(pt.tau - 1.0);
        out = pt.mean;
      }
    }
    return out;
  };
  const double at10 = mean_at(10);
  const double at100 = mean_at(100);
  CHECK(at100 < at10);
  const double scaled10 = std::sqrt(10.0) * at10;
  const double scaled100 = std::sqrt(100.0) * at100;
  CHECK(std::max(scaled10, scaled100) / std::min(scaled10, scaled100) < 2.0);
}
