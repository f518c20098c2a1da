#include "temper/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace temper {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at '" + where + "': " + what);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      fail(where + "." + item.key(), "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& where,
                    const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing required key");
  return *it;
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

long get_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long>();
}

std::string get_kind(const json& obj, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const json& kind = require(obj, where, "kind");
  if (!kind.is_string()) fail(where + ".kind", "expected a string");
  return kind.get<std::string>();
}

TrueModel parse_true_model(const json& obj) {
  const std::string where = "true_model";
  const std::string kind = get_kind(obj, where);
  try {
    if (kind == "normal_iid") {
      check_keys(obj, where, {"kind", "mean", "sd"});
      return NormalIID(get_number(require(obj, where, "mean"), where + ".mean"),
                       get_number(require(obj, where, "sd"), where + ".sd"));
    }
    if (kind == "student_t_iid") {
      check_keys(obj, where, {"kind", "df", "loc", "scale"});
      return StudentTIID(
          get_number(require(obj, where, "df"), where + ".df"),
          get_number(require(obj, where, "loc"), where + ".loc"),
          get_number(require(obj, where, "scale"), where + ".scale"));
    }
    if (kind == "bernoulli_iid") {
      check_keys(obj, where, {"kind", "p"});
      return BernoulliIID(get_number(require(obj, where, "p"), where + ".p"));
    }
    if (kind == "mixture_regression") {
      check_keys(obj, where,
                 {"kind", "coef", "sigma", "outlier_rate", "outlier_sd"});
      const json& coef = require(obj, where, "coef");
      if (!coef.is_array() || coef.empty()) {
        fail(where + ".coef", "expected a nonempty array");
      }
      Eigen::VectorXd beta(coef.size());
      for (std::size_t i = 0; i < coef.size(); ++i) {
        beta(static_cast<Eigen::Index>(i)) =
            get_number(coef[i], where + ".coef");
      }
      return MixtureRegression(
          std::move(beta),
          get_number(require(obj, where, "sigma"), where + ".sigma"),
          get_number(require(obj, where, "outlier_rate"),
                     where + ".outlier_rate"),
          get_number(require(obj, where, "outlier_sd"), where + ".outlier_sd"));
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "unknown generator kind '" + kind + "'");
}

Eigen::MatrixXd parse_prior_cov(const json& v, const std::string& where) {
  if (v.is_object()) {
    check_keys(v, where, {"scaled_identity"});
    const json& si = require(v, where, "scaled_identity");
    check_keys(si, where + ".scaled_identity", {"dim", "value"});
    const long dim = get_integer(require(si, where + ".scaled_identity", "dim"),
                                 where + ".scaled_identity.dim");
    const double value =
        get_number(require(si, where + ".scaled_identity", "value"),
                   where + ".scaled_identity.value");
    if (dim < 1) fail(where + ".scaled_identity.dim", "must be >= 1");
    return value * Eigen::MatrixXd::Identity(dim, dim);
  }
  if (!v.is_array() || v.empty()) {
    fail(where, "expected a matrix (array of rows) or scaled_identity object");
  }
  const std::size_t p = v.size();
  Eigen::MatrixXd cov(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!v[i].is_array() || v[i].size() != p) {
      fail(where, "prior covariance rows must all have the matrix dimension");
    }
    for (std::size_t j = 0; j < p; ++j) {
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          get_number(v[i][j], where);
    }
  }
  return cov;
}

ModelSpec parse_model(const json& obj) {
  const std::string where = "model";
  const std::string kind = get_kind(obj, where);
  try {
    if (kind == "normal_location") {
      check_keys(obj, where, {"kind", "sigma", "prior_mean", "prior_var"});
      const json& pv = require(obj, where, "prior_var");
      double prior_var;
      if (pv.is_string() && pv.get<std::string>() == "flat") {
        prior_var = std::numeric_limits<double>::infinity();
      } else {
        prior_var = get_number(pv, where + ".prior_var");
      }
      const double prior_mean =
          obj.contains("prior_mean")
              ? get_number(obj.at("prior_mean"), where + ".prior_mean")
              : 0.0;
      return NormalLocationSpec(
          get_number(require(obj, where, "sigma"), where + ".sigma"),
          prior_mean, prior_var);
    }
    if (kind == "beta_bernoulli") {
      check_keys(obj, where, {"kind", "prior_a", "prior_b"});
      return BetaBernoulliSpec(
          get_number(require(obj, where, "prior_a"), where + ".prior_a"),
          get_number(require(obj, where, "prior_b"), where + ".prior_b"));
    }
    if (kind == "linreg") {
      check_keys(obj, where, {"kind", "noise_sd", "prior_cov"});
      return LinRegSpec(
          get_number(require(obj, where, "noise_sd"), where + ".noise_sd"),
          parse_prior_cov(require(obj, where, "prior_cov"),
                          where + ".prior_cov"));
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "unknown model kind '" + kind + "'");
}

Metric parse_metric(const json& v) {
  if (!v.is_string()) fail("metric", "expected a string");
  const std::string s = v.get<std::string>();
  if (s == "tvd") return Metric::Tvd;
  if (s == "kl") return Metric::Kl;
  if (s == "elpd") return Metric::Elpd;
  fail("metric", "unknown metric '" + s + "'");
}

TempGrid parse_grid(const json& obj) {
  const std::string where = "grid";
  check_keys(obj, where, {"lo", "hi", "points"});
  try {
    return TempGrid::log_spaced(
        get_number(require(obj, where, "lo"), where + ".lo"),
        get_number(require(obj, where, "hi"), where + ".hi"),
        static_cast<int>(
            get_integer(require(obj, where, "points"), where + ".points")));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "config",
             {"true_model", "model", "metric", "n_values", "replicates",
              "grid", "mc_samples", "seed", "scale_by_sqrt_n"});

  ExperimentConfig cfg{parse_true_model(require(doc, "config", "true_model")),
                       parse_model(require(doc, "config", "model")),
                       {}};
  cfg.metric = parse_metric(require(doc, "config", "metric"));

  const json& nv = require(doc, "config", "n_values");
  if (!nv.is_array() || nv.empty()) fail("n_values", "expected a nonempty array");
  for (const json& v : nv) {
    const long n = get_integer(v, "n_values");
    if (n < 1) fail("n_values", "entries must be >= 1");
    cfg.n_values.push_back(n);
  }

  if (doc.contains("replicates")) {
    const long r = get_integer(doc.at("replicates"), "replicates");
    if (r < 1) fail("replicates", "must be >= 1");
    cfg.replicates = static_cast<int>(r);
  }
  if (doc.contains("grid")) cfg.grid = parse_grid(doc.at("grid"));
  if (doc.contains("mc_samples")) {
    const long s = get_integer(doc.at("mc_samples"), "mc_samples");
    if (s < 1) fail("mc_samples", "must be >= 1");
    cfg.mc_samples = static_cast<int>(s);
  }
  if (doc.contains("seed")) {
    const json& seed = doc.at("seed");
    if (!seed.is_number_integer() ||
        (!seed.is_number_unsigned() && seed.get<long long>() < 0)) {
      fail("seed", "expected a nonnegative integer");
    }
    cfg.root_seed = seed.get<std::uint64_t>();
  }
  if (doc.contains("scale_by_sqrt_n")) {
    if (!doc.at("scale_by_sqrt_n").is_boolean()) {
      fail("scale_by_sqrt_n", "expected a boolean");
    }
    cfg.scale_by_sqrt_n = doc.at("scale_by_sqrt_n").get<bool>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json echo_config(const ExperimentConfig& cfg) {
  json doc;
  doc["true_model"] = std::visit(
      [](const auto& gen) -> json {
        using T = std::decay_t<decltype(gen)>;
        if constexpr (std::is_same_v<T, NormalIID>) {
          return {{"kind", "normal_iid"}, {"mean", gen.mean}, {"sd", gen.sd}};
        } else if constexpr (std::is_same_v<T, StudentTIID>) {
          return {{"kind", "student_t_iid"},
                  {"df", gen.df},
                  {"loc", gen.loc},
                  {"scale", gen.scale}};
        } else if constexpr (std::is_same_v<T, BernoulliIID>) {
          return {{"kind", "bernoulli_iid"}, {"p", gen.p}};
        } else {
          json coef = json::array();
          for (Eigen::Index i = 0; i < gen.coef.size(); ++i) {
            coef.push_back(gen.coef(i));
          }
          return {{"kind", "mixture_regression"},
                  {"coef", coef},
                  {"sigma", gen.sigma},
                  {"outlier_rate", gen.outlier_rate},
                  {"outlier_sd", gen.outlier_sd}};
        }
      },
      cfg.true_model);

  doc["model"] = std::visit(
      [](const auto& spec) -> json {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, NormalLocationSpec>) {
          json out = {{"kind", "normal_location"},
                      {"sigma", spec.sigma},
                      {"prior_mean", spec.prior_mean}};
          if (spec.has_flat_prior()) {
            out["prior_var"] = "flat";
          } else {
            out["prior_var"] = spec.prior_var;
          }
          return out;
        } else if constexpr (std::is_same_v<T, BetaBernoulliSpec>) {
          return {{"kind", "beta_bernoulli"},
                  {"prior_a", spec.prior_a},
                  {"prior_b", spec.prior_b}};
        } else {
          json cov = json::array();
          for (Eigen::Index i = 0; i < spec.prior_cov.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < spec.prior_cov.cols(); ++j) {
              row.push_back(spec.prior_cov(i, j));
            }
            cov.push_back(row);
          }
          return {{"kind", "linreg"},
                  {"noise_sd", spec.noise_sd},
                  {"prior_cov", cov}};
        }
      },
      cfg.model);

  doc["metric"] = metric_name(cfg.metric);
  doc["n_values"] = cfg.n_values;
  doc["replicates"] = cfg.replicates;
  const auto& pts = cfg.grid.points();
  doc["grid"] = {{"lo", pts.front()},
                 {"hi", pts.back()},
                 {"points", static_cast<long>(pts.size())}};
  doc["mc_samples"] = cfg.mc_samples;
  doc["seed"] = cfg.root_seed;
  doc["scale_by_sqrt_n"] = cfg.scale_by_sqrt_n;
  return doc;
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::Tvd: return "tvd";
    case Metric::Kl: return "kl";
    case Metric::Elpd: return "elpd";
  }
  return "tvd";
}

}  // namespace temper
