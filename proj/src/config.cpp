#include "dae/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace dae {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  require(j.is_object(), where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
T get_req(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

template <typename T>
T get_opt(const json& j, const std::string& where, const std::string& key,
          T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

Vd parse_mean(const json& j, int d, const std::string& where) {
  check_keys(j, where, {"kind", "values", "axis", "scale", "K", "index", "lift"});
  const std::string kind = get_req<std::string>(j, where, "kind");
  if (kind == "explicit") {
    const auto vals = get_req<std::vector<double>>(j, where, "values");
    require(static_cast<int>(vals.size()) == d, where + ": mean length != d");
    return Eigen::Map<const Vd>(vals.data(), d);
  }
  if (kind == "axis") {
    const int axis = get_req<int>(j, where, "axis");
    require(axis >= 0 && axis < d, where + ": axis out of range");
    Vd v = Vd::Zero(d);
    v[axis] = get_opt<double>(j, where, "scale", 1.0);
    return v;
  }
  if (kind == "simplex") {
    const int K = get_req<int>(j, where, "K");
    const int index = get_req<int>(j, where, "index");
    require(index >= 0 && index < K, where + ": simplex index out of range");
    const double scale = get_opt<double>(j, where, "scale", 1.0);
    const double lift = get_opt<double>(j, where, "lift", 0.0);
    require(lift >= 0.0 && lift < 1.0, where + ": lift in [0,1)");
    require(d >= K + (lift > 0.0 ? 1 : 0), where + ": d too small for simplex");
    Vd v = simplex_directions(K, d).col(index);
    if (lift > 0.0) {
      v *= std::sqrt(1.0 - lift * lift);
      v[K] = lift;
    }
    return scale * v;
  }
  throw ConfigError(where + ": unknown mean kind '" + kind + "'");
}

void parse_spectrum(const json& j, int d, const std::string& where, Vd& eigvals,
                    std::optional<Md>& basis) {
  check_keys(j, where, {"kind", "values", "tau", "scale", "rank", "axes"});
  const std::string kind = get_req<std::string>(j, where, "kind");
  eigvals = Vd::Zero(d);
  std::vector<double> lead;
  if (kind == "zero") {
  } else if (kind == "explicit") {
    lead = get_req<std::vector<double>>(j, where, "values");
  } else if (kind == "exp") {
    const double tau = get_opt<double>(j, where, "tau", 0.5);
    const double scale = get_opt<double>(j, where, "scale", 1.0);
    const int rank = get_opt<int>(j, where, "rank", d);
    require(rank >= 0 && rank <= d, where + ": rank out of range");
    for (int r = 0; r < rank; ++r) lead.push_back(scale * std::exp(-tau * r));
  } else {
    throw ConfigError(where + ": unknown spectrum kind '" + kind + "'");
  }
  require(static_cast<int>(lead.size()) <= d, where + ": spectrum longer than d");
  for (size_t i = 0; i < lead.size(); ++i) eigvals[i] = lead[i];

  basis.reset();
  if (j.contains("axes")) {
    const auto axes = get_req<std::vector<int>>(j, where, "axes");
    require(axes.size() == lead.size(), where + ": axes length != values length");
    Md P = Md::Zero(d, d);
    std::vector<bool> used(d, false);
    for (size_t r = 0; r < axes.size(); ++r) {
      const int a = axes[r];
      require(a >= 0 && a < d && !used[a], where + ": bad axes entry");
      used[a] = true;
      P(a, static_cast<int>(r)) = 1.0;
    }
    int next = 0;
    for (int r = static_cast<int>(axes.size()); r < d; ++r) {
      while (used[next]) ++next;
      used[next] = true;
      P(next, r) = 1.0;
    }
    basis = P;
  }
}

DataConfig parse_data(const json& j) {
  check_keys(j, "data", {"d", "seed", "counts", "modes", "duplicate", "image"});
  DataConfig dc;
  const int d = get_req<int>(j, "data", "d");
  dc.seed = get_req<std::uint64_t>(j, "data", "seed");
  dc.counts = get_req<std::vector<int>>(j, "data", "counts");
  const auto& modes = j.at("modes");
  require(modes.is_array() && !modes.empty(), "data.modes: nonempty array");
  require(modes.size() == dc.counts.size(),
          "data: counts and modes must have equal length");
  dc.spec.d = d;
  const double def_weight = 1.0 / static_cast<double>(modes.size());
  for (size_t k = 0; k < modes.size(); ++k) {
    const std::string where = "data.modes[" + std::to_string(k) + "]";
    check_keys(modes[k], where, {"weight", "mean", "spectrum"});
    dc.spec.weights.push_back(get_opt<double>(modes[k], where, "weight", def_weight));
    dc.spec.means.push_back(parse_mean(modes[k].at("mean"), d, where + ".mean"));
    Vd eig;
    std::optional<Md> basis;
    if (modes[k].contains("spectrum")) {
      parse_spectrum(modes[k].at("spectrum"), d, where + ".spectrum", eig, basis);
    } else {
      eig = Vd::Zero(d);
    }
    dc.spec.cov_eigvals.push_back(eig);
    dc.spec.cov_eigvecs.push_back(basis);
  }
  dc.spec.validate();
  if (j.contains("duplicate")) {
    const auto& dj = j.at("duplicate");
    check_keys(dj, "data.duplicate", {"source", "copies"});
    dc.duplicate = {get_req<int>(dj, "data.duplicate", "source"),
                    get_req<int>(dj, "data.duplicate", "copies")};
  }
  if (j.contains("image")) {
    const auto& ij = j.at("image");
    check_keys(ij, "data.image", {"height", "width"});
    dc.image = {get_req<int>(ij, "data.image", "height"),
                get_req<int>(ij, "data.image", "width")};
    require(dc.image->first * dc.image->second == d,
            "data.image: height*width must equal d");
  }
  return dc;
}

TrainConfig parse_train(const json& j) {
  check_keys(j, "train",
             {"kind", "lr", "weight_decay", "steps", "batch", "seed", "beta1",
              "beta2", "eps", "tied", "p", "sigma", "init_scale",
              "record_every"});
  TrainConfig tc;
  const std::string kind = get_opt<std::string>(j, "train", "kind", "rmsprop");
  if (kind == "rmsprop") tc.opt.kind = OptimizerKind::rmsprop;
  else if (kind == "adam") tc.opt.kind = OptimizerKind::adam;
  else if (kind == "adamw") tc.opt.kind = OptimizerKind::adamw;
  else throw ConfigError("train.kind: unknown optimizer '" + kind + "'");
  tc.opt.lr = get_req<double>(j, "train", "lr");
  tc.opt.weight_decay = get_opt<double>(j, "train", "weight_decay", 0.0);
  tc.opt.steps = get_req<long>(j, "train", "steps");
  tc.opt.batch = get_opt<int>(j, "train", "batch", 0);
  tc.opt.seed = get_req<std::uint64_t>(j, "train", "seed");
  tc.opt.beta1 = get_opt<double>(j, "train", "beta1", 0.9);
  tc.opt.beta2 = get_opt<double>(j, "train", "beta2", 0.99);
  tc.opt.eps = get_opt<double>(j, "train", "eps", 1e-8);
  tc.opt.tied = get_opt<bool>(j, "train", "tied", true);
  tc.opt.init_scale = get_opt<double>(j, "train", "init_scale", 1e-2);
  tc.opt.record_every = get_opt<long>(j, "train", "record_every", 0);
  tc.opt.validate();
  tc.p = get_req<int>(j, "train", "p");
  tc.sigma = get_req<double>(j, "train", "sigma");
  return tc;
}

ScheduleConfig parse_schedule(const json& j) {
  check_keys(j, "schedule", {"sigma_min", "sigma_max", "T"});
  ScheduleConfig sc;
  sc.sigma_min = get_req<double>(j, "schedule", "sigma_min");
  sc.sigma_max = get_req<double>(j, "schedule", "sigma_max");
  sc.T = get_req<int>(j, "schedule", "T");
  return sc;
}

DetectConfig parse_detect(const json& j) {
  check_keys(j, "detect", {"sigma", "stat", "threshold", "seed", "n"});
  DetectConfig dc;
  dc.sigma = get_opt<double>(j, "detect", "sigma", 0.17);
  dc.stat = get_opt<std::string>(j, "detect", "stat", "std");
  if (j.contains("threshold")) dc.threshold = get_req<double>(j, "detect", "threshold");
  dc.seed = get_req<std::uint64_t>(j, "detect", "seed");
  dc.n = get_opt<int>(j, "detect", "n", 100);
  return dc;
}

SteerConfig parse_steer(const json& j) {
  check_keys(j, "steer",
             {"target_label", "window_begin", "window_end", "extract_sigma",
              "extract_seed", "a_grid", "n", "seed"});
  SteerConfig sc;
  sc.target_label = get_req<int>(j, "steer", "target_label");
  sc.window_begin = get_opt<int>(j, "steer", "window_begin", 0);
  sc.window_end = get_opt<int>(j, "steer", "window_end", 0);
  sc.extract_sigma = get_opt<double>(j, "steer", "extract_sigma", 0.2);
  sc.extract_seed = get_req<std::uint64_t>(j, "steer", "extract_seed");
  sc.a_grid = get_opt<std::vector<double>>(j, "steer", "a_grid",
                                           {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5});
  sc.n = get_opt<int>(j, "steer", "n", 100);
  sc.seed = get_req<std::uint64_t>(j, "steer", "seed");
  return sc;
}

}  // namespace

Dataset DataConfig::generate() const {
  Dataset data = sample_mog(spec, counts, seed);
  if (duplicate.has_value())
    data = duplicate_cluster(data, duplicate->first, duplicate->second);
  return data;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  check_keys(j, "config", {"data", "train", "schedule", "detect", "steer"});
  ExperimentConfig cfg;
  if (j.contains("data")) cfg.data = parse_data(j.at("data"));
  if (j.contains("train")) cfg.train = parse_train(j.at("train"));
  if (j.contains("schedule")) cfg.schedule = parse_schedule(j.at("schedule"));
  if (j.contains("detect")) cfg.detect = parse_detect(j.at("detect"));
  if (j.contains("steer")) cfg.steer = parse_steer(j.at("steer"));
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace dae
