#include "spanmdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>

#include "json_io.hpp"
#include "spanmdp/algorithms.hpp"
#include "spanmdp/codec.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/generative.hpp"
#include "spanmdp/generators.hpp"
#include "spanmdp/solvers.hpp"

namespace spanmdp {

Mdp make_instance(const InstanceSpec& spec) {
  if (spec.generator == "chain") return generate_chain(spec.num_states, spec.p_slip, spec.seed);
  if (spec.generator == "garnet") {
    return generate_garnet(spec.num_states, spec.num_actions, spec.branching, spec.seed);
  }
  if (spec.generator == "file") return load_mdp(spec.path);
  throw InvalidArgument("unknown instance generator '" + spec.generator + "'");
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_grid.empty()) throw InvalidArgument("n grid is empty");
  if (cfg.n_grid.front() == 0) throw InvalidArgument("n grid entries must be positive");
  for (std::size_t i = 1; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] <= cfg.n_grid[i - 1]) throw InvalidArgument("n grid must be strictly increasing");
  }
  if (cfg.trials == 0) throw InvalidArgument("trials must be at least 1");
  if (!(cfg.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (cfg.algorithm == AlgorithmKind::Alg1) {
    if (!cfg.gamma) throw InvalidArgument("algorithm 1 needs gamma");
    if (!(*cfg.gamma > 0.0 && *cfg.gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  } else {
    if (cfg.epsilon > 1.0) throw InvalidArgument("algorithm 2 needs epsilon in (0, 1]");
    if (cfg.span_bound && !(*cfg.span_bound >= 1.0)) throw InvalidArgument("span bound must be >= 1");
  }
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  using detail::Json;
  const Json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("/", "expected an object");
  ExperimentConfig cfg;
  const auto number = [&](const Json& obj, const std::string& at, const char* key) -> std::optional<double> {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return detail::require_number(*it, at + "/" + key);
  };
  const auto count = [&](const Json& obj, const std::string& at, const char* key) -> std::optional<std::size_t> {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return detail::require_count(*it, at + "/" + key);
  };
  const auto seed = [&](const Json& obj, const std::string& at, const char* key) -> std::optional<std::uint64_t> {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
      throw ParseError(at + "/" + key, "expected a nonnegative integer");
    }
    return it->get<std::uint64_t>();
  };
  const auto string = [&](const Json& obj, const std::string& at, const char* key) -> std::optional<std::string> {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(at + "/" + key, "expected a string");
    return it->get<std::string>();
  };
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  const Json& inst = detail::require_field(doc, "", "instance");
  if (!inst.is_object()) throw ParseError("/instance", "expected an object");
  auto& spec = cfg.instance;
  if (auto v = string(inst, "/instance", "path")) {
    spec.generator = "file";
    spec.path = resolve(*v);
  }
  if (auto v = string(inst, "/instance", "generator")) spec.generator = *v;
  if (auto v = count(inst, "/instance", "num_states")) spec.num_states = *v;
  if (auto v = count(inst, "/instance", "num_actions")) spec.num_actions = *v;
  if (auto v = count(inst, "/instance", "branching")) spec.branching = *v;
  if (auto v = number(inst, "/instance", "p_slip")) spec.p_slip = *v;
  if (auto v = seed(inst, "/instance", "seed")) spec.seed = *v;
  if (spec.generator == "file" && spec.path.empty()) throw ParseError("/instance/path", "missing file path");

  const std::string algo = string(doc, "", "algorithm").value_or("alg2");
  if (algo == "alg1" || algo == "ALG1") {
    cfg.algorithm = AlgorithmKind::Alg1;
  } else if (algo == "alg2" || algo == "ALG2") {
    cfg.algorithm = AlgorithmKind::Alg2;
  } else {
    throw ParseError("/algorithm", "expected \"alg1\" or \"alg2\"");
  }
  const Json& grid = detail::require_field(doc, "", "n_grid");
  if (!grid.is_array()) throw ParseError("/n_grid", "expected an array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cfg.n_grid.push_back(detail::require_count(grid[i], "/n_grid/" + std::to_string(i)));
  }
  cfg.epsilon = detail::require_number(detail::require_field(doc, "", "epsilon"), "/epsilon");
  if (auto v = number(doc, "", "delta")) cfg.delta = *v;
  cfg.gamma = number(doc, "", "gamma");
  cfg.span_bound = number(doc, "", "span_bound");
  if (auto v = count(doc, "", "trials")) cfg.trials = *v;
  if (auto v = seed(doc, "", "master_seed")) cfg.master_seed = *v;
  if (auto v = string(doc, "", "output")) cfg.output = resolve(*v);
  if (auto v = count(doc, "", "threads")) cfg.threads = *v;
  validate_config(cfg);
  return cfg;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n_index, std::size_t trial) {
  return derive_seed(master_seed, {purpose::kTrial, n_index, trial});
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 == 1 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Mdp& instance) {
  validate_config(cfg);
  validate_mdp(instance);
  ExperimentResult result;
  const GenerativeModel model(instance, cfg.master_seed);

  ValueVector reference;  // V*_gamma (Alg1) or rho* per state (Alg2)
  if (cfg.algorithm == AlgorithmKind::Alg1) {
    result.planning_param = *cfg.gamma;
    reference = solve_discounted_optimal(instance, *cfg.gamma).values;
  } else {
    const AverageSolution opt = solve_average_optimal(instance);
    result.span_h = opt.gain_bias.span_h;
    result.planning_param = cfg.span_bound.value_or(std::max(1.0, result.span_h));
    reference = gain_bias_of_policy(instance, opt.policy).gain;
  }

  struct Task {
    std::size_t n_index;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({i, t});
  }
  result.trials.resize(tasks.size());

  const auto run_one = [&](const Task& task) {
    TrialResult out;
    out.n = cfg.n_grid[task.n_index];
    out.n_index = task.n_index;
    out.trial = task.trial;
    out.seed = trial_seed(cfg.master_seed, task.n_index, task.trial);
    const auto start = std::chrono::steady_clock::now();
    try {
      if (cfg.algorithm == AlgorithmKind::Alg1) {
        const Policy pi = run_algorithm1(model, Alg1Config{out.n, cfg.epsilon, *cfg.gamma, out.seed, out.seed});
        const ValueVector v = policy_evaluation_discounted(instance, pi, *cfg.gamma);
        for (StateIndex s = 0; s < v.size(); ++s) out.state_gaps.push_back(reference[s] - v[s]);
      } else {
        const Policy pi =
            run_algorithm2(model, Alg2Config{out.n, cfg.epsilon, result.planning_param, out.seed, out.seed});
        const GainBias gb = gain_bias_of_policy(instance, pi);
        for (StateIndex s = 0; s < gb.gain.size(); ++s) out.state_gaps.push_back(reference[s] - gb.gain[s]);
      }
      out.gap = cfg.algorithm == AlgorithmKind::Alg1
                    ? sup_norm(out.state_gaps)
                    : *std::max_element(out.state_gaps.begin(), out.state_gaps.end());
      out.epsilon_met = out.gap <= cfg.epsilon;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) result.trials[i] = run_one(tasks[i]);
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    GridSummary summary{cfg.n_grid[i], 0, 0.0, 0.0};
    std::vector<double> gaps;
    std::size_t met = 0;
    for (const auto& t : result.trials) {
      if (t.n_index != i || t.error) continue;
      gaps.push_back(t.gap);
      met += t.epsilon_met ? 1 : 0;
    }
    summary.trials = gaps.size();
    summary.success_rate = gaps.empty() ? 0.0 : static_cast<double>(met) / static_cast<double>(gaps.size());
    summary.median_gap = median(gaps);
    result.summaries.push_back(summary);
  }
  result.failed = std::any_of(result.trials.begin(), result.trials.end(),
                              [](const TrialResult& t) { return t.error.has_value(); });
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  return run_experiment(cfg, make_instance(cfg.instance));
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string experiment_csv(const ExperimentResult& result) {
  std::string out = "record,n,trial,seed,gap,epsilon_met,success_rate,median_gap,state_gaps\n";
  std::vector<const TrialResult*> failed;
  for (const auto& t : result.trials) {
    if (t.error) {
      failed.push_back(&t);
      continue;
    }
    std::string gaps;
    for (std::size_t s = 0; s < t.state_gaps.size(); ++s) gaps += (s ? ";" : "") + num(t.state_gaps[s]);
    out += "trial," + std::to_string(t.n) + "," + std::to_string(t.trial) + "," + std::to_string(t.seed) +
           "," + num(t.gap) + "," + (t.epsilon_met ? "true" : "false") + ",,," + gaps + "\n";
  }
  for (const auto& s : result.summaries) {
    out += "summary," + std::to_string(s.n) + ",,,,," + num(s.success_rate) + "," + num(s.median_gap) + ",\n";
  }
  for (const TrialResult* t : failed) {
    out += "FAILED," + std::to_string(t->n) + "," + std::to_string(t->trial) + "," + std::to_string(t->seed) +
           ",,,,," + csv_quote(*t->error) + "\n";
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs two or more paired points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

TrendTest monotone_trend(const std::vector<std::vector<double>>& gaps_per_n, std::uint64_t seed,
                         std::size_t resamples, double confidence) {
  TrendTest out;
  std::mt19937_64 engine(derive_seed(seed, {purpose::kBootstrap}));
  const auto resample_median = [&](const std::vector<double>& v) {
    std::vector<double> draw(v.size());
    for (auto& d : draw) {
      d = v[std::min(v.size() - 1, static_cast<std::size_t>(uniform01(engine) * static_cast<double>(v.size())))];
    }
    return median(std::move(draw));
  };
  for (std::size_t i = 0; i + 1 < gaps_per_n.size(); ++i) {
    if (gaps_per_n[i].empty() || gaps_per_n[i + 1].empty()) continue;
    std::size_t increases = 0;
    for (std::size_t b = 0; b < resamples; ++b) {
      if (resample_median(gaps_per_n[i + 1]) > resample_median(gaps_per_n[i])) ++increases;
    }
    if (static_cast<double>(increases) >= confidence * static_cast<double>(resamples)) {
      ++out.significant_inversions;
    }
  }
  out.monotone = out.significant_inversions <= 1;
  return out;
}

}  // namespace spanmdp
