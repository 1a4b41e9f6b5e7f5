#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "spanmdp/spanmdp.hpp"

namespace {

using namespace spanmdp;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAuditFailure = 2;

Json finite_or_tag(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return "INFINITE";
  return x;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

struct Options {
  std::string file;
  std::string out;
  std::string config;
  double gamma = 0.0;
  bool gamma_set = false;
  double epsilon = 0.3;
  double delta = 0.1;
  std::optional<double> span_bound;
  std::size_t n = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool csv = false;
  bool json = false;
  bool full = false;
  double tol = 1e-10;
  // generators
  std::size_t states = 5;
  std::size_t actions = 2;
  std::size_t branching = 2;
  double p_slip = 0.2;
};

int cmd_validate(const Options& o) {
  const Mdp m = load_mdp(o.file);
  const auto mec = mec_decomposition(m);
  std::cout << "valid MDP: S=" << m.num_states() << " A=" << m.num_actions()
            << " end_components=" << mec.components.size()
            << " weakly_communicating=" << (mec.components.size() == 1 ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_solve_discounted(const Options& o) {
  const Mdp m = load_mdp(o.file);
  const auto sol = solve_discounted_optimal(m, o.gamma, o.tol);
  Json doc = Json::object();
  doc["gamma"] = o.gamma;
  doc["values"] = sol.values;
  doc["policy"] = sol.policy.actions;
  doc["sweeps"] = sol.sweeps;
  emit(doc.dump(2) + "\n", o.out);
  return kExitOk;
}

int cmd_solve_average(const Options& o) {
  const Mdp m = load_mdp(o.file);
  const auto sol = solve_average_optimal(m);
  Json doc = Json::object();
  doc["gain"] = sol.gain_bias.gain.front();
  doc["bias"] = sol.gain_bias.bias;
  doc["span"] = sol.gain_bias.span_h;
  doc["policy"] = sol.policy.actions;
  Json q = Json::array();
  for (StateIndex s = 0; s < sol.q.num_states; ++s) {
    Json row = Json::array();
    for (ActionIndex a = 0; a < sol.q.num_actions; ++a) row.push_back(sol.q(s, a));
    q.push_back(std::move(row));
  }
  doc["q"] = std::move(q);
  if (o.full) {
    doc["diameter"] = finite_or_tag(diameter(m));
    for (auto [mode, key] : {std::pair{PolicyClass::Optimal, "tau_star"}, std::pair{PolicyClass::Uniform, "tau_unif"}}) {
      try {
        doc[key] = finite_or_tag(policy_class_mixing(m, mode));
      } catch (const EnumerationTooLarge&) {
        doc[key] = nullptr;
      }
    }
  }
  emit(doc.dump(2) + "\n", o.out);
  return kExitOk;
}

int cmd_diagnose(const Options& o) {
  const Mdp m = load_mdp(o.file);
  AuditOptions opts;
  opts.instance_id = std::filesystem::path(o.file).stem().string();
  opts.policy_seed = o.seed;
  if (!o.full) opts.max_multistep_horizon = 2;
  const AuditReport report = audit_instance(m, o.gamma, opts);
  if (o.json) {
    emit(audit_json({report}), o.out);
  } else if (o.csv) {
    emit(audit_csv({report}), o.out);
  } else {
    std::size_t pass = 0, fail = 0, skipped = 0;
    for (const auto& r : report.records) {
      if (!r.enforced) continue;
      if (r.status == CheckStatus::Pass) ++pass;
      if (r.status == CheckStatus::Fail) ++fail;
      if (r.status == CheckStatus::Skipped) ++skipped;
    }
    std::string text = "instance " + report.instance_id + ": S=" + std::to_string(report.meta.num_states) +
                       " A=" + std::to_string(report.meta.num_actions) + "\n";
    const auto line = [](const char* name, double v) {
      return std::string("  ") + name + " = " + finite_or_tag(v).dump() + "\n";
    };
    text += line("gamma", report.meta.gamma) + line("span H", report.meta.span_h) +
            line("gain", report.meta.optimal_gain) + line("diameter D", report.meta.diameter) +
            line("tau*", report.meta.tau_star) + line("tau_unif", report.meta.tau_unif);
    text += "checks: " + std::to_string(pass) + " passed, " + std::to_string(fail) + " failed, " +
            std::to_string(skipped) + " skipped\n";
    for (const auto& r : report.failures()) {
      text += "  FAIL " + r.check + ": lhs=" + Json(r.lhs).dump() + " rhs=" + Json(r.rhs).dump() + "\n";
    }
    emit(text, o.out);
  }
  return report.all_passed() ? kExitOk : kExitAuditFailure;
}

int cmd_generate(const std::string& kind, const Options& o) {
  const Mdp m = kind == "chain" ? generate_chain(o.states, o.p_slip, o.seed)
                                : generate_garnet(o.states, o.actions, o.branching, o.seed);
  emit(serialize_mdp(m), o.out);
  return kExitOk;
}

int cmd_run(bool average, const Options& o) {
  const Mdp m = load_mdp(o.file);
  if (o.n == 0) throw InvalidArgument("--n is required and must be positive");
  const GenerativeModel g(m, o.seed);
  Json doc = Json::object();
  Json trials = Json::array();
  double reference_h = 0.0;
  ValueVector reference;
  double planning = 0.0;
  if (average) {
    const auto opt = solve_average_optimal(m);
    reference = gain_bias_of_policy(m, opt.policy).gain;
    reference_h = opt.gain_bias.span_h;
    planning = o.span_bound.value_or(std::max(1.0, reference_h));
    doc["span"] = reference_h;
    doc["span_bound"] = planning;
    doc["gamma_bar"] = reduction_discount(o.epsilon, planning);
    doc["theoretical_n"] = sample_size({SampleBound::AverageReward, planning, 0.0, o.epsilon, o.delta,
                                        m.num_states(), m.num_actions(), 1.0});
  } else {
    if (!o.gamma_set) throw InvalidArgument("--gamma is required");
    reference = solve_discounted_optimal(m, o.gamma).values;
    doc["gamma"] = o.gamma;
    doc["xi"] = perturbation_level(o.gamma, o.epsilon);
    try {
      const double H = std::max(1.0, solve_average_optimal(m).gain_bias.span_h);
      doc["theoretical_n"] = sample_size({SampleBound::Discounted, H, o.gamma, o.epsilon, o.delta,
                                          m.num_states(), m.num_actions(), 1.0});
    } catch (const Error& e) {
      doc["theoretical_n"] = nullptr;
      doc["theoretical_n_note"] = e.what();
    }
  }
  doc["n"] = o.n;
  doc["epsilon"] = o.epsilon;
  std::size_t met = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    Policy pi;
    double gap = 0.0;
    if (average) {
      pi = run_algorithm2(g, Alg2Config{o.n, o.epsilon, planning, o.seed, t});
      const auto gb = gain_bias_of_policy(m, pi);
      gap = -INFINITY;
      for (StateIndex s = 0; s < m.num_states(); ++s) gap = std::max(gap, reference[s] - gb.gain[s]);
    } else {
      pi = run_algorithm1(g, Alg1Config{o.n, o.epsilon, o.gamma, o.seed, t});
      const auto v = policy_evaluation_discounted(m, pi, o.gamma);
      for (StateIndex s = 0; s < m.num_states(); ++s) gap = std::max(gap, std::abs(reference[s] - v[s]));
    }
    met += gap <= o.epsilon ? 1 : 0;
    Json entry = Json::object();
    entry["trial"] = t;
    entry["policy"] = pi.actions;
    entry["gap"] = gap;
    entry["epsilon_met"] = gap <= o.epsilon;
    trials.push_back(std::move(entry));
  }
  doc["success_rate"] = static_cast<double>(met) / static_cast<double>(o.trials);
  doc["trials"] = std::move(trials);
  emit(doc.dump(2) + "\n", o.out);
  return kExitOk;
}

int cmd_experiment(const Options& o) {
  const auto base = std::filesystem::path(o.config).parent_path();
  ExperimentConfig cfg = parse_experiment_config(read_text_file(o.config), base);
  if (o.threads) cfg.threads = o.threads;
  const Mdp instance = make_instance(cfg.instance);
  const ExperimentResult result = run_experiment(cfg, instance);

  // Implied theoretical sample size with C = 1, for context.
  try {
    const SampleSizeQuery q =
        cfg.algorithm == AlgorithmKind::Alg2
            ? SampleSizeQuery{SampleBound::AverageReward, result.planning_param, 0.0, cfg.epsilon, cfg.delta,
                              instance.num_states(), instance.num_actions(), 1.0}
            : SampleSizeQuery{SampleBound::Discounted,
                              std::max(1.0, solve_average_optimal(instance).gain_bias.span_h), *cfg.gamma,
                              cfg.epsilon, cfg.delta, instance.num_states(), instance.num_actions(), 1.0};
    std::cerr << "theoretical n (C = 1): " << sample_size(q) << "\n";
  } catch (const Error& e) {
    std::cerr << "theoretical n unavailable: " << e.what() << "\n";
  }
  for (const auto& s : result.summaries) {
    std::cerr << "n = " << s.n << ": success rate " << s.success_rate << ", median gap " << s.median_gap << "\n";
  }

  const std::string out = !o.out.empty() ? o.out : cfg.output.string();
  emit(experiment_csv(result), out);
  return result.failed ? kExitError : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular average-reward and discounted MDP toolkit"};
  app.require_subcommand(1);
  Options o;

  const auto add_output = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "Write output to this file"); };

  auto* validate = app.add_subcommand("validate", "Check an MDP document");
  validate->add_option("file", o.file)->required()->check(CLI::ExistingFile);

  auto* solve_disc = app.add_subcommand("solve-discounted", "Optimal discounted values and policy");
  solve_disc->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  solve_disc->add_option("--gamma", o.gamma)->required();
  solve_disc->add_option("--tol", o.tol);
  add_output(solve_disc);

  auto* solve_avg = app.add_subcommand("solve-average", "Optimal gain, bias and span");
  solve_avg->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  solve_avg->add_flag("--full", o.full, "Also report diameter and mixing times");
  add_output(solve_avg);

  auto* diagnose = app.add_subcommand("diagnose", "Audit variance and span inequalities");
  diagnose->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  diagnose->add_option("--gamma", o.gamma)->required();
  diagnose->add_option("--seed", o.seed, "Seed for the random audited policies");
  diagnose->add_flag("--full", o.full, "Multistep checks up to horizon 6 (default 2)");
  auto* diag_csv = diagnose->add_flag("--csv", o.csv);
  diagnose->add_flag("--json", o.json)->excludes(diag_csv);
  add_output(diagnose);

  auto* generate = app.add_subcommand("generate", "Emit a generated MDP document");
  generate->require_subcommand(1);
  auto* chain = generate->add_subcommand("chain", "Birth-death chain with slip");
  chain->add_option("--states", o.states);
  chain->add_option("--p-slip", o.p_slip);
  chain->add_option("--seed", o.seed);
  add_output(chain);
  auto* garnet = generate->add_subcommand("garnet", "Random weakly communicating MDP");
  garnet->add_option("--states", o.states);
  garnet->add_option("--actions", o.actions);
  garnet->add_option("--branching", o.branching);
  garnet->add_option("--seed", o.seed);
  add_output(garnet);

  const auto add_run = [&](CLI::App* cmd) {
    cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);
    cmd->add_option("--n", o.n, "Samples per state-action pair")->required();
    cmd->add_option("--epsilon", o.epsilon);
    cmd->add_option("--delta", o.delta, "Confidence for the reported theoretical n");
    cmd->add_option("--seed", o.seed);
    cmd->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
    add_output(cmd);
  };
  auto* alg1 = app.add_subcommand("run-alg1", "Perturbed empirical planning (discounted)");
  add_run(alg1);
  alg1->add_option("--gamma", o.gamma)->required();
  auto* alg2 = app.add_subcommand("run-alg2", "Discounted reduction (average reward)");
  add_run(alg2);
  alg2->add_option("--span-bound", o.span_bound, "Upper bound on the optimal bias span");

  auto* experiment = app.add_subcommand("experiment", "Run a seeded sample-size sweep");
  experiment->add_option("--config", o.config)->required()->check(CLI::ExistingFile);
  experiment->add_option("--threads", o.threads);
  add_output(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitError;
  }
  o.gamma_set = alg1->parsed() || solve_disc->parsed() || diagnose->parsed();

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (solve_disc->parsed()) return cmd_solve_discounted(o);
    if (solve_avg->parsed()) return cmd_solve_average(o);
    if (diagnose->parsed()) return cmd_diagnose(o);
    if (chain->parsed()) return cmd_generate("chain", o);
    if (garnet->parsed()) return cmd_generate("garnet", o);
    if (alg1->parsed()) return cmd_run(false, o);
    if (alg2->parsed()) return cmd_run(true, o);
    if (experiment->parsed()) return cmd_experiment(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
