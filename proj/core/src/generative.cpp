#include "spanmdp/generative.hpp"

#include "json_io.hpp"
#include "spanmdp/errors.hpp"

namespace spanmdp {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(master);
  std::uint64_t i = 0;
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + ++i));
  return h;
}

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::size_t sample_index(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > 0.0) last_positive = i;
    cumulative += probabilities[i];
    if (cumulative > u) return i;
  }
  return last_positive;
}

GenerativeModel::GenerativeModel(Mdp mdp, std::uint64_t master_seed)
    : mdp_(std::make_shared<const Mdp>(std::move(mdp))), master_seed_(master_seed) {
  validate_mdp(*mdp_);
}

void GenerativeModel::check_pair(StateIndex s, ActionIndex a) const {
  if (s >= mdp_->num_states() || a >= mdp_->num_actions()) {
    throw IndexOutOfRange("state-action pair (" + std::to_string(s) + ", " + std::to_string(a) +
                          ") outside a " + std::to_string(mdp_->num_states()) + "x" +
                          std::to_string(mdp_->num_actions()) + " model");
  }
}

std::mt19937_64 GenerativeModel::stream(StateIndex s, ActionIndex a, std::uint64_t trial) const {
  check_pair(s, a);
  return std::mt19937_64(derive_seed(master_seed_, {purpose::kTransitions, trial, s, a}));
}

StateIndex GenerativeModel::sample_next_state(StateIndex s, ActionIndex a, std::uint64_t trial,
                                              std::uint64_t draw) const {
  auto engine = stream(s, a, trial);
  engine.discard(draw);
  return sample_index(mdp_->row(s, a), uniform01(engine));
}

EmpiricalModel build_empirical_model(const GenerativeModel& g, std::size_t n, std::uint64_t trial) {
  if (n == 0) throw InvalidArgument("sample size per state-action pair must be at least 1");
  const Mdp& m = g.mdp();
  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  std::vector<std::uint64_t> counts(S * A * S, 0);
  for (StateIndex s = 0; s < S; ++s) {
    for (ActionIndex a = 0; a < A; ++a) {
      auto engine = g.stream(s, a, trial);
      const auto row = m.row(s, a);
      std::uint64_t* out = counts.data() + (s * A + a) * S;
      for (std::size_t k = 0; k < n; ++k) ++out[sample_index(row, uniform01(engine))];
    }
  }
  std::vector<double> p(counts.size());
  const auto denom = static_cast<double>(n);
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / denom;
  return EmpiricalModel{n, std::move(counts), Mdp(S, A, std::move(p), m.rewards())};
}

std::string serialize_empirical_model(const EmpiricalModel& e) {
  detail::Json doc = detail::mdp_to_json(e.p_hat);
  doc["samples_per_pair"] = e.samples_per_pair;
  const std::size_t S = e.p_hat.num_states();
  const std::size_t A = e.p_hat.num_actions();
  detail::Json counts = detail::Json::array();
  for (StateIndex s = 0; s < S; ++s) {
    detail::Json per_action = detail::Json::array();
    for (ActionIndex a = 0; a < A; ++a) {
      detail::Json row = detail::Json::array();
      for (StateIndex t = 0; t < S; ++t) row.push_back(e.count(s, a, t));
      per_action.push_back(std::move(row));
    }
    counts.push_back(std::move(per_action));
  }
  doc["counts"] = std::move(counts);
  return detail::format_document(doc);
}

EmpiricalModel parse_empirical_model(std::string_view text) {
  const detail::Json doc = detail::parse_json(text);
  Mdp p_hat = detail::mdp_from_json(doc);
  const std::size_t n =
      detail::require_count(detail::require_field(doc, "", "samples_per_pair"), "/samples_per_pair");
  if (n == 0) throw ParseError("/samples_per_pair", "must be positive");
  const std::size_t S = p_hat.num_states();
  const std::size_t A = p_hat.num_actions();
  const auto& counts = detail::require_array(detail::require_field(doc, "", "counts"), "/counts", S);
  std::vector<std::uint64_t> flat;
  flat.reserve(S * A * S);
  for (StateIndex s = 0; s < S; ++s) {
    const std::string ps = "/counts/" + std::to_string(s);
    const auto& per_action = detail::require_array(counts[s], ps, A);
    for (ActionIndex a = 0; a < A; ++a) {
      const std::string pa = ps + "/" + std::to_string(a);
      const auto& row = detail::require_array(per_action[a], pa, S);
      std::uint64_t total = 0;
      for (StateIndex t = 0; t < S; ++t) {
        const std::uint64_t c = detail::require_count(row[t], pa + "/" + std::to_string(t));
        if (static_cast<double>(c) / static_cast<double>(n) != p_hat.transition(s, a, t)) {
          throw ParseError(pa + "/" + std::to_string(t), "count disagrees with the transition entry");
        }
        total += c;
        flat.push_back(c);
      }
      if (total != n) throw ParseError(pa, "counts do not sum to samples_per_pair");
    }
  }
  return EmpiricalModel{n, std::move(flat), std::move(p_hat)};
}

}  // namespace spanmdp
