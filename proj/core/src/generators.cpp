#include "spanmdp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spanmdp/errors.hpp"
#include "spanmdp/generative.hpp"
#include "spanmdp/mec.hpp"

namespace spanmdp {

Mdp generate_chain(std::size_t num_states, double p_slip, std::uint64_t /*seed*/) {
  if (num_states < 2) throw InvalidArgument("chain needs at least 2 states");
  if (!(p_slip >= 0.0 && p_slip <= 0.5)) throw InvalidArgument("p_slip must lie in [0, 0.5]");
  const std::size_t S = num_states;
  const std::size_t A = 2;
  std::vector<double> P(S * A * S, 0.0);
  std::vector<double> r(S * A, 0.0);
  for (StateIndex s = 0; s < S; ++s) {
    const StateIndex left = s == 0 ? 0 : s - 1;
    const StateIndex right = s + 1 == S ? s : s + 1;
    for (ActionIndex a : {kLeft, kRight}) {
      double* row = P.data() + (s * A + a) * S;
      const StateIndex intended = a == kLeft ? left : right;
      const StateIndex slipped = a == kLeft ? right : left;
      row[intended] += 1.0 - p_slip;
      row[slipped] += p_slip;
    }
    r[s * A + kLeft] = r[s * A + kRight] = s + 1 == S ? 1.0 : (s == 0 ? 0.05 : 0.0);
  }
  Mdp m(S, A, std::move(P), std::move(r));
  validate_mdp(m);
  return m;
}

namespace {

Mdp garnet_attempt(std::size_t S, std::size_t A, std::size_t b, std::mt19937_64& engine) {
  std::vector<double> P(S * A * S, 0.0);
  std::vector<double> r(S * A);
  std::vector<StateIndex> states(S);
  std::vector<double> weights(b);
  for (StateIndex s = 0; s < S; ++s) {
    for (ActionIndex a = 0; a < A; ++a) {
      std::iota(states.begin(), states.end(), StateIndex{0});
      for (std::size_t i = 0; i < b; ++i) {
        const auto pick = i + std::min(S - i - 1, static_cast<std::size_t>(uniform01(engine) *
                                                                         static_cast<double>(S - i)));
        std::swap(states[i], states[pick]);
      }
      for (auto& w : weights) w = -std::log1p(-uniform01(engine));
      const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double* row = P.data() + (s * A + a) * S;
      std::size_t largest = 0;
      for (std::size_t i = 0; i < b; ++i) {
        row[states[i]] = weights[i] / total;
        if (weights[i] > weights[largest]) largest = i;
      }
      double rest = 0.0;
      for (std::size_t i = 0; i < b; ++i) {
        if (i != largest) rest += row[states[i]];
      }
      row[states[largest]] = 1.0 - rest;
      r[s * A + a] = uniform01(engine);
    }
  }
  return Mdp(S, A, std::move(P), std::move(r));
}

}  // namespace

Mdp generate_garnet(std::size_t num_states, std::size_t num_actions, std::size_t branching,
                    std::uint64_t seed, std::size_t max_attempts) {
  if (num_states == 0 || num_actions == 0) throw InvalidArgument("S and A must be positive");
  if (branching < 1 || branching > num_states) throw InvalidArgument("branching must lie in [1, S]");
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 engine(derive_seed(seed, {purpose::kGarnet, attempt}));
    Mdp m = garnet_attempt(num_states, num_actions, branching, engine);
    try {
      validate_mdp(m);
    } catch (const ValidationError&) {
      continue;
    }
    if (is_weakly_communicating(m)) return m;
  }
  throw GenerationFailed("no weakly communicating instance within " + std::to_string(max_attempts) +
                         " attempts");
}

}  // namespace spanmdp
