#include "spanmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "spanmdp/errors.hpp"

namespace spanmdp {

RowNotStochastic::RowNotStochastic(std::size_t state, std::size_t action, double sum)
    : ValidationError([&] {
        std::ostringstream os;
        os.precision(17);
        os << "transition row (s=" << state << ", a=" << action << ") sums to " << sum;
        return os.str();
      }()),
      state_(state),
      action_(action),
      sum_(sum) {}

ValueOutOfRange::ValueOutOfRange(std::string field, std::size_t index, double value)
    : ValidationError([&] {
        std::ostringstream os;
        os.precision(17);
        os << field << "[" << index << "] = " << value << " lies outside [0, 1]";
        return os.str();
      }()),
      field_(std::move(field)),
      index_(index) {}

ParseError::ParseError(std::string location, const std::string& what)
    : ValidationError("parse error at " + location + ": " + what), location_(std::move(location)) {}

NegativePerturbation::NegativePerturbation(double xi)
    : ValidationError("perturbation level must be nonnegative, got " + std::to_string(xi)) {}

NonConvergence::NonConvergence(const std::string& what, std::size_t max_iters)
    : Error(what + " did not converge within " + std::to_string(max_iters) + " iterations"),
      max_iters_(max_iters) {}

NoUniqueStationary::NoUniqueStationary(std::size_t recurrent_classes)
    : Error("induced chain has " + std::to_string(recurrent_classes) +
            " recurrent classes; stationary distribution is not unique") {}

Mdp::Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transitions,
         std::vector<double> rewards)
    : num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw DimensionMismatch("an MDP needs at least one state and one action");
  }
  if (transitions_.size() != num_states_ * num_actions_ * num_states_) {
    throw DimensionMismatch("transition tensor has " + std::to_string(transitions_.size()) +
                            " entries, expected S*A*S = " +
                            std::to_string(num_states_ * num_actions_ * num_states_));
  }
  if (rewards_.size() != num_states_ * num_actions_) {
    throw DimensionMismatch("reward matrix has " + std::to_string(rewards_.size()) +
                            " entries, expected S*A = " +
                            std::to_string(num_states_ * num_actions_));
  }
}

Mdp Mdp::with_rewards(std::vector<double> rewards) const {
  return Mdp(num_states_, num_actions_, transitions_, std::move(rewards));
}

void validate_mdp(const Mdp& m) {
  const auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  const auto& P = m.transitions();
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!in_unit(P[i])) throw ValueOutOfRange("transitions", i, P[i]);
  }
  const auto& r = m.rewards();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!in_unit(r[i])) throw ValueOutOfRange("rewards", i, r[i]);
  }
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    for (ActionIndex a = 0; a < m.num_actions(); ++a) {
      double sum = 0.0;
      for (double p : m.row(s, a)) sum += p;
      if (std::abs(sum - 1.0) > kRowSumTolerance) throw RowNotStochastic(s, a, sum);
    }
  }
}

void validate_policy(const Mdp& m, const Policy& pi) {
  if (pi.size() != m.num_states()) {
    throw IndexOutOfRange("policy has " + std::to_string(pi.size()) + " entries for " +
                          std::to_string(m.num_states()) + " states");
  }
  for (StateIndex s = 0; s < pi.size(); ++s) {
    if (pi[s] >= m.num_actions()) {
      throw IndexOutOfRange("policy action " + std::to_string(pi[s]) + " at state " +
                            std::to_string(s) + " exceeds action count " +
                            std::to_string(m.num_actions()));
    }
  }
}

double span(std::span<const double> v) {
  if (v.empty()) throw EmptyVector();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double sup_norm(std::span<const double> v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

std::uint64_t policy_count(const Mdp& m) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    if (count > kMax / m.num_actions()) return kMax;
    count *= m.num_actions();
  }
  return count;
}

void check_enumeration(const Mdp& m, std::uint64_t cap) {
  const std::uint64_t count = policy_count(m);
  if (count > cap) {
    throw EnumerationTooLarge("A^S = " + std::to_string(count) +
                              " deterministic policies exceeds enumeration cap " +
                              std::to_string(cap));
  }
}

}  // namespace spanmdp
