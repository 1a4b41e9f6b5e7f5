#include "linalg.hpp"

#include <cmath>

#include "spanmdp/errors.hpp"

namespace spanmdp::detail {

Matrix policy_matrix(const Mdp& m, const Policy& pi) {
  const std::size_t S = m.num_states();
  Matrix P(S, S);
  for (StateIndex s = 0; s < S; ++s) {
    const auto row = m.row(s, pi[s]);
    for (StateIndex t = 0; t < S; ++t) P(s, t) = row[t];
  }
  return P;
}

Vector policy_rewards(const Mdp& m, const Policy& pi) {
  Vector r(m.num_states());
  for (StateIndex s = 0; s < m.num_states(); ++s) r(s) = m.reward(s, pi[s]);
  return r;
}

Vector to_eigen(std::span<const double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

ValueVector to_std(const Vector& v) { return ValueVector(v.data(), v.data() + v.size()); }

Vector solve_resolvent(const Matrix& P, double gamma, const Vector& b, double residual_tol) {
  const Eigen::Index n = P.rows();
  const Matrix M = Matrix::Identity(n, n) - gamma * P;
  const Eigen::PartialPivLU<Matrix> lu(M);
  Vector x = lu.solve(b);
  Vector residual = b - M * x;
  x += lu.solve(residual);
  residual = b - M * x;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (!x.allFinite() || residual.cwiseAbs().maxCoeff() > residual_tol * scale) {
    throw SingularSystem("linear solve of (I - gamma P) x = b failed: residual " +
                         std::to_string(residual.cwiseAbs().maxCoeff()));
  }
  return x;
}

ChainStructure analyse_chain(const Matrix& P) {
  const std::size_t n = static_cast<std::size_t>(P.rows());
  ChainStructure out;
  out.adj.assign(n, {});
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (P(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) > 0.0) out.adj[s].push_back(t);
    }
  }
  const SccResult scc = strongly_connected_components(out.adj);
  out.scc = scc.component;
  std::vector<bool> closed(scc.count, true);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t : out.adj[s]) {
      if (scc.component[t] != scc.component[s]) closed[scc.component[s]] = false;
    }
  }
  std::vector<std::size_t> slot(scc.count, static_cast<std::size_t>(-1));
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t id = scc.component[s];
    if (!closed[id]) {
      out.transient.push_back(s);
      continue;
    }
    if (slot[id] == static_cast<std::size_t>(-1)) {
      slot[id] = out.recurrent_classes.size();
      out.recurrent_classes.emplace_back();
    }
    out.recurrent_classes[slot[id]].push_back(s);
  }
  return out;
}

Vector class_stationary(const Matrix& P, const std::vector<std::size_t>& members) {
  const auto k = static_cast<Eigen::Index>(members.size());
  // nu (P_C - I) = 0 with the last equation replaced by sum(nu) = 1
  Matrix system(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto si = static_cast<Eigen::Index>(members[static_cast<std::size_t>(i)]);
      const auto sj = static_cast<Eigen::Index>(members[static_cast<std::size_t>(j)]);
      system(j, i) = P(si, sj) - (i == j ? 1.0 : 0.0);
    }
  }
  system.row(k - 1).setOnes();
  Vector rhs = Vector::Zero(k);
  rhs(k - 1) = 1.0;
  const Vector nu = system.fullPivLu().solve(rhs);
  Vector out = Vector::Zero(P.rows());
  for (Eigen::Index i = 0; i < k; ++i) {
    out(static_cast<Eigen::Index>(members[static_cast<std::size_t>(i)])) = std::max(0.0, nu(i));
  }
  out /= out.sum();
  return out;
}

Matrix cesaro_limit(const Matrix& P, const ChainStructure& chain) {
  const Eigen::Index n = P.rows();
  Matrix limit = Matrix::Zero(n, n);
  std::vector<Vector> stationary;
  for (const auto& members : chain.recurrent_classes) {
    stationary.push_back(class_stationary(P, members));
    for (std::size_t s : members) limit.row(static_cast<Eigen::Index>(s)) = stationary.back().transpose();
  }
  if (chain.transient.empty()) return limit;

  const auto nt = static_cast<Eigen::Index>(chain.transient.size());
  Matrix Q(nt, nt);
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < nt; ++j) {
      Q(i, j) = P(static_cast<Eigen::Index>(chain.transient[static_cast<std::size_t>(i)]),
                  static_cast<Eigen::Index>(chain.transient[static_cast<std::size_t>(j)]));
    }
  }
  const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(nt, nt) - Q);
  for (std::size_t c = 0; c < chain.recurrent_classes.size(); ++c) {
    Vector into(nt);
    for (Eigen::Index i = 0; i < nt; ++i) {
      double mass = 0.0;
      for (std::size_t t : chain.recurrent_classes[c]) {
        mass += P(static_cast<Eigen::Index>(chain.transient[static_cast<std::size_t>(i)]),
                  static_cast<Eigen::Index>(t));
      }
      into(i) = mass;
    }
    const Vector absorb = lu.solve(into);
    for (Eigen::Index i = 0; i < nt; ++i) {
      limit.row(static_cast<Eigen::Index>(chain.transient[static_cast<std::size_t>(i)])) +=
          absorb(i) * stationary[c].transpose();
    }
  }
  return limit;
}

}  // namespace spanmdp::detail
