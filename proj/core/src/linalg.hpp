#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "graph.hpp"
#include "spanmdp/mdp.hpp"

namespace spanmdp::detail {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

Matrix policy_matrix(const Mdp& m, const Policy& pi);
Vector policy_rewards(const Mdp& m, const Policy& pi);

Vector to_eigen(std::span<const double> v);
ValueVector to_std(const Vector& v);

/// Solves (I - gamma P) x = b with one refinement step. Throws SingularSystem
/// when the result is not finite or its residual exceeds `residual_tol`.
Vector solve_resolvent(const Matrix& P, double gamma, const Vector& b, double residual_tol = 1e-10);

/// Recurrent classes (closed SCCs) and transient states of a stochastic matrix.
struct ChainStructure {
  std::vector<std::vector<std::size_t>> recurrent_classes;  // ordered by smallest member
  std::vector<std::size_t> transient;
  Adjacency adj;
  std::vector<std::size_t> scc;  // SCC id per state
};

ChainStructure analyse_chain(const Matrix& P);

/// Stationary distribution of the closed class `members`, zero elsewhere.
Vector class_stationary(const Matrix& P, const std::vector<std::size_t>& members);

/// Cesaro-limit matrix P* (rows: limiting occupation from each start state).
Matrix cesaro_limit(const Matrix& P, const ChainStructure& chain);

}  // namespace spanmdp::detail
