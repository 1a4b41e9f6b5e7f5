#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spanmdp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad documents, out-of-range parameters, shape errors.
/// The CLI maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class RowNotStochastic : public ValidationError {
 public:
  RowNotStochastic(std::size_t state, std::size_t action, double sum);
  std::size_t state() const noexcept { return state_; }
  std::size_t action() const noexcept { return action_; }
  double sum() const noexcept { return sum_; }

 private:
  std::size_t state_;
  std::size_t action_;
  double sum_;
};

class ValueOutOfRange : public ValidationError {
 public:
  ValueOutOfRange(std::string field, std::size_t index, double value);
  const std::string& field() const noexcept { return field_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::string field_;
  std::size_t index_;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::string location, const std::string& what);
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NegativePerturbation : public ValidationError {
 public:
  explicit NegativePerturbation(double xi);
};

class EmptyVector : public Error {
 public:
  EmptyVector() : Error("span of an empty vector is undefined") {}
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::size_t max_iters);
  std::size_t max_iters() const noexcept { return max_iters_; }

 private:
  std::size_t max_iters_;
};

class NotWeaklyCommunicating : public Error {
 public:
  NotWeaklyCommunicating() : Error("MDP is not weakly communicating") {}
  explicit NotWeaklyCommunicating(const std::string& what) : Error(what) {}
};

class NoUniqueStationary : public Error {
 public:
  explicit NoUniqueStationary(std::size_t recurrent_classes);
};

class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace spanmdp
