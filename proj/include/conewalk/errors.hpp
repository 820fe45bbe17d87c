#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace conewalk {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A type whose column sum already consumes the whole degree, leaving no
/// predecessor edge.
class NonPositivePredecessor : public Error {
public:
  std::int64_t type_index;
  explicit NonPositivePredecessor(std::int64_t j)
      : Error("type " + std::to_string(j) + " has no predecessor (column sum >= degree)"),
        type_index(j) {}
};

class NotIrreducible : public Error {
public:
  std::vector<std::int64_t> component;
  explicit NotIrreducible(std::vector<std::int64_t> comp)
      : Error("successor graph is not strongly connected (component of size " +
              std::to_string(comp.size()) + " containing type " +
              (comp.empty() ? std::string("?") : std::to_string(comp.front())) + ")"),
        component(std::move(comp)) {}
};

class NotAperiodic : public Error {
public:
  std::int64_t period;
  explicit NotAperiodic(std::int64_t p)
      : Error("successor graph is periodic with period " + std::to_string(p)), period(p) {}
};

class InvalidGenus : public Error {
public:
  std::int64_t genus;
  explicit InvalidGenus(std::int64_t g)
      : Error("genus must be >= 2, got " + std::to_string(g)), genus(g) {}
};

class NoConvergence : public Error {
public:
  std::int64_t iterations;
  explicit NoConvergence(std::int64_t iters)
      : Error("iteration budget exhausted after " + std::to_string(iters) + " steps"),
        iterations(iters) {}
};

class PoolOverflow : public Error {
public:
  std::int64_t limit;
  explicit PoolOverflow(std::int64_t lim)
      : Error("word enumeration exceeded the configured limit of " + std::to_string(lim) +
              " words"),
        limit(lim) {}
};

class MemoryBudgetExceeded : public Error {
public:
  std::int64_t predicted_bytes;
  std::int64_t budget_bytes;
  MemoryBudgetExceeded(std::int64_t predicted, std::int64_t budget)
      : Error("predicted footprint " + std::to_string(predicted) +
              " bytes exceeds the memory budget of " + std::to_string(budget) + " bytes"),
        predicted_bytes(predicted), budget_bytes(budget) {}
};

/// A computed successor word is missing from the enumerated index.  Signals a
/// truncation rule that is not closed under the successor map.
class UnknownWord : public Error {
public:
  explicit UnknownWord(const std::string& rendered)
      : Error("successor word not found in the enumerated index: " + rendered) {}
};

class StochasticityViolation : public Error {
public:
  std::int64_t column;
  double deficit;
  StochasticityViolation(std::int64_t j, double d)
      : Error("transition columns do not sum to 1 at type " + std::to_string(j) +
              " (deficit " + std::to_string(d) + ")"),
        column(j), deficit(d) {}
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class RootNotBracketed : public Error {
public:
  using Error::Error;
};

class NoPositiveRoot : public Error {
public:
  using Error::Error;
};

} // namespace conewalk
