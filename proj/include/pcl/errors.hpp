#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point index outside the domain.
struct DomainError : Error {
  using Error::Error;
};

// Caller broke a documented precondition.
struct ContractViolation : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

// Enumeration would exceed the configured work budget.
struct BudgetError : Error {
  using Error::Error;
};

// Structural input validation (graphs, partitions, configs).
struct ValidationError : Error {
  using Error::Error;
};

// Algorithm could not finish although theory says it should.
struct AlgorithmFailure : Error {
  using Error::Error;
};

struct SampleSizeError : Error {
  SampleSizeError(std::size_t need, std::size_t got)
      : Error("sample too short: need " + std::to_string(need) + ", got " +
              std::to_string(got)),
        required(need),
        provided(got) {}
  std::size_t required;
  std::size_t provided;
};

}  // namespace pcl
