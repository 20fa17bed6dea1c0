#pragma once

#include <stdexcept>
#include <string>

namespace agfit {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (edge list, attribute file, GML, model file).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A quantity left its mathematical domain: KL with a boundary reference,
// epsilon window leaving the admissible beta region, invalid model
// parameters, out-of-range probabilities, and similar.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A contingency table has an empty row or column, so the correlation
// coefficient is undefined.  Also raised for graphs without edges.
class DegenerateMarginError : public Error {
 public:
  using Error::Error;
};

}  // namespace agfit
