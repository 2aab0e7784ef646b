#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ttp {

using VertexId = std::uint32_t;
using NodeId = std::uint32_t;   // tree node
using EdgeId = std::uint32_t;   // tree edge

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

// Absolute tolerance used by all width/slope comparisons.
inline constexpr double kDefaultEpsilon = 1e-9;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; maps to CLI exit code 2.
class ParseError : public Error {
public:
  using Error::Error;
};

// Thinning exceeded the configured iteration cap; maps to CLI exit code 4.
class IterationCapError : public Error {
public:
  using Error::Error;
};

// Brute-force enumeration would exceed its node budget.
class BudgetError : public Error {
public:
  using Error::Error;
};

}  // namespace ttp
