#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relaxrk {

// base for everything this library throws on invalid input or structure
class invalid_input : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// runtime numerical breakdowns: solver divergence, NaN states, CFL violations
class numerical_failure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// implicit stage-solve breakdown, annotated with where it happened
class stage_solve_failure : public numerical_failure {
public:
  stage_solve_failure(const std::string& what, std::size_t stage, std::size_t node)
      : numerical_failure(what + " (stage " + std::to_string(stage + 1) + ", node " +
                          std::to_string(node) + ")"),
        stage_index(stage), node_index(node) {}

  std::size_t stage_index;
  std::size_t node_index;
};

} // namespace relaxrk
