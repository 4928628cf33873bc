#pragma once

#include <stdexcept>
#include <string>

namespace abp {

// Configuration / usage problems (bad grid size, malformed key, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// NaN/Inf detected in a state or derivative. Carries the first offending
// location so a failing run can be traced to a mode and grid node.
struct NumericError : std::runtime_error {
  NumericError(const std::string& what, std::string where_, long index_)
      : std::runtime_error(what + " (" + where_ + ", flat index " + std::to_string(index_) + ")"),
        where(std::move(where_)),
        index(index_) {}
  std::string where;  // e.g. "a_2" or "step 141"
  long index;
};

}  // namespace abp
