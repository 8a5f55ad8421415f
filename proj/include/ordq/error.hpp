#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ordq {

// All failures surface as Error with a short machine-readable category token
// (e.g. "schema-mismatch", "infeasible-sample"). The CLI prints the category
// verbatim, so keep tokens stable.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(category + ": " + message), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

[[noreturn]] inline void fail(std::string category, const std::string& message) {
  throw Error(std::move(category), message);
}

}  // namespace ordq
