#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace restor {

enum class ErrorCode {
  domain,           // argument outside the mathematical domain
  not_certified,    // query beyond the certified non-resonance range
  table_exhausted,  // arithmetic table too short for the query
  inapplicable,     // an assumption check whose precondition failed
  refused,          // experiment or transform precondition not met
  ball_exit,        // trajectory or transform left the admissible action ball
  step_failure,     // implicit solve did not converge
  invalid_model,    // malformed or inconsistent model description
  usage,            // bad command line
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace restor
