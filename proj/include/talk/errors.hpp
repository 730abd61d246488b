#ifndef TALK_ERRORS_HPP
#define TALK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace talk {

// Malformed or out-of-contract input (bad game file, kernel shape, parameter
// range). CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A request the implementation cannot serve at this size or configuration
// (e.g. partition enumeration past the configured state limit). Exit code 3.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Root finding asked for a root in a bracket without a sign change.
class BracketError : public ValidationError {
 public:
  explicit BracketError(const std::string& what) : ValidationError(what) {}
};

// No stage profile can hold the opponent at the requested payoff level.
class NoPunishmentError : public std::runtime_error {
 public:
  explicit NoPunishmentError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace talk

#endif  // TALK_ERRORS_HPP
