#ifndef XEBSIM_ERRORS_HPP_
#define XEBSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace xebsim {

// Composition produced a matrix that cannot be located in the group table.
// Signals numerical drift past the canonicalization tolerance.
class CanonicalizationError : public std::runtime_error {
 public:
  explicit CanonicalizationError(const std::string& what) : std::runtime_error(what) {}
};

// A density matrix violated its trace / Hermiticity / positivity invariants
// after a channel application.
class SimulationIntegrityError : public std::runtime_error {
 public:
  explicit SimulationIntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// Every ideal distribution in a record set was uniform: the reference set
// cannot resolve fidelity (degenerate least-squares denominator).
class IndeterminateFidelityError : public std::runtime_error {
 public:
  explicit IndeterminateFidelityError(const std::string& what) : std::runtime_error(what) {}
};

class FitFailureError : public std::runtime_error {
 public:
  explicit FitFailureError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration / data-file problem, annotated with file and line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& origin, int line, const std::string& what)
      : std::runtime_error(origin + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ConfigError(const std::string& what) : std::runtime_error(what), line_(0) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace xebsim

#endif  // XEBSIM_ERRORS_HPP_
