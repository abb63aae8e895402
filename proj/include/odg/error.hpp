#ifndef ODG_ERROR_HPP
#define ODG_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace odg {

/// Input that does not follow the expected format. Carries the offending
/// line when the input is line oriented.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(line ? what + " (line " + std::to_string(*line) + ")" : what),
        line_(line) {}

  std::optional<std::size_t> line() const noexcept { return line_; }

private:
  std::optional<std::size_t> line_;
};

/// Network-level failure talking to a remote service; callers may retry.
class TransportError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Persisted state does not match its manifest.
class CorruptionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace odg

#endif
