#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace coincsim {

/// Invalid configuration: bad parameter, malformed config text, or a
/// violated operation precondition. `field()` names the offending config
/// path when one is known, `line()` the 1-based source line (0 if none).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, std::string field = {}, std::size_t line = 0)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string field_;
  std::size_t line_;
};

/// Malformed or inconsistent input data (time-tag files).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An estimate whose denominator vanishes (e.g. alpha with N1 == 0).
class UndefinedEstimate : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace coincsim
