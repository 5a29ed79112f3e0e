#pragma once

#include <stdexcept>
#include <string>

namespace aerobat {

// Base for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Linkage loop cannot close (empty circle intersection).
class AssemblyError : public Error {
public:
  using Error::Error;
};

class DegenerateTarget : public Error {
public:
  using Error::Error;
};

class NoFeasibleStart : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class SingularSystem : public Error {
public:
  using Error::Error;
};

class SingularInertia : public Error {
public:
  using Error::Error;
};

class UnstablePoleRequest : public Error {
public:
  using Error::Error;
};

class IllConditioned : public Error {
public:
  using Error::Error;
};

class NumericalBlowup : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  ConfigError(const std::string& key, int line, const std::string& what)
      : Error(format(key, line, what)), key_(key), line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string msg = "config error";
    if (line > 0) msg += " at line " + std::to_string(line);
    if (!key.empty()) msg += " (key '" + key + "')";
    return msg + ": " + what;
  }

  std::string key_;
  int line_;
};

}  // namespace aerobat
