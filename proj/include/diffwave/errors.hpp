#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace diffwave {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. |u| > 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input that makes the requested quantity meaningless (constant profile, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The flux Jacobian has complex eigenvalues at some state.
class HyperbolicityError : public Error {
 public:
  HyperbolicityError(const std::string& what, double v, double u)
      : Error(what), v_(v), u_(u) {}
  double v() const { return v_; }
  double u() const { return u_; }

 private:
  double v_;
  double u_;
};

/// Newton iteration for the profile did not converge.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// The time integration produced NaN or non-positive specific volume.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, int cell, double time)
      : Error(what), cell_(cell), time_(time) {}
  int cell() const { return cell_; }
  double time() const { return time_; }

 private:
  int cell_;
  double time_;
};

/// Least-squares decay fit could not be formed.
class FitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration problems; carries every validation message, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> messages)
      : Error(join(messages)), messages_(std::move(messages)) {}
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& m) {
    std::string out;
    for (const auto& s : m) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> messages_;
};

}  // namespace diffwave
