#pragma once

#include <stdexcept>
#include <string>

namespace mflab {

// Error taxonomy, one class per failure mode a caller can meaningfully
// distinguish. All derive from Error so the CLI can catch one type.

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// estimate_constants found a (phi, q) pair violating the required inequality.
class ConstantsError : public Error {
 public:
  ConstantsError(const std::string& msg, double phi, double q)
      : Error(msg), phi(phi), q(q) {}
  double phi;
  double q;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> residuals)
      : Error(msg), residual_history(std::move(residuals)) {}
  std::vector<double> residual_history;
};

class TailError : public Error {
 public:
  using Error::Error;
};

class BandError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class AmplitudeError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& msg, int i, int j, double time)
      : Error(msg), i(i), j(j), time(time) {}
  int i;
  int j;
  double time;
};

class BranchError : public Error {
 public:
  using Error::Error;
};

class ContourError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mflab
