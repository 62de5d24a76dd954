/// @file types.hpp
/// Common linear-algebra aliases and the typed error hierarchy shared by all
/// simulator modules. Error categories mirror the status codes of the C API.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace vfsim {

using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

enum class ErrorCategory {
  internal = 1,
  config_parse = 2,
  config_validation = 3,
  dimension = 4,
  geometry = 5,
  schedule = 6,
  nonconvergence = 7,
  singular = 8,
  io = 9,
  usage = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigParseError : Error {
  explicit ConfigParseError(const std::string& m) : Error(ErrorCategory::config_parse, m) {}
};
struct ConfigValidationError : Error {
  explicit ConfigValidationError(const std::string& m)
      : Error(ErrorCategory::config_validation, m) {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& m) : Error(ErrorCategory::dimension, m) {}
};
struct GeometryError : Error {
  explicit GeometryError(const std::string& m) : Error(ErrorCategory::geometry, m) {}
};
struct ScheduleError : Error {
  explicit ScheduleError(const std::string& m) : Error(ErrorCategory::schedule, m) {}
};

/// Newton failed to reach tolerance; carries the last residual norm so
/// callers can report how close the solve got.
struct NonconvergenceError : Error {
  NonconvergenceError(const std::string& m, double last_residual_)
      : Error(ErrorCategory::nonconvergence, m), last_residual(last_residual_) {}
  double last_residual;
};

struct SingularMatrixError : Error {
  explicit SingularMatrixError(const std::string& m) : Error(ErrorCategory::singular, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCategory::io, m) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error(ErrorCategory::usage, m) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& m) : Error(ErrorCategory::internal, m) {}
};

}  // namespace vfsim
