#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace visang {

enum class ErrorKind {
  ConvexityViolation,
  PositivityViolation,
  ProjectionError,
  PointInsideBody,
  DegenerateTangency,
  CircleTooSmall,
  NoBracket,
  TailTooLarge,
  SingularAtZero,
  AlphaOutOfRange,
  NegativeRadicand,
  RationalityViolation,
  PeriodicityViolation,
  NoIsotopicCircle,
  NotConstantWidth,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConvexityViolation: return "ConvexityViolation";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::ProjectionError: return "ProjectionError";
    case ErrorKind::PointInsideBody: return "PointInsideBody";
    case ErrorKind::DegenerateTangency: return "DegenerateTangency";
    case ErrorKind::CircleTooSmall: return "CircleTooSmall";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::SingularAtZero: return "SingularAtZero";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::RationalityViolation: return "RationalityViolation";
    case ErrorKind::PeriodicityViolation: return "PeriodicityViolation";
    case ErrorKind::NoIsotopicCircle: return "NoIsotopicCircle";
    case ErrorKind::NotConstantWidth: return "NotConstantWidth";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can put it into a structured report.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace visang
