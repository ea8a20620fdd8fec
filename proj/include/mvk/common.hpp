#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace mvk {

/// Coefficients are exact arbitrary-precision integers; inclusion-exclusion
/// sums on large nerves overflow any fixed width.
using Int = boost::multiprecision::cpp_int;

/// Machine-readable failure codes. Budget-type codes map to a distinct
/// process exit status in the CLI (3 instead of 2).
enum class Errc {
  NameClash,
  GradeBelowDimension,
  InvalidBlowup,
  NotHomogeneous,
  AmbiguousComponents,
  SearchBudget,
  NotSharp,
  InvalidRay,
  SizeBudget,
  NoStratumCone,
  PosetCycle,
  CodimNotMonotone,
  IntervalConditionFailed,
  NoComponents,
  NerveInconsistent,
  UnlabeledStratum,
  InvariantViolation,
  MissingCover,
  LabelConflict,
  SchemaViolation,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NameClash: return "NameClash";
    case Errc::GradeBelowDimension: return "GradeBelowDimension";
    case Errc::InvalidBlowup: return "InvalidBlowup";
    case Errc::NotHomogeneous: return "NotHomogeneous";
    case Errc::AmbiguousComponents: return "AmbiguousComponents";
    case Errc::SearchBudget: return "SearchBudget";
    case Errc::NotSharp: return "NotSharp";
    case Errc::InvalidRay: return "InvalidRay";
    case Errc::SizeBudget: return "SizeBudget";
    case Errc::NoStratumCone: return "NoStratumCone";
    case Errc::PosetCycle: return "PosetCycle";
    case Errc::CodimNotMonotone: return "CodimNotMonotone";
    case Errc::IntervalConditionFailed: return "IntervalConditionFailed";
    case Errc::NoComponents: return "NoComponents";
    case Errc::NerveInconsistent: return "NerveInconsistent";
    case Errc::UnlabeledStratum: return "UnlabeledStratum";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::MissingCover: return "MissingCover";
    case Errc::LabelConflict: return "LabelConflict";
    case Errc::SchemaViolation: return "SchemaViolation";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline bool is_budget_error(Errc c) {
  return c == Errc::SearchBudget || c == Errc::SizeBudget;
}

}  // namespace mvk
