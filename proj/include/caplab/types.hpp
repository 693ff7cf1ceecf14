#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace caplab {

enum class ErrorCode {
  InvalidCap,
  ThetaDegenerate,
  DegenerateProfile,
  NonPositiveCurvature,
  MixedRegime,
  RegimeMissing,
  NotClosed,
  H2Violation,
  EmptyTestRegion,
  MeshFailure,
  SolveDiverged,
  RegimeViolation,
  NoSubstrateHit,
  ApexSingularity,
  RootFindDiverged,
  InvalidSigma,
  UsageError,
  IoError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidCap: return "InvalidCap";
    case ErrorCode::ThetaDegenerate: return "ThetaDegenerate";
    case ErrorCode::DegenerateProfile: return "DegenerateProfile";
    case ErrorCode::NonPositiveCurvature: return "NonPositiveCurvature";
    case ErrorCode::MixedRegime: return "MixedRegime";
    case ErrorCode::RegimeMissing: return "RegimeMissing";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::H2Violation: return "H2Violation";
    case ErrorCode::EmptyTestRegion: return "EmptyTestRegion";
    case ErrorCode::MeshFailure: return "MeshFailure";
    case ErrorCode::SolveDiverged: return "SolveDiverged";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::NoSubstrateHit: return "NoSubstrateHit";
    case ErrorCode::ApexSingularity: return "ApexSingularity";
    case ErrorCode::RootFindDiverged: return "RootFindDiverged";
    case ErrorCode::InvalidSigma: return "InvalidSigma";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Vec2 {
  double rho = 0.0;
  double z = 0.0;

  Vec2 operator+(const Vec2& o) const { return {rho + o.rho, z + o.z}; }
  Vec2 operator-(const Vec2& o) const { return {rho - o.rho, z - o.z}; }
  Vec2 operator*(double a) const { return {rho * a, z * a}; }
  double dot(const Vec2& o) const { return rho * o.rho + z * o.z; }
  double cross(const Vec2& o) const { return rho * o.z - z * o.rho; }
  double norm() const { return std::hypot(rho, z); }
};

inline Vec2 operator*(double a, const Vec2& v) { return v * a; }

}  // namespace caplab
