#include "ksreg/errors.hpp"

namespace ksreg {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::ZeroQuaternion: return "ZeroQuaternion";
    case Errc::ZeroPosition: return "ZeroPosition";
    case Errc::CollisionSingular: return "CollisionSingular";
    case Errc::OuterCollision: return "OuterCollision";
    case Errc::HyperbolicOuter: return "HyperbolicOuter";
    case Errc::EccentricityOutOfRange: return "EccentricityOutOfRange";
    case Errc::DegenerateElement: return "DegenerateElement";
    case Errc::ChartDegenerate: return "ChartDegenerate";
    case Errc::RatioTooLarge: return "RatioTooLarge";
    case Errc::AlphaTooLarge: return "AlphaTooLarge";
    case Errc::NonPhysicalPoint: return "NonPhysicalPoint";
    case Errc::SingularCoordinates: return "SingularCoordinates";
    case Errc::NotClosed: return "NotClosed";
    case Errc::DegenerateRadicand: return "DegenerateRadicand";
    case Errc::CoincidentMomenta: return "CoincidentMomenta";
    case Errc::StepFailure: return "StepFailure";
    case Errc::TooShort: return "TooShort";
    case Errc::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

bool is_physical_domain(Errc code) {
  switch (code) {
    case Errc::ZeroQuaternion:
    case Errc::ZeroPosition:
    case Errc::CollisionSingular:
    case Errc::OuterCollision:
    case Errc::HyperbolicOuter:
    case Errc::EccentricityOutOfRange:
    case Errc::DegenerateElement:
    case Errc::ChartDegenerate:
    case Errc::RatioTooLarge:
    case Errc::AlphaTooLarge:
    case Errc::NonPhysicalPoint:
    case Errc::SingularCoordinates:
    case Errc::DegenerateRadicand:
    case Errc::CoincidentMomenta:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ksreg
