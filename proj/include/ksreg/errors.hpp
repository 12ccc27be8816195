#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksreg {

enum class Errc {
  ZeroQuaternion,
  ZeroPosition,
  CollisionSingular,
  OuterCollision,
  HyperbolicOuter,
  EccentricityOutOfRange,
  DegenerateElement,
  ChartDegenerate,
  RatioTooLarge,
  AlphaTooLarge,
  NonPhysicalPoint,
  SingularCoordinates,
  NotClosed,
  DegenerateRadicand,
  CoincidentMomenta,
  StepFailure,
  TooShort,
  ConfigInvalid,
};

std::string_view errc_name(Errc code);

// Errors in the physical domain (as opposed to bad input or numerical failure).
bool is_physical_domain(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace ksreg
