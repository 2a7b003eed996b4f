#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spinwehrl {

/// Base class of every error raised by the library. `name()` is the stable
/// identifier reported by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& what);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define SPINWEHRL_DECLARE_ERROR(Type)                                  \
  class Type : public Error {                                          \
   public:                                                             \
    explicit Type(const std::string& what) : Error(#Type, what) {}     \
  }

SPINWEHRL_DECLARE_ERROR(InvalidSpin);
SPINWEHRL_DECLARE_ERROR(NonPhysicalState);
SPINWEHRL_DECLARE_ERROR(WrongDimension);
SPINWEHRL_DECLARE_ERROR(DimensionMismatch);
SPINWEHRL_DECLARE_ERROR(InvalidFrequency);
SPINWEHRL_DECLARE_ERROR(InvalidTemperature);
SPINWEHRL_DECLARE_ERROR(InvalidRate);
SPINWEHRL_DECLARE_ERROR(InvalidGrid);
SPINWEHRL_DECLARE_ERROR(UndefinedAngles);
SPINWEHRL_DECLARE_ERROR(NonMarkovianRate);
SPINWEHRL_DECLARE_ERROR(StiffnessFailure);
SPINWEHRL_DECLARE_ERROR(InvalidTimeGrid);
SPINWEHRL_DECLARE_ERROR(UnsupportedParameters);
SPINWEHRL_DECLARE_ERROR(PrecisionFailure);
SPINWEHRL_DECLARE_ERROR(ZeroTemperatureBranch);
SPINWEHRL_DECLARE_ERROR(UndefinedRatio);
SPINWEHRL_DECLARE_ERROR(TailNotConverged);
SPINWEHRL_DECLARE_ERROR(AmplitudeUnderflow);
SPINWEHRL_DECLARE_ERROR(NonMarkovianRegime);

#undef SPINWEHRL_DECLARE_ERROR

}  // namespace spinwehrl
