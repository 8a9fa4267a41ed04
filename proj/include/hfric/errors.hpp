#pragma once

#include <stdexcept>
#include <string>

namespace hfric {

// Exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

// Bad or insufficient input data.
class InputError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return kExitInput; }
};

// The numerics failed on otherwise valid input.
class NumericalError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return kExitNumerical; }
};

class ParseError : public InputError {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

#define HFRIC_DEFINE_ERROR(Name, Base)                                         \
  class Name : public Base {                                                   \
  public:                                                                      \
    using Base::Base;                                                          \
  }

HFRIC_DEFINE_ERROR(TooFewPoints, InputError);
HFRIC_DEFINE_ERROR(CutoffTooLarge, InputError);
HFRIC_DEFINE_ERROR(NonMonotonicKnots, InputError);
HFRIC_DEFINE_ERROR(TooFewPointsPerSection, InputError);
HFRIC_DEFINE_ERROR(InvalidGrading, InputError);
HFRIC_DEFINE_ERROR(ConfigError, InputError);
HFRIC_DEFINE_ERROR(NoElementsFound, NumericalError);
HFRIC_DEFINE_ERROR(NoRoot, NumericalError);
HFRIC_DEFINE_ERROR(RankDeficient, NumericalError);
HFRIC_DEFINE_ERROR(SingularSystem, NumericalError);
HFRIC_DEFINE_ERROR(FactorizationFailed, NumericalError);
HFRIC_DEFINE_ERROR(ContactLoopDiverged, NumericalError);
HFRIC_DEFINE_ERROR(ProfileExhausted, NumericalError);
HFRIC_DEFINE_ERROR(WindowTooShort, NumericalError);

#undef HFRIC_DEFINE_ERROR

} // namespace hfric
