#ifndef HOROHYP_ERRORS_HPP
#define HOROHYP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace horohyp {

enum class Err {
  Ok = 0,
  Parse,
  NotCayley,
  NotHyperbolic,
  DegreeBoundViolated,
  OracleAsymmetry,
  Uncertified,
  NotAPath,
  NotGeodesic,
  HorizonTooSmall,
  Unstable,
  TooManyClasses,
  NoConvergentRay,
  OutsideObservationSet,
  NotFoundWithinWindow,
  NoCandidate,
  NoExactOracle,
  NotEnumerable,
  CalibrationFailed,
  UnsupportedFormat,
  ResourceLimit,
  Internal,
};

const char* err_name(Err e);

/// Library-wide exception; `code` names the contract violation, `what()`
/// carries the detail message.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace horohyp

#endif
