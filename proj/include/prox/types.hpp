#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace prox {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

enum class ErrorCode {
  InvalidInput,
  InvalidLattice,
  NotAQuadricOfInterest,
  AssumptionViolated,
  WrongQuadricClass,
  NoFullDimRecessionCone,
  NoLargeBalls,
  InfeasibleAnchor,
  InvalidRegularizer,
  InfeasibleSet,
  Empty,
  InvalidObjective,
  Unbounded,
  BoundNotApplicable,
  InfeasibleIntegerSet,
  CannotCertifyBox,
  PreconditionViolated,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prox
