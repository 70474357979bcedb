#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace lcp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  NonCompact,
  OriginNotInterior,
  Infeasible,
  Degenerate,
  EmptyIntersection,
  LowerDimensional,
  CapExceeded,
  NotIsotropic,
  SamplerUnavailable,
  Unsupported,
  NonConvergence,
  Config,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets callers (and the CLI) distinguish e.g. an empty intersection from a
// lower-dimensional one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace lcp
