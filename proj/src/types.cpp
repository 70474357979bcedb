#include "lcp/types.hpp"

namespace lcp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::NonCompact: return "non-compact";
    case ErrorCode::OriginNotInterior: return "origin-not-interior";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::EmptyIntersection: return "empty-intersection";
    case ErrorCode::LowerDimensional: return "lower-dimensional";
    case ErrorCode::CapExceeded: return "cap-exceeded";
    case ErrorCode::NotIsotropic: return "not-isotropic";
    case ErrorCode::SamplerUnavailable: return "sampler-unavailable";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

}  // namespace lcp
