#ifndef MDVEC_COMMON_HPP
#define MDVEC_COMMON_HPP

#include <stdexcept>
#include <string>

namespace mdvec {

// Per-site neighbor capacity. Fixed so padded buffers can be allocated once.
inline constexpr std::size_t kMaxNeighbors = 2560;

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), last_residual(residual) {}
  double last_residual;
};

}  // namespace mdvec

#endif
