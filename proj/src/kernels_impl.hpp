#ifndef MDVEC_KERNELS_IMPL_HPP
#define MDVEC_KERNELS_IMPL_HPP

#include "mdvec/kernels.hpp"

namespace mdvec::detail {

inline void validate_kernel_inputs(const ParticleSystem& system,
                                   const NeighborTable& table, double cutoff,
                                   const ForceAccumulator& out) {
  if (table.n_sites != system.n_sites) {
    throw ContractViolation("kernel: table does not match the system");
  }
  if (!(cutoff > 0) || cutoff > table.cutoff) {
    throw ContractViolation("kernel: cutoff must be positive and within the list cutoff");
  }
  if (out.fx.logical_len() != system.n_sites) {
    throw ContractViolation("kernel: accumulator size mismatch");
  }
}

}  // namespace mdvec::detail

#endif
