#pragma once

// Cross-checks between the block builders and the generic operator path.

#include <cstddef>
#include <string>
#include <vector>

#include "triwave/models.hpp"
#include "triwave/opspec.hpp"

namespace triwave {

/// DSL text of the full trilinear Hamiltonian, with coefficients printed to
/// round-trip exactly.
std::string trilinear_interaction_text(const TrilinearParams& params);

struct BlockAuditReport {
  std::size_t dimension = 0;
  std::size_t blocks = 0;
  std::size_t cross_block_entries = 0;  // sparse entries linking different blocks
  double max_abs_deviation = 0.0;       // over all same-block pairs
};

/// Assembles the trilinear Hamiltonian on the cutoff box through the operator
/// DSL, groups the product basis by (M1, M2) and compares every same-block
/// entry with build_trilinear_block. Exact agreement gives zero deviation.
BlockAuditReport audit_trilinear_blocks(const TrilinearParams& params,
                                        const std::vector<int>& cutoffs,
                                        std::size_t max_dimension = kDefaultMaxDimension);

}  // namespace triwave
