#include "triwave/audit.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace triwave {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trilinear_interaction_text(const TrilinearParams& p) {
  return num(p.omega_a()) + "*a' a + " + num(p.omega_b()) + "*b' b + " + num(p.omega_c()) +
         "*c' c + " + num(p.kappa()) + "*a' b c + hc";
}

BlockAuditReport audit_trilinear_blocks(const TrilinearParams& params,
                                        const std::vector<int>& cutoffs,
                                        std::size_t max_dimension) {
  if (cutoffs.size() != 3) throw std::invalid_argument("trilinear audit needs three cutoffs");
  const OperatorExpr expr =
      parse_operator(trilinear_interaction_text(params), std::vector<char>{'a', 'b', 'c'});
  const SparseOperator h = build_sparse(expr, cutoffs, max_dimension);

  BlockAuditReport report;
  report.dimension = h.dimension();

  // sparse index -> (block, position in block basis)
  std::map<BlockIndex, std::vector<std::pair<std::size_t, std::size_t>>> members;
  std::vector<BlockIndex> label(h.dimension());
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    const auto occ = h.occupation(i);
    const FockOccupation f{{occ[0], occ[1], occ[2]}, std::nullopt};
    label[i] = block_of(ModelKind::trilinear, f);
    members[label[i]].push_back({i, static_cast<std::size_t>(f.n_a())});
  }
  for (const SparseEntry& e : h.entries()) {
    if (label[e.row] != label[e.col]) ++report.cross_block_entries;
  }
  report.blocks = members.size();

  for (const auto& [idx, states] : members) {
    const TridiagonalSymmetric t =
        build_trilinear_block(params, block_basis_trilinear(idx.m1, idx.m2));
    for (const auto& [row, k] : states) {
      for (const auto& [col, l] : states) {
        double expected = 0.0;
        if (k == l) expected = t.diag[k];
        else if (k + 1 == l) expected = t.offdiag[k];
        else if (l + 1 == k) expected = t.offdiag[l];
        report.max_abs_deviation =
            std::max(report.max_abs_deviation, std::abs(h.at(row, col) - expected));
      }
    }
  }
  return report;
}

}  // namespace triwave
