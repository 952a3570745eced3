#pragma once

#include "rfhdg/darcy.hpp"
#include "block_common.hpp"

namespace rfhdg::detail {

/// One Darcy block: the subset of the mesh it covers and how each incident
/// edge participates in the pressure-trace equation.
struct DarcyBlockPlan {
  using EdgeRole = detail::EdgeRole;

  const Mesh* mesh = nullptr;
  const DarcyProblem* problem = nullptr;
  DarcySchemeConfig config;
  EntityPlan entities;
};

DarcyBlockPlan plan_darcy_block(const Mesh& mesh, const DarcyProblem& problem,
                                const DarcySchemeConfig& config,
                                Subdomain filter = Subdomain::Single);

std::vector<BlockSpec> darcy_layout_blocks(const DarcyBlockPlan& plan);

int darcy_row_count(const DarcyBlockPlan& plan);

DarcySpaces make_darcy_spaces(const DarcyBlockPlan& plan);

/// Emits all rows of the block into `system` (order: flux-law rows by
/// element, trace rows by edge, mass rows by element). The u-eliminating
/// variants append one map per element to `elimination`.
void assemble_darcy_rows(const DarcyBlockPlan& plan, const DarcySpaces& spaces,
                         const ColumnLayout& layout, DenseSystem& system,
                         std::vector<Eigen::MatrixXd>* elimination);

}  // namespace rfhdg::detail
