#pragma once

#include "rfhdg/stokes.hpp"
#include "block_common.hpp"

namespace rfhdg::detail {

struct StokesBlockPlan {
  using EdgeRole = detail::EdgeRole;

  const Mesh* mesh = nullptr;
  double nu = 1.0;
  Mat2 inv_kappa = Mat2::Zero();
  VectorFn source;
  VectorFn boundary;
  StokesSchemeConfig config;
  EntityPlan entities;
};

StokesBlockPlan plan_stokes_block(const Mesh& mesh, double nu, const Mat2& inv_kappa,
                                  VectorFn source, VectorFn boundary,
                                  const StokesSchemeConfig& config,
                                  Subdomain filter = Subdomain::Single);

std::vector<BlockSpec> stokes_layout_blocks(const StokesBlockPlan& plan);

int stokes_row_count(const StokesBlockPlan& plan);

StokesSpaces make_stokes_spaces(const StokesBlockPlan& plan);

/// Order: constitutive rows by element, velocity-trace rows by edge,
/// momentum rows by element, then the mean-trace row when enabled.
void assemble_stokes_rows(const StokesBlockPlan& plan, const StokesSpaces& spaces,
                          const ColumnLayout& layout, DenseSystem& system);

}  // namespace rfhdg::detail
