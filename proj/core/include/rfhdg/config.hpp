#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rfhdg {

enum class SchemeVariant {
  DarcyHdpg,
  DarcyHdpgReduced,
  DarcyHdpgGlobalTrace,
  DarcyHdg,
  DarcyHdpgFlux2,
  Stokes,
  StokesDarcy,
  Brinkman,
};

std::string to_string(SchemeVariant v);
SchemeVariant scheme_from_string(const std::string& name);

/// One benchmark run: a (problem, scheme, discretization) choice executed
/// once per seed, with errors averaged over the seed list.
struct RunConfig {
  int example = 1;
  int m = 1;           // example 2 oscillation count
  double alpha = 1.0;  // examples 4 and 5
  double nu = 1.0;     // examples 3 and 4

  SchemeVariant scheme = SchemeVariant::DarcyHdpg;
  int nx = 3, ny = 3;
  int k0 = 3;

  double r = 0.6;        // uniform half-width
  double r_stokes = 0;   // coupled runs; 0 -> r
  double r_darcy = 0;    // coupled runs; 0 -> r
  double eta = 0;
  double tau = 0;
  int interface_samples = 30;  // M

  // Neuron-count overrides; 0 keeps the k0-derived defaults.
  int n_u = 0, n_uhat = 0, n_p = 0;

  int quad_points = 0;  // 0 -> k0 + 5 per direction
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  std::string out_path;
  std::string dump_path;
};

}  // namespace rfhdg
