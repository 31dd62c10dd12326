#pragma once

#include <cstdint>
#include <vector>

#include "qst/propagator.hpp"
#include "qst/protocols.hpp"

namespace qst {

struct BasisConfig {
  CrabBasis basis = CrabBasis::fourier;
  int n_terms = 4;
};

struct SearchConfig {
  int n_starts = 4;
  int max_evals_per_start = 500;
  std::uint64_t seed = 0;
  double simplex_tol = 1e-7;   // value spread at which a start is converged
  double initial_step = 0.2;   // initial simplex edge in coefficient space
  int n_workers = 1;           // starts may run concurrently
};

struct OptimizationResult {
  std::vector<double> best_coefficients;
  std::vector<double> best_frequencies;  // empty for the polynomial basis
  CrabBasis basis = CrabBasis::fourier;
  double best_fidelity = 0.0;
  double guess_fidelity = 0.0;
  int n_evaluations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  int best_start = 0;
};

/// Attaches a truncated-basis correction to a bare protocol. Zero
/// coefficients reproduce the base exactly; any coefficients preserve the
/// boundary values of the profile.
Protocol dress(const Protocol& base, CrabCorrection c);

/// Transfer fidelity of one fresh propagation; the objective maximized by
/// optimize() and the same code path fidelity_sweep uses.
double objective(const Protocol& p, double t_star,
                 const PropagationConfig& cfg = {});

/// Derivative-free maximization of the transfer fidelity at fixed t* over
/// the correction coefficients: simplex search restarted over randomized
/// frequency sets. Deterministic for a fixed search seed; exhausting the
/// budget returns the best point found with converged = false.
OptimizationResult optimize(const Protocol& base, double t_star,
                            const BasisConfig& basis_cfg = {},
                            const SearchConfig& search_cfg = {},
                            const PropagationConfig& cfg = {});

}  // namespace qst
