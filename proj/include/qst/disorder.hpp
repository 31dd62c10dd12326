#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qst/propagator.hpp"
#include "qst/protocols.hpp"

namespace qst {

enum class DisorderKind {
  off_diagonal,          // multiplicative noise on the couplings only
  diagonal_all,          // additive field noise on every site
  diagonal_edge_exempt,  // additive field noise with sites 1 and N exempt
};

/// Static-noise ensemble description. strength is in units of j_max; draws
/// are uniform on [-strength, strength). Every realization is a pure
/// function of (master_seed, realization_index).
struct DisorderSpec {
  double strength = 0.0;
  DisorderKind kind = DisorderKind::off_diagonal;
  std::uint64_t master_seed = 0;
};

/// One frozen noise profile: J_i -> J_i (1 + delta_j[i]) and
/// B_i -> B_i + delta_b[i], fixed for the whole evolution.
struct DisorderRealization {
  std::vector<double> delta_j;  // N-1 entries
  std::vector<double> delta_b;  // N entries
  std::int64_t realization_index = 0;

  DisorderOverlay overlay() const { return {delta_j, delta_b}; }
};

DisorderRealization sample_realization(const DisorderSpec& spec, int n_sites,
                                       std::int64_t realization_index);

/// Applies a realization: couplings multiplicatively (a zero coupling stays
/// zero), fields additively.
std::pair<CouplingVector, FieldVector> apply_disorder(
    const CouplingVector& j, const FieldVector& b,
    const DisorderRealization& r);

/// Per-t* fidelity statistics over a disorder ensemble. Bit-identical for
/// any worker count and reproducible from (spec, grid, n_realizations,
/// propagation config).
struct EnsembleStats {
  std::vector<double> t_star_grid;
  std::vector<double> mean_fidelity;
  std::vector<double> std_fidelity;  // population standard deviation
  int n_realizations = 0;
  DisorderSpec spec;
};

EnsembleStats ensemble_sweep(const Protocol& p,
                             std::span<const double> t_star_grid,
                             const DisorderSpec& spec, int n_realizations,
                             const PropagationConfig& cfg = {},
                             int n_workers = 1);

namespace detail {

/// Counter-based stream seed: one independent, reproducible stream per
/// (master_seed, counter) pair.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t counter);

/// Minimal splitmix64 generator; used instead of std:: distributions so
/// the draws are identical on every platform.
class Splitmix64 {
 public:
  explicit Splitmix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform01();

 private:
  std::uint64_t state_;
};

}  // namespace detail

}  // namespace qst
