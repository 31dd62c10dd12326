#include "qst/disorder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qst/parallel.hpp"

namespace qst {

namespace detail {

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t Splitmix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Splitmix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

namespace {

// Fixed-order pairwise sum: deterministic and exact for n identical values
// when n is a power of two.
double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 4) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
  }
  const size_t half = x.size() / 2;
  return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

}  // namespace

}  // namespace detail

DisorderRealization sample_realization(const DisorderSpec& spec, int n_sites,
                                       std::int64_t realization_index) {
  if (spec.strength < 0.0)
    throw std::invalid_argument("sample_realization: strength must be >= 0");
  DisorderRealization r;
  r.realization_index = realization_index;
  r.delta_j.assign(static_cast<size_t>(n_sites - 1), 0.0);
  r.delta_b.assign(static_cast<size_t>(n_sites), 0.0);

  detail::Splitmix64 rng(detail::stream_seed(
      spec.master_seed, static_cast<std::uint64_t>(realization_index)));
  auto draw = [&] { return spec.strength * (2.0 * rng.uniform01() - 1.0); };

  switch (spec.kind) {
    case DisorderKind::off_diagonal:
      for (auto& d : r.delta_j) d = draw();
      break;
    case DisorderKind::diagonal_all:
      for (auto& d : r.delta_b) d = draw();
      break;
    case DisorderKind::diagonal_edge_exempt:
      for (auto& d : r.delta_b) d = draw();
      r.delta_b.front() = 0.0;
      r.delta_b.back() = 0.0;
      break;
  }
  return r;
}

std::pair<CouplingVector, FieldVector> apply_disorder(
    const CouplingVector& j, const FieldVector& b,
    const DisorderRealization& r) {
  if (j.values.size() != r.delta_j.size() ||
      b.values.size() != r.delta_b.size())
    throw std::invalid_argument(
        "apply_disorder: dimension mismatch: " +
        std::to_string(j.values.size()) + " couplings vs " +
        std::to_string(r.delta_j.size()) + " delta_j, " +
        std::to_string(b.values.size()) + " fields vs " +
        std::to_string(r.delta_b.size()) + " delta_b");
  CouplingVector jd = j;
  FieldVector bd = b;
  for (size_t i = 0; i < jd.values.size(); ++i)
    jd.values[i] *= 1.0 + r.delta_j[i];
  for (size_t i = 0; i < bd.values.size(); ++i)
    bd.values[i] += r.delta_b[i];
  return {std::move(jd), std::move(bd)};
}

EnsembleStats ensemble_sweep(const Protocol& p,
                             std::span<const double> t_star_grid,
                             const DisorderSpec& spec, int n_realizations,
                             const PropagationConfig& cfg, int n_workers) {
  if (n_realizations < 2)
    throw std::invalid_argument("ensemble_sweep: need >= 2 realizations");
  const int n_sites = p.chain().n_sites;
  const size_t n_grid = t_star_grid.size();
  const StateVector initial = StateVector::localized(n_sites, 0);

  // fidelities[r * n_grid + g]; filled by index so worker count is
  // irrelevant to the result.
  std::vector<double> fidelities(static_cast<size_t>(n_realizations) * n_grid);
  parallel_for(n_realizations, n_workers, [&](long r) {
    const DisorderRealization realization =
        sample_realization(spec, n_sites, r);
    const DisorderOverlay overlay = realization.overlay();
    for (size_t g = 0; g < n_grid; ++g) {
      try {
        const TransferResult result =
            propagate(p, t_star_grid[g], cfg, initial, &overlay);
        fidelities[static_cast<size_t>(r) * n_grid + g] = result.fidelity;
      } catch (const PropagationError& e) {
        throw PropagationError("ensemble_sweep: realization " +
                                   std::to_string(r) + " failed: " + e.what(),
                               e.step());
      }
    }
  });

  EnsembleStats stats;
  stats.t_star_grid.assign(t_star_grid.begin(), t_star_grid.end());
  stats.n_realizations = n_realizations;
  stats.spec = spec;
  stats.mean_fidelity.resize(n_grid);
  stats.std_fidelity.resize(n_grid);

  std::vector<double> column(static_cast<size_t>(n_realizations));
  for (size_t g = 0; g < n_grid; ++g) {
    for (long r = 0; r < n_realizations; ++r)
      column[static_cast<size_t>(r)] =
          fidelities[static_cast<size_t>(r) * n_grid + g];
    const double mean = detail::pairwise_sum(column) / n_realizations;
    stats.mean_fidelity[g] = mean;
    for (auto& v : column) {
      const double d = v - mean;
      v = d * d;
    }
    stats.std_fidelity[g] =
        std::sqrt(detail::pairwise_sum(column) / n_realizations);
  }
  return stats;
}

}  // namespace qst
