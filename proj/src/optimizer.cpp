#include "qst/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qst/disorder.hpp"  // detail::stream_seed / Splitmix64
#include "qst/parallel.hpp"

namespace qst {

Protocol dress(const Protocol& base, CrabCorrection c) {
  if (base.is_dressed())
    throw std::invalid_argument("dress: base protocol is already dressed");
  if (static_cast<int>(c.coefficients.size()) != c.n_terms)
    throw std::invalid_argument(
        "dress: n_terms = " + std::to_string(c.n_terms) + " but " +
        std::to_string(c.coefficients.size()) + " coefficients given");
  if (c.basis == CrabBasis::fourier &&
      static_cast<int>(c.frequencies.size()) != c.n_terms)
    throw std::invalid_argument(
        "dress: fourier basis needs one frequency per term");
  return base.with_correction(std::move(c));
}

double objective(const Protocol& p, double t_star,
                 const PropagationConfig& cfg) {
  return propagate(p, t_star, cfg).fidelity;
}

namespace {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;  // maximized objective at x
  int n_evaluations = 0;
  bool converged = false;
};

// Nelder-Mead maximization with standard reflection/expansion/contraction/
// shrink coefficients. Stops when the value spread falls below tol or the
// evaluation budget runs out.
SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, double step, int max_evals, double tol) {
  const size_t dim = x0.size();
  struct Vertex {
    std::vector<double> x;
    double value;
  };
  SimplexResult result;
  result.x = x0;

  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++result.n_evaluations;
    if (v > result.value || result.n_evaluations == 1) {
      result.value = v;
      result.x = x;
    }
    return v;
  };

  std::vector<Vertex> simplex;
  simplex.push_back({x0, eval(x0)});
  for (size_t k = 0; k < dim && result.n_evaluations < max_evals; ++k) {
    std::vector<double> x = x0;
    x[k] += step;
    simplex.push_back({x, eval(x)});
  }

  while (result.n_evaluations < max_evals &&
         simplex.size() == dim + 1) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) {
                       return a.value > b.value;  // best first
                     });
    if (simplex.front().value - simplex.back().value < tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (size_t v = 0; v < dim; ++v)
      for (size_t k = 0; k < dim; ++k) centroid[k] += simplex[v].x[k];
    for (auto& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double coeff) {
      std::vector<double> x(dim);
      for (size_t k = 0; k < dim; ++k)
        x[k] = centroid[k] + coeff * (centroid[k] - simplex.back().x[k]);
      return x;
    };

    const auto reflected = blend(1.0);
    const double fr = eval(reflected);
    if (fr > simplex.front().value) {
      if (result.n_evaluations >= max_evals) break;
      const auto expanded = blend(2.0);
      const double fe = eval(expanded);
      simplex.back() = fe > fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
    } else if (fr > simplex[dim - 1].value) {
      simplex.back() = {reflected, fr};
    } else {
      if (result.n_evaluations >= max_evals) break;
      const auto contracted = blend(-0.5);
      const double fc = eval(contracted);
      if (fc > simplex.back().value) {
        simplex.back() = {contracted, fc};
      } else {
        // Shrink toward the best vertex.
        for (size_t v = 1; v <= dim; ++v) {
          for (size_t k = 0; k < dim; ++k)
            simplex[v].x[k] =
                simplex[0].x[k] + 0.5 * (simplex[v].x[k] - simplex[0].x[k]);
          if (result.n_evaluations >= max_evals) return result;
          simplex[v].value = eval(simplex[v].x);
        }
      }
    }
  }
  return result;
}

std::vector<double> randomized_frequencies(int n_terms, std::uint64_t seed,
                                           int start_index) {
  // Harmonics pi*(k+1), each detuned by up to +-50%.
  detail::Splitmix64 rng(
      detail::stream_seed(seed, static_cast<std::uint64_t>(start_index)));
  std::vector<double> w(static_cast<size_t>(n_terms));
  for (int k = 0; k < n_terms; ++k) {
    const double detune = rng.uniform01() - 0.5;
    w[k] = std::numbers::pi * (k + 1) * (1.0 + detune);
  }
  return w;
}

}  // namespace

OptimizationResult optimize(const Protocol& base, double t_star,
                            const BasisConfig& basis_cfg,
                            const SearchConfig& search_cfg,
                            const PropagationConfig& cfg) {
  if (basis_cfg.n_terms < 0)
    throw std::invalid_argument("optimize: n_terms must be >= 0");
  if (search_cfg.n_starts < 1)
    throw std::invalid_argument("optimize: need at least one start");

  OptimizationResult result;
  result.basis = basis_cfg.basis;
  result.seed = search_cfg.seed;
  result.guess_fidelity = objective(base, t_star, cfg);
  result.n_evaluations = 1;

  if (basis_cfg.n_terms == 0) {
    result.best_fidelity = result.guess_fidelity;
    result.converged = true;
    return result;
  }

  struct Start {
    std::vector<double> frequencies;
    SimplexResult search;
  };
  std::vector<Start> starts(static_cast<size_t>(search_cfg.n_starts));
  parallel_for(search_cfg.n_starts, search_cfg.n_workers, [&](long s) {
    Start& start = starts[static_cast<size_t>(s)];
    if (basis_cfg.basis == CrabBasis::fourier)
      start.frequencies = randomized_frequencies(
          basis_cfg.n_terms, search_cfg.seed, static_cast<int>(s));
    auto evaluate = [&](const std::vector<double>& coeffs) {
      CrabCorrection c;
      c.basis = basis_cfg.basis;
      c.n_terms = basis_cfg.n_terms;
      c.coefficients = coeffs;
      c.frequencies = start.frequencies;
      return objective(dress(base, std::move(c)), t_star, cfg);
    };
    start.search = nelder_mead(
        evaluate, std::vector<double>(static_cast<size_t>(basis_cfg.n_terms)),
        search_cfg.initial_step, search_cfg.max_evals_per_start,
        search_cfg.simplex_tol);
  });

  int winner = 0;
  for (int s = 1; s < search_cfg.n_starts; ++s)
    if (starts[s].search.value > starts[winner].search.value) winner = s;

  const Start& best = starts[static_cast<size_t>(winner)];
  result.best_coefficients = best.search.x;
  result.best_frequencies = best.frequencies;
  result.best_fidelity = best.search.value;
  result.converged = best.search.converged;
  result.best_start = winner;
  for (const Start& s : starts) result.n_evaluations += s.search.n_evaluations;

  // The undressed guess is always a candidate.
  if (result.guess_fidelity > result.best_fidelity) {
    result.best_fidelity = result.guess_fidelity;
    std::fill(result.best_coefficients.begin(),
              result.best_coefficients.end(), 0.0);
  }
  return result;
}

}  // namespace qst
