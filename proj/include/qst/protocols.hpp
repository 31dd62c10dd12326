#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qst/core.hpp"

namespace qst {

enum class CrabBasis { fourier, polynomial };

/// Truncated-basis correction applied multiplicatively on top of a base
/// driving function. The correction enters as
///
///   J_i(t) -> clamp( J_i(t) * (1 + env(s) * sum_k c_k f_k(s)), 0, j_max )
///
/// with s = t/t*, env(s) = sin(pi s) (zero at both endpoints, so the
/// boundary conditions of the base protocol survive), f_k(s) = sin(w_k s)
/// for the fourier basis and f_k(s) = P_k(2s-1) (Legendre) for the
/// polynomial one. Frequencies are only used by the fourier basis and are
/// typically randomized around harmonics by the optimizer.
struct CrabCorrection {
  CrabBasis basis = CrabBasis::fourier;
  int n_terms = 0;
  std::vector<double> coefficients;
  std::vector<double> frequencies;

  /// sum_k c_k f_k(s) and its derivative with respect to s.
  double series(double s) const;
  double series_derivative(double s) const;
};

/// A parameterized driving function mapping (t, t*) to the instantaneous
/// coupling profile of the chain. Immutable value object; sampling is pure.
///
/// Three base kinds:
///   cosine        J_odd = b (1 - cos(pi t/t*)),  J_even = b (1 + cos(pi t/t*))
///   exponential   J_odd = (1 - e^{-a t/t*}) / (1 - e^{-a}),
///                 J_even = (1 - e^{-a (t*-t)/t*}) / (1 - e^{-a})
///   trivial       J_1 = t/t*, J_{N-1} = 1 - t/t*, all interior couplings 1
///
/// All three start with site 1 decoupled (J_1 = 0) and end with site N
/// decoupled (J_{N-1} = 0). Odd chain length is required so the zero mode
/// exists throughout the drive.
class Protocol {
 public:
  enum class Kind { cosine, exponential, trivial_linear };

  static Protocol cosine(const ChainSpec& chain, double b = 0.5);
  static Protocol exponential(const ChainSpec& chain, double alpha = 6.0);
  static Protocol trivial_linear(const ChainSpec& chain);

  Kind kind() const { return kind_; }
  const ChainSpec& chain() const { return chain_; }
  /// Shape parameter: b for cosine, alpha for exponential, unused otherwise.
  double parameter() const { return param_; }
  bool is_dressed() const { return correction_.has_value(); }
  const CrabCorrection& correction() const { return *correction_; }

  /// Copy of this protocol with a multiplicative correction attached.
  Protocol with_correction(CrabCorrection c) const;
  /// Copy with the correction removed.
  Protocol base() const;

  CouplingVector couplings_at(double t, double t_star) const;
  CouplingVector couplings_derivative_at(double t, double t_star) const;

  /// Allocation-free sampling for hot loops; out must have N-1 entries.
  void sample_couplings(double t, double t_star, std::span<double> out) const;
  void sample_derivative(double t, double t_star, std::span<double> out) const;

 private:
  Protocol(Kind kind, const ChainSpec& chain, double param);

  Kind kind_;
  ChainSpec chain_;
  double param_;
  std::optional<CrabCorrection> correction_;
};

struct GapMinimum {
  double half_gap;  // smallest sampled distance from the zero mode to the
                    // nearest other level
  double t;         // sample time where it occurs (earliest on ties)
};

/// Scans the instantaneous spectrum of H(t) on a uniform grid of
/// n_time_samples points over [0, t*] and returns the minimal half-gap.
GapMinimum min_gap(const Protocol& p, double t_star,
                   int n_time_samples = 1001);

}  // namespace qst
