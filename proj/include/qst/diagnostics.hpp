#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qst/protocols.hpp"

namespace qst {

/// Instantaneous eigenvalues of H(t) along the drive: energies[k] holds the
/// ascending spectrum at times[k].
struct SpectralTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> energies;
};

/// Adiabaticity diagnostic along the drive: values[k] is the rate sum at
/// times[k]; min_gap_seen is the smallest zero-mode gap encountered.
struct AdiabaticityReport {
  std::vector<double> times;
  std::vector<double> values;
  double min_gap_seen = 0.0;
};

/// Raised when the zero mode is not separated from the rest of the
/// spectrum well enough for the rate sum to be meaningful.
class DegenerateSpectrumError : public std::runtime_error {
 public:
  DegenerateSpectrumError(double t, double gap)
      : std::runtime_error("degenerate spectrum at t = " + std::to_string(t) +
                           ": zero-mode gap " + std::to_string(gap)),
        t_(t),
        gap_(gap) {}
  double t() const { return t_; }
  double gap() const { return gap_; }

 private:
  double t_, gap_;
};

SpectralTrace spectral_trace(const Protocol& p, double t_star, int n_samples);

/// Sum over excited modes m of |<m|dH/dt|n0> / (E_m - E_n0)| with n0 the
/// zero mode, the standard figure of merit for adiabatic following.
/// Absolute values are taken per term so cancellations cannot mask the
/// drive strength. The zero-mode gap must exceed epsilon0.
double adiabaticity_measure(const Protocol& p, double t_star, double t,
                            double epsilon0 = 1e-6);

AdiabaticityReport adiabaticity_report(const Protocol& p, double t_star,
                                       int n_samples, double epsilon0 = 1e-6);

namespace detail {

/// Fills n-1 coupling values at time t.
using CouplingSampler = std::function<void(double t, std::span<double> j)>;

SpectralTrace spectral_trace_sampled(int n_sites,
                                     const CouplingSampler& couplings,
                                     double t_star, int n_samples);

double adiabaticity_measure_sampled(int n_sites,
                                    const CouplingSampler& couplings,
                                    const CouplingSampler& coupling_rates,
                                    double t, double epsilon0);

}  // namespace detail

}  // namespace qst
