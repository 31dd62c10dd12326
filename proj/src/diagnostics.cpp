#include "qst/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qst {

namespace detail {

SpectralTrace spectral_trace_sampled(int n_sites,
                                     const CouplingSampler& couplings,
                                     double t_star, int n_samples) {
  if (n_samples < 2)
    throw std::invalid_argument("spectral_trace: need at least 2 samples");
  SpectralTrace trace;
  trace.times.resize(static_cast<size_t>(n_samples));
  trace.energies.resize(static_cast<size_t>(n_samples));
  CouplingVector j;
  j.values.resize(static_cast<size_t>(n_sites - 1));
  for (int k = 0; k < n_samples; ++k) {
    const double t = t_star * k / (n_samples - 1);
    couplings(t, j.values);
    trace.times[k] = t;
    trace.energies[k] =
        eigenvalues_of(build_hamiltonian(j, FieldVector::zero(n_sites)));
  }
  return trace;
}

double adiabaticity_measure_sampled(int n_sites,
                                    const CouplingSampler& couplings,
                                    const CouplingSampler& coupling_rates,
                                    double t, double epsilon0) {
  CouplingVector j;
  j.values.resize(static_cast<size_t>(n_sites - 1));
  couplings(t, j.values);
  const Spectrum s =
      eigendecompose(build_hamiltonian(j, FieldVector::zero(n_sites)));

  int n0 = 0;
  for (int m = 1; m < s.dimension; ++m)
    if (std::abs(s.eigenvalues[m]) < std::abs(s.eigenvalues[n0])) n0 = m;
  const double e0 = s.eigenvalues[n0];

  double gap = std::numeric_limits<double>::infinity();
  if (n0 > 0) gap = std::min(gap, e0 - s.eigenvalues[n0 - 1]);
  if (n0 + 1 < s.dimension) gap = std::min(gap, s.eigenvalues[n0 + 1] - e0);
  if (!(gap > epsilon0)) throw DegenerateSpectrumError(t, gap);

  // dH/dt is tridiagonal with the coupling rates off the diagonal (the
  // fields are static, so its diagonal vanishes).
  std::vector<double> rates(static_cast<size_t>(n_sites - 1));
  coupling_rates(t, rates);

  const auto v0 = s.eigenvector(n0);
  std::vector<double> w(static_cast<size_t>(n_sites));
  for (int k = 0; k < n_sites; ++k) {
    double acc = 0.0;
    if (k > 0) acc += rates[k - 1] * v0[k - 1];
    if (k + 1 < n_sites) acc += rates[k] * v0[k + 1];
    w[k] = acc;
  }

  double sum = 0.0;
  for (int m = 0; m < s.dimension; ++m) {
    if (m == n0) continue;
    const auto vm = s.eigenvector(m);
    double elem = 0.0;
    for (int k = 0; k < n_sites; ++k) elem += vm[k] * w[k];
    sum += std::abs(elem / (s.eigenvalues[m] - e0));
  }
  return sum;
}

}  // namespace detail

SpectralTrace spectral_trace(const Protocol& p, double t_star,
                             int n_samples) {
  const int n = p.chain().n_sites;
  return detail::spectral_trace_sampled(
      n,
      [&](double t, std::span<double> j) { p.sample_couplings(t, t_star, j); },
      t_star, n_samples);
}

double adiabaticity_measure(const Protocol& p, double t_star, double t,
                            double epsilon0) {
  const int n = p.chain().n_sites;
  return detail::adiabaticity_measure_sampled(
      n,
      [&](double tt, std::span<double> j) {
        p.sample_couplings(tt, t_star, j);
      },
      [&](double tt, std::span<double> j) {
        p.sample_derivative(tt, t_star, j);
      },
      t, epsilon0);
}

AdiabaticityReport adiabaticity_report(const Protocol& p, double t_star,
                                       int n_samples, double epsilon0) {
  if (n_samples < 2)
    throw std::invalid_argument(
        "adiabaticity_report: need at least 2 samples");
  AdiabaticityReport report;
  report.min_gap_seen = std::numeric_limits<double>::infinity();
  report.times.resize(static_cast<size_t>(n_samples));
  report.values.resize(static_cast<size_t>(n_samples));

  const int n = p.chain().n_sites;
  CouplingVector j;
  j.values.resize(static_cast<size_t>(n - 1));
  for (int k = 0; k < n_samples; ++k) {
    const double t = t_star * k / (n_samples - 1);
    report.times[k] = t;
    report.values[k] = adiabaticity_measure(p, t_star, t, epsilon0);

    p.sample_couplings(t, t_star, j.values);
    const auto ev =
        eigenvalues_of(build_hamiltonian(j, FieldVector::zero(n)));
    int z = 0;
    for (int m = 1; m < n; ++m)
      if (std::abs(ev[m]) < std::abs(ev[z])) z = m;
    double gap = std::numeric_limits<double>::infinity();
    if (z > 0) gap = std::min(gap, ev[z] - ev[z - 1]);
    if (z + 1 < n) gap = std::min(gap, ev[z + 1] - ev[z]);
    report.min_gap_seen = std::min(report.min_gap_seen, gap);
  }
  return report;
}

}  // namespace qst
