#include "qst/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qst/tridiag.hpp"

namespace qst {

ChainSpec::ChainSpec(int n_sites_, double j_max_)
    : n_sites(n_sites_), j_max(j_max_) {
  if (n_sites < 2)
    throw std::invalid_argument("ChainSpec: n_sites must be >= 2, got " +
                                std::to_string(n_sites));
  if (!(j_max > 0.0))
    throw std::invalid_argument("ChainSpec: j_max must be positive, got " +
                                std::to_string(j_max));
}

HamiltonianMatrix::HamiltonianMatrix(CouplingVector couplings,
                                     FieldVector fields)
    : diagonal_(std::move(fields.values)),
      off_diagonal_(std::move(couplings.values)) {
  if (off_diagonal_.size() + 1 != diagonal_.size())
    throw std::invalid_argument(
        "build_hamiltonian: need |couplings| = |fields| - 1, got " +
        std::to_string(off_diagonal_.size()) + " couplings and " +
        std::to_string(diagonal_.size()) + " fields");
}

void HamiltonianMatrix::apply(std::span<const std::complex<double>> x,
                              std::span<std::complex<double>> y) const {
  const int n = dimension();
  for (int i = 0; i < n; ++i) {
    std::complex<double> acc = diagonal_[i] * x[i];
    if (i > 0) acc += off_diagonal_[i - 1] * x[i - 1];
    if (i + 1 < n) acc += off_diagonal_[i] * x[i + 1];
    y[i] = acc;
  }
}

HamiltonianMatrix build_hamiltonian(const CouplingVector& couplings,
                                    const FieldVector& fields) {
  return HamiltonianMatrix(couplings, fields);
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

Spectrum eigendecompose(const HamiltonianMatrix& h) {
  if (!all_finite(h.diagonal()) || !all_finite(h.off_diagonal()))
    throw std::invalid_argument("eigendecompose: non-finite matrix entry");

  const int n = h.dimension();
  std::vector<double> d = h.diagonal();
  std::vector<double> e = h.off_diagonal();
  e.push_back(0.0);

  std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) v[static_cast<size_t>(j) * n + j] = 1.0;

  detail::ql_implicit_shift(d, e, detail::ColumnMajorSink{v.data(), n});

  // Sort ascending; stable on the pre-sort column index so degenerate
  // eigenvalues come out in a fixed order.
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&d](int a, int b) { return d[a] < d[b]; });

  Spectrum s;
  s.dimension = n;
  s.eigenvalues.resize(static_cast<size_t>(n));
  s.eigenvectors.resize(static_cast<size_t>(n) * n);
  for (int m = 0; m < n; ++m) {
    const int src = order[m];
    s.eigenvalues[m] = d[src];
    const double* col = v.data() + static_cast<size_t>(src) * n;
    double* dst = s.eigenvectors.data() + static_cast<size_t>(m) * n;
    // Fix the overall sign: largest-magnitude component positive, ties
    // broken by lowest index.
    int peak = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(col[k]) > std::abs(col[peak])) peak = k;
    const double sign = col[peak] < 0.0 ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) dst[k] = sign * col[k];
  }
  return s;
}

std::vector<double> eigenvalues_of(const HamiltonianMatrix& h) {
  if (!all_finite(h.diagonal()) || !all_finite(h.off_diagonal()))
    throw std::invalid_argument("eigenvalues_of: non-finite matrix entry");
  std::vector<double> d = h.diagonal();
  std::vector<double> e = h.off_diagonal();
  e.push_back(0.0);
  detail::ql_implicit_shift(d, e, detail::NullSink{});
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> ssh_pair_energies(double j_odd, double j_even,
                                      int n_sites) {
  if (n_sites % 2 == 0 || n_sites < 3)
    throw std::invalid_argument(
        "ssh_pair_energies: chain length must be odd and >= 3, got " +
        std::to_string(n_sites));
  if (j_odd < 0.0 || j_even < 0.0)
    throw std::invalid_argument("ssh_pair_energies: couplings must be >= 0");

  const int pairs = n_sites / 2;
  std::vector<double> eps(static_cast<size_t>(pairs));
  for (int j = 1; j <= pairs; ++j) {
    const double q = 2.0 * j * std::numbers::pi / (n_sites + 1);
    eps[j - 1] = std::abs(j_odd + j_even * std::polar(1.0, q));
  }
  return eps;
}

double ssh_half_gap(double j_odd, double j_even, int n_sites) {
  return ssh_pair_energies(j_odd, j_even, n_sites).back();
}

double ssh_gap(double j_odd, double j_even, int n_sites) {
  return 2.0 * ssh_half_gap(j_odd, j_even, n_sites);
}

ZeroMode zero_mode(const Spectrum& s) {
  int best = 0;
  for (int m = 1; m < s.dimension; ++m)
    if (std::abs(s.eigenvalues[m]) < std::abs(s.eigenvalues[best])) best = m;
  auto col = s.eigenvector(best);
  return ZeroMode{best, {col.begin(), col.end()}};
}

}  // namespace qst
