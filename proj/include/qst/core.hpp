#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qst {

/// Chain geometry and normalization. All energies are reported in units of
/// j_max and times in units of 1/j_max; sites are numbered 1..N in the
/// documentation (storage is 0-based).
struct ChainSpec {
  int n_sites;
  double j_max;

  explicit ChainSpec(int n_sites, double j_max = 1.0);
};

/// Nearest-neighbour couplings J_1..J_{N-1}; values[i-1] couples sites i and
/// i+1. Odd/even refers to the 1-based coupling index.
struct CouplingVector {
  std::vector<double> values;

  CouplingVector() = default;
  explicit CouplingVector(std::vector<double> v) : values(std::move(v)) {}
  int size() const { return static_cast<int>(values.size()); }
};

/// On-site fields B_1..B_N. Identically zero for every unperturbed protocol.
struct FieldVector {
  std::vector<double> values;

  FieldVector() = default;
  explicit FieldVector(std::vector<double> v) : values(std::move(v)) {}
  static FieldVector zero(int n_sites) {
    return FieldVector(std::vector<double>(static_cast<size_t>(n_sites), 0.0));
  }
  int size() const { return static_cast<int>(values.size()); }
};

/// Single-excitation Hamiltonian: real symmetric tridiagonal with the local
/// fields on the diagonal and the couplings on the first off-diagonals.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(CouplingVector couplings, FieldVector fields);

  int dimension() const { return static_cast<int>(diagonal_.size()); }
  const std::vector<double>& diagonal() const { return diagonal_; }
  const std::vector<double>& off_diagonal() const { return off_diagonal_; }

  /// y = H x for a complex amplitude vector.
  void apply(std::span<const std::complex<double>> x,
             std::span<std::complex<double>> y) const;

 private:
  std::vector<double> diagonal_;      // N entries
  std::vector<double> off_diagonal_;  // N-1 entries
};

HamiltonianMatrix build_hamiltonian(const CouplingVector& couplings,
                                    const FieldVector& fields);

/// Full eigensystem of a HamiltonianMatrix. Eigenvalues ascending;
/// eigenvectors stored column-major, column m paired with eigenvalue m.
/// Sign convention: the largest-magnitude component of each eigenvector is
/// positive (ties broken by lowest index), so repeated runs are identical.
struct Spectrum {
  int dimension = 0;
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;  // dimension x dimension, column-major

  std::span<const double> eigenvector(int m) const {
    return {eigenvectors.data() + static_cast<size_t>(m) * dimension,
            static_cast<size_t>(dimension)};
  }
};

Spectrum eigendecompose(const HamiltonianMatrix& h);

/// Eigenvalues only (ascending); cheaper than eigendecompose when the
/// eigenvectors are not needed.
std::vector<double> eigenvalues_of(const HamiltonianMatrix& h);

/// Analytic pair energies of a dimerized open chain with odd N and zero
/// field: eps_j = |j_odd + j_even e^{i q_j}| with q_j = 2 j pi / (N+1),
/// j = 1..floor(N/2). The nonzero spectrum is {+-eps_j}; eps decreases with
/// j, so eps_{floor(N/2)} is the distance from the zero mode to the nearest
/// band state.
std::vector<double> ssh_pair_energies(double j_odd, double j_even,
                                      int n_sites);

/// Band gap 2*eps_{floor(N/2)} of the dimerized odd chain.
double ssh_gap(double j_odd, double j_even, int n_sites);

/// eps_{floor(N/2)} itself: the zero-mode-to-band distance.
double ssh_half_gap(double j_odd, double j_even, int n_sites);

struct ZeroMode {
  int index;                   // position in the ascending spectrum
  std::vector<double> vector;  // the eigenvector
};

/// Eigenpair with minimal |E|. For zero field and odd N this is the chiral
/// edge mode, supported on odd sites only.
ZeroMode zero_mode(const Spectrum& s);

}  // namespace qst
