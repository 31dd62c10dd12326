#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qst/core.hpp"
#include "qst/protocols.hpp"

namespace qst {

/// Normalized complex amplitudes over the chain sites.
struct StateVector {
  std::vector<std::complex<double>> amplitudes;

  StateVector() = default;
  explicit StateVector(std::vector<std::complex<double>> a)
      : amplitudes(std::move(a)) {}

  /// Unit vector on one site (0-based index; site 0 is the first site).
  static StateVector localized(int n_sites, int site);

  int size() const { return static_cast<int>(amplitudes.size()); }
  double norm() const;
};

enum class Method {
  midpoint_spectral,  // exact exponential of the midpoint Hamiltonian per
                      // step, applied through its tridiagonal eigensystem;
                      // unitary at any step size
  rk4_reference       // classical RK4 on the Schrodinger equation, kept as
                      // an independent cross-check
};

struct PropagationConfig {
  int steps_per_unit_time = 200;
  Method method = Method::midpoint_spectral;
};

struct TransferResult {
  double fidelity = 0.0;    // |<N|psi(t*)>|^2, clamped to [0,1]
  StateVector final_state;
  double norm_drift = 0.0;  // | ||psi(t*)|| - 1 |
  double t_star = 0.0;
};

/// Raised when the integration itself fails (non-finite Hamiltonian entry,
/// diverging state). Carries the offending step.
class PropagationError : public std::runtime_error {
 public:
  PropagationError(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Static multiplicative/additive noise folded into the drive at every
/// step: J_i <- J_i (1 + delta_j[i]), B_i <- B_i + delta_b[i]. Pointers are
/// borrowed for the duration of the call.
struct DisorderOverlay {
  std::span<const double> delta_j;
  std::span<const double> delta_b;
};

/// Evolves the state under H(t) built from the protocol's instantaneous
/// couplings (plus an optional frozen disorder overlay) from t = 0 to
/// t = t_star. The default initial state is the excitation localized on
/// site 1.
TransferResult propagate(const Protocol& p, double t_star,
                         const PropagationConfig& cfg = {});
TransferResult propagate(const Protocol& p, double t_star,
                         const PropagationConfig& cfg,
                         const StateVector& initial,
                         const DisorderOverlay* overlay = nullptr);

/// Free evolution under a fixed Hamiltonian.
TransferResult propagate_static(const HamiltonianMatrix& h, double duration,
                                const PropagationConfig& cfg,
                                const StateVector& initial);

/// Squared overlap with the last-site excitation.
double fidelity(const StateVector& final_state);

/// Average fidelity over all pure input states for a channel that moves
/// the site-1 excitation to site N with amplitude fidelity f:
/// 1/3 + (1+f)^2/6.
double average_state_fidelity(double f);

struct SweepPoint {
  double t_star;
  double fidelity;
};

/// One independent propagation per grid point; order-preserving. Grid must
/// be strictly increasing and positive. Results are identical for any
/// worker count (0 = hardware concurrency).
std::vector<SweepPoint> fidelity_sweep(const Protocol& p,
                                       std::span<const double> t_star_grid,
                                       const PropagationConfig& cfg = {},
                                       int n_workers = 1);

/// Smallest grid t* from which the curve stays at or above the threshold
/// for every later grid point; nullopt if the curve ends below it.
std::optional<double> stabilization_time(std::span<const SweepPoint> curve,
                                         double threshold = 0.9);

namespace detail {

/// Drive callback: fills couplings (n-1 entries) and fields (n entries) at
/// time t. Used by the integrators; the Protocol overloads wrap it.
using DriveSampler =
    std::function<void(double t, std::span<double> j, std::span<double> b)>;

TransferResult propagate_sampled(int n_sites, const DriveSampler& drive,
                                 double t_star, const PropagationConfig& cfg,
                                 const StateVector& initial);

/// psi <- exp(-i T dt) psi for the symmetric tridiagonal T = (diag, sub).
/// diag and sub are destroyed; sub needs n entries (last is scratch).
/// Reusable across steps; owns only scratch buffers.
class SpectralStepper {
 public:
  explicit SpectralStepper(int n);
  void apply_exp(std::span<double> diag, std::span<double> sub, double dt,
                 std::span<std::complex<double>> psi);

 private:
  struct Rotation {
    int i;
    double c, s;
  };
  std::vector<Rotation> rotations_;
};

}  // namespace detail

}  // namespace qst
