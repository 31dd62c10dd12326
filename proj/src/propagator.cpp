#include "qst/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qst/parallel.hpp"
#include "qst/tridiag.hpp"

namespace qst {

StateVector StateVector::localized(int n_sites, int site) {
  if (site < 0 || site >= n_sites)
    throw std::invalid_argument("StateVector::localized: site out of range");
  StateVector psi;
  psi.amplitudes.assign(static_cast<size_t>(n_sites), {0.0, 0.0});
  psi.amplitudes[static_cast<size_t>(site)] = {1.0, 0.0};
  return psi;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

double fidelity(const StateVector& final_state) {
  if (final_state.amplitudes.empty())
    throw std::invalid_argument("fidelity: empty state");
  const double f = std::norm(final_state.amplitudes.back());
  return std::clamp(f, 0.0, 1.0);
}

double average_state_fidelity(double f) {
  if (!(f >= 0.0 && f <= 1.0))
    throw std::invalid_argument(
        "average_state_fidelity: fidelity must lie in [0,1], got " +
        std::to_string(f));
  return 1.0 / 3.0 + (1.0 + f) * (1.0 + f) / 6.0;
}

namespace detail {

SpectralStepper::SpectralStepper(int n) {
  rotations_.reserve(static_cast<size_t>(n) * n);
}

void SpectralStepper::apply_exp(std::span<double> diag, std::span<double> sub,
                                double dt,
                                std::span<std::complex<double>> psi) {
  const int n = static_cast<int>(diag.size());
  rotations_.clear();
  ql_implicit_shift(diag, sub, [this](int i, double c, double s) {
    rotations_.push_back({i, c, s});
  });

  // psi <- V^T psi: the recorded rotations in order, transposed.
  for (const Rotation& r : rotations_) {
    const auto a = psi[r.i];
    const auto b = psi[r.i + 1];
    psi[r.i] = r.c * a - r.s * b;
    psi[r.i + 1] = r.s * a + r.c * b;
  }
  // Eigenbasis phases.
  for (int k = 0; k < n; ++k) {
    const double phase = -diag[k] * dt;
    psi[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  // psi <- V psi: rotations reversed, untransposed.
  for (auto it = rotations_.rbegin(); it != rotations_.rend(); ++it) {
    const auto a = psi[it->i];
    const auto b = psi[it->i + 1];
    psi[it->i] = it->c * a + it->s * b;
    psi[it->i + 1] = -it->s * a + it->c * b;
  }
}

namespace {

void check_initial(const StateVector& initial, int n_sites) {
  if (initial.size() != n_sites)
    throw std::invalid_argument("propagate: initial state has " +
                                std::to_string(initial.size()) +
                                " amplitudes, chain has " +
                                std::to_string(n_sites));
  if (std::abs(initial.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("propagate: initial state is not normalized");
}

long step_count(double t_star, const PropagationConfig& cfg) {
  if (!(t_star > 0.0))
    throw std::invalid_argument("propagate: t_star must be positive");
  if (cfg.steps_per_unit_time < 1)
    throw std::invalid_argument("propagate: steps_per_unit_time must be >= 1");
  return std::max<long>(
      1, static_cast<long>(std::ceil(t_star * cfg.steps_per_unit_time)));
}

TransferResult finish(std::vector<std::complex<double>> psi, double t_star) {
  TransferResult out;
  out.t_star = t_star;
  out.final_state = StateVector(std::move(psi));
  out.norm_drift = std::abs(out.final_state.norm() - 1.0);
  out.fidelity = fidelity(out.final_state);
  return out;
}

void rk4_derivative(std::span<const double> diag, std::span<const double> sub,
                    std::span<const std::complex<double>> x,
                    std::span<std::complex<double>> dx) {
  // dx = -i H x
  const int n = static_cast<int>(diag.size());
  const std::complex<double> minus_i{0.0, -1.0};
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc = diag[k] * x[k];
    if (k > 0) acc += sub[k - 1] * x[k - 1];
    if (k + 1 < n) acc += sub[k] * x[k + 1];
    dx[k] = minus_i * acc;
  }
}

}  // namespace

TransferResult propagate_sampled(int n_sites, const DriveSampler& drive,
                                 double t_star, const PropagationConfig& cfg,
                                 const StateVector& initial) {
  check_initial(initial, n_sites);
  const long n_steps = step_count(t_star, cfg);
  const double dt = t_star / static_cast<double>(n_steps);
  const int n = n_sites;

  std::vector<std::complex<double>> psi = initial.amplitudes;
  std::vector<double> j(static_cast<size_t>(n - 1));
  std::vector<double> b(static_cast<size_t>(n));
  std::vector<double> diag(static_cast<size_t>(n));
  std::vector<double> sub(static_cast<size_t>(n));

  auto sample_checked = [&](double t, long step) {
    drive(t, j, b);
    for (double x : j)
      if (!std::isfinite(x))
        throw PropagationError("propagate: non-finite coupling", step);
    for (double x : b)
      if (!std::isfinite(x))
        throw PropagationError("propagate: non-finite field", step);
  };

  if (cfg.method == Method::midpoint_spectral) {
    SpectralStepper stepper(n);
    for (long step = 0; step < n_steps; ++step) {
      const double t_mid = (static_cast<double>(step) + 0.5) * dt;
      sample_checked(std::min(t_mid, t_star), step);
      std::copy(b.begin(), b.end(), diag.begin());
      std::copy(j.begin(), j.end(), sub.begin());
      stepper.apply_exp(diag, sub, dt, psi);
    }
  } else {
    std::vector<std::complex<double>> k1(n), k2(n), k3(n), k4(n), tmp(n);
    std::vector<double> j2(static_cast<size_t>(n - 1)), b2(static_cast<size_t>(n));
    for (long step = 0; step < n_steps; ++step) {
      const double t0 = static_cast<double>(step) * dt;
      sample_checked(t0, step);
      rk4_derivative(b, j, psi, k1);
      sample_checked(std::min(t0 + 0.5 * dt, t_star), step);
      for (int k = 0; k < n; ++k) tmp[k] = psi[k] + 0.5 * dt * k1[k];
      rk4_derivative(b, j, tmp, k2);
      for (int k = 0; k < n; ++k) tmp[k] = psi[k] + 0.5 * dt * k2[k];
      rk4_derivative(b, j, tmp, k3);
      sample_checked(std::min(t0 + dt, t_star), step);
      for (int k = 0; k < n; ++k) tmp[k] = psi[k] + dt * k3[k];
      rk4_derivative(b, j, tmp, k4);
      for (int k = 0; k < n; ++k)
        psi[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
  }

  return finish(std::move(psi), t_star);
}

}  // namespace detail

TransferResult propagate(const Protocol& p, double t_star,
                         const PropagationConfig& cfg,
                         const StateVector& initial,
                         const DisorderOverlay* overlay) {
  const int n = p.chain().n_sites;
  if (overlay) {
    if (static_cast<int>(overlay->delta_j.size()) != n - 1 ||
        static_cast<int>(overlay->delta_b.size()) != n)
      throw std::invalid_argument("propagate: overlay size mismatch");
  }
  detail::DriveSampler drive = [&](double t, std::span<double> j,
                                   std::span<double> b) {
    p.sample_couplings(t, t_star, j);
    std::fill(b.begin(), b.end(), 0.0);
    if (overlay) {
      for (size_t i = 0; i < j.size(); ++i) j[i] *= 1.0 + overlay->delta_j[i];
      for (size_t i = 0; i < b.size(); ++i) b[i] += overlay->delta_b[i];
    }
  };
  return detail::propagate_sampled(n, drive, t_star, cfg, initial);
}

TransferResult propagate(const Protocol& p, double t_star,
                         const PropagationConfig& cfg) {
  return propagate(p, t_star, cfg, StateVector::localized(p.chain().n_sites, 0),
                   nullptr);
}

TransferResult propagate_static(const HamiltonianMatrix& h, double duration,
                                const PropagationConfig& cfg,
                                const StateVector& initial) {
  detail::DriveSampler drive = [&](double, std::span<double> j,
                                   std::span<double> b) {
    std::copy(h.off_diagonal().begin(), h.off_diagonal().end(), j.begin());
    std::copy(h.diagonal().begin(), h.diagonal().end(), b.begin());
  };
  return detail::propagate_sampled(h.dimension(), drive, duration, cfg,
                                   initial);
}

std::vector<SweepPoint> fidelity_sweep(const Protocol& p,
                                       std::span<const double> t_star_grid,
                                       const PropagationConfig& cfg,
                                       int n_workers) {
  for (size_t i = 0; i < t_star_grid.size(); ++i) {
    if (!(t_star_grid[i] > 0.0))
      throw std::invalid_argument("fidelity_sweep: grid must be positive");
    if (i > 0 && !(t_star_grid[i] > t_star_grid[i - 1]))
      throw std::invalid_argument(
          "fidelity_sweep: grid must be strictly increasing");
  }
  std::vector<SweepPoint> out(t_star_grid.size());
  parallel_for(static_cast<long>(t_star_grid.size()), n_workers, [&](long i) {
    const double ts = t_star_grid[static_cast<size_t>(i)];
    try {
      const TransferResult r = propagate(p, ts, cfg);
      out[static_cast<size_t>(i)] = SweepPoint{ts, r.fidelity};
    } catch (const PropagationError& e) {
      throw PropagationError(
          "fidelity_sweep: failure at t* = " + std::to_string(ts) + ": " +
              e.what(),
          e.step());
    }
  });
  return out;
}

std::optional<double> stabilization_time(std::span<const SweepPoint> curve,
                                         double threshold) {
  if (curve.empty())
    throw std::invalid_argument("stabilization_time: empty curve");
  // Walk backwards to the last point below threshold.
  std::optional<double> result;
  for (size_t i = curve.size(); i-- > 0;) {
    if (curve[i].fidelity < threshold) break;
    result = curve[i].t_star;
  }
  return result;
}

}  // namespace qst
