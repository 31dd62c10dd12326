#include "qst/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qst {

namespace {

constexpr double pi = std::numbers::pi;

// Boundary-preserving envelope: exactly zero at both endpoints.
double envelope(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::sin(pi * s);
}

double envelope_derivative(double s) { return pi * std::cos(pi * s); }

}  // namespace

double CrabCorrection::series(double s) const {
  double acc = 0.0;
  if (basis == CrabBasis::fourier) {
    for (size_t k = 0; k < coefficients.size(); ++k)
      acc += coefficients[k] * std::sin(frequencies[k] * s);
  } else {
    // Legendre P_k(2s-1) by upward recurrence.
    const double x = 2.0 * s - 1.0;
    double pkm1 = 1.0, pk = x;
    for (size_t k = 0; k < coefficients.size(); ++k) {
      double value;
      if (k == 0) {
        value = 1.0;
      } else if (k == 1) {
        value = x;
      } else {
        const double next =
            ((2.0 * k - 1.0) * x * pk - (k - 1.0) * pkm1) / static_cast<double>(k);
        pkm1 = pk;
        pk = next;
        value = next;
      }
      acc += coefficients[k] * value;
    }
  }
  return acc;
}

double CrabCorrection::series_derivative(double s) const {
  double acc = 0.0;
  if (basis == CrabBasis::fourier) {
    for (size_t k = 0; k < coefficients.size(); ++k)
      acc += coefficients[k] * frequencies[k] * std::cos(frequencies[k] * s);
  } else {
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k, chain rule gives a factor 2.
    const double x = 2.0 * s - 1.0;
    double pkm1 = 1.0, pk = x;      // P_{k-1}, P_k
    double dkm1 = 0.0, dk = 1.0;    // P'_{k-1}, P'_k
    for (size_t k = 0; k < coefficients.size(); ++k) {
      double deriv;
      if (k == 0) {
        deriv = 0.0;
      } else if (k == 1) {
        deriv = 1.0;
      } else {
        const double pnext =
            ((2.0 * k - 1.0) * x * pk - (k - 1.0) * pkm1) / static_cast<double>(k);
        const double dnext = dkm1 + (2.0 * k - 1.0) * pk;
        pkm1 = pk;
        pk = pnext;
        dkm1 = dk;
        dk = dnext;
        deriv = dnext;
      }
      acc += coefficients[k] * 2.0 * deriv;
    }
  }
  return acc;
}

Protocol::Protocol(Kind kind, const ChainSpec& chain, double param)
    : kind_(kind), chain_(chain), param_(param) {
  if (chain.n_sites % 2 == 0)
    throw std::invalid_argument(
        "Protocol: chain length must be odd so the zero mode persists, got " +
        std::to_string(chain.n_sites));
}

Protocol Protocol::cosine(const ChainSpec& chain, double b) {
  if (!(b > 0.0))
    throw std::invalid_argument("Protocol::cosine: b must be positive");
  return Protocol(Kind::cosine, chain, b);
}

Protocol Protocol::exponential(const ChainSpec& chain, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument(
        "Protocol::exponential: alpha must be positive");
  return Protocol(Kind::exponential, chain, alpha);
}

Protocol Protocol::trivial_linear(const ChainSpec& chain) {
  return Protocol(Kind::trivial_linear, chain, 0.0);
}

Protocol Protocol::with_correction(CrabCorrection c) const {
  Protocol p = *this;
  p.correction_ = std::move(c);
  return p;
}

Protocol Protocol::base() const {
  Protocol p = *this;
  p.correction_.reset();
  return p;
}

namespace {

void check_time(double t, double t_star) {
  if (!(t_star > 0.0))
    throw std::invalid_argument("Protocol: t_star must be positive");
  if (t < 0.0 || t > t_star)
    throw std::invalid_argument("Protocol: t = " + std::to_string(t) +
                                " outside [0, " + std::to_string(t_star) +
                                "]");
}

}  // namespace

void Protocol::sample_couplings(double t, double t_star,
                                std::span<double> out) const {
  check_time(t, t_star);
  const int n = chain_.n_sites;
  const double jmax = chain_.j_max;
  const double s = t / t_star;

  double j_odd = 0.0, j_even = 0.0;
  switch (kind_) {
    case Kind::cosine: {
      const double c = std::cos(pi * s);
      j_odd = param_ * (1.0 - c) * jmax;
      j_even = param_ * (1.0 + c) * jmax;
      for (int i = 0; i + 1 < n; ++i) out[i] = (i % 2 == 0) ? j_odd : j_even;
      break;
    }
    case Kind::exponential: {
      const double norm = 1.0 - std::exp(-param_);
      j_odd = (1.0 - std::exp(-param_ * s)) / norm * jmax;
      j_even = (1.0 - std::exp(-param_ * (1.0 - s))) / norm * jmax;
      for (int i = 0; i + 1 < n; ++i) out[i] = (i % 2 == 0) ? j_odd : j_even;
      break;
    }
    case Kind::trivial_linear: {
      for (int i = 0; i + 1 < n; ++i) out[i] = jmax;
      out[0] = s * jmax;
      out[n - 2] = (1.0 - s) * jmax;
      break;
    }
  }

  if (correction_) {
    const double g = 1.0 + envelope(s) * correction_->series(s);
    for (int i = 0; i + 1 < n; ++i)
      out[i] = std::clamp(out[i] * g, 0.0, jmax);
  }
}

void Protocol::sample_derivative(double t, double t_star,
                                 std::span<double> out) const {
  check_time(t, t_star);
  const int n = chain_.n_sites;
  const double jmax = chain_.j_max;
  const double s = t / t_star;

  // Base values are needed alongside the rates once a correction clamps.
  double vo = 0.0, ve = 0.0;  // odd/even base values
  double ro = 0.0, re = 0.0;  // odd/even base rates
  switch (kind_) {
    case Kind::cosine: {
      const double c = std::cos(pi * s);
      const double r = param_ * pi / t_star * std::sin(pi * s) * jmax;
      vo = param_ * (1.0 - c) * jmax;
      ve = param_ * (1.0 + c) * jmax;
      ro = r;
      re = -r;
      break;
    }
    case Kind::exponential: {
      const double norm = 1.0 - std::exp(-param_);
      vo = (1.0 - std::exp(-param_ * s)) / norm * jmax;
      ve = (1.0 - std::exp(-param_ * (1.0 - s))) / norm * jmax;
      ro = param_ / t_star * std::exp(-param_ * s) / norm * jmax;
      re = -param_ / t_star * std::exp(-param_ * (1.0 - s)) / norm * jmax;
      break;
    }
    case Kind::trivial_linear:
      break;
  }

  const bool dressed = correction_.has_value();
  double g = 1.0, gdot = 0.0;
  if (dressed) {
    g = 1.0 + envelope(s) * correction_->series(s);
    gdot = (envelope_derivative(s) * correction_->series(s) +
            envelope(s) * correction_->series_derivative(s)) /
           t_star;
  }

  auto rate = [&](double value, double slope) {
    if (!dressed) return slope;
    const double u = value * g;
    if (u < 0.0 || u > jmax) return 0.0;  // clamped: profile is flat here
    return slope * g + value * gdot;
  };

  if (kind_ == Kind::trivial_linear) {
    for (int i = 0; i + 1 < n; ++i) out[i] = rate(jmax, 0.0);
    out[0] = rate(s * jmax, jmax / t_star);
    out[n - 2] = rate((1.0 - s) * jmax, -jmax / t_star);
  } else {
    for (int i = 0; i + 1 < n; ++i)
      out[i] = (i % 2 == 0) ? rate(vo, ro) : rate(ve, re);
  }
}

CouplingVector Protocol::couplings_at(double t, double t_star) const {
  CouplingVector j;
  j.values.resize(static_cast<size_t>(chain_.n_sites - 1));
  sample_couplings(t, t_star, j.values);
  return j;
}

CouplingVector Protocol::couplings_derivative_at(double t,
                                                 double t_star) const {
  CouplingVector j;
  j.values.resize(static_cast<size_t>(chain_.n_sites - 1));
  sample_derivative(t, t_star, j.values);
  return j;
}

GapMinimum min_gap(const Protocol& p, double t_star, int n_time_samples) {
  if (n_time_samples < 3)
    throw std::invalid_argument("min_gap: need at least 3 time samples");

  const int n = p.chain().n_sites;
  GapMinimum best{std::numeric_limits<double>::infinity(), 0.0};
  CouplingVector j;
  j.values.resize(static_cast<size_t>(n - 1));
  for (int k = 0; k < n_time_samples; ++k) {
    const double t = t_star * k / (n_time_samples - 1);
    p.sample_couplings(t, t_star, j.values);
    const auto ev =
        eigenvalues_of(build_hamiltonian(j, FieldVector::zero(n)));
    int z = 0;
    for (int m = 1; m < n; ++m)
      if (std::abs(ev[m]) < std::abs(ev[z])) z = m;
    double half = std::numeric_limits<double>::infinity();
    if (z > 0) half = std::min(half, ev[z] - ev[z - 1]);
    if (z + 1 < n) half = std::min(half, ev[z + 1] - ev[z]);
    if (half < best.half_gap) best = GapMinimum{half, t};
  }
  return best;
}

}  // namespace qst
