#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>

namespace qst::detail {

/// Implicit-shift QL iteration for a real symmetric tridiagonal matrix
/// (EISPACK tql2 lineage). On entry d[0..n-1] holds the diagonal and
/// e[0..n-2] the subdiagonal; e must have length n, the last slot is
/// scratch. On return d holds the eigenvalues, unsorted, and e is
/// destroyed.
///
/// Every Givens rotation is reported as sink(i, c, s) in application
/// order. Accumulating them on the right of the identity,
///
///   col_i     <- c*col_i - s*col_{i+1}
///   col_{i+1} <- s*col_i + c*col_{i+1}   (old col_i on the right side),
///
/// yields the eigenvector matrix V with T V = V diag(d).
template <class Sink>
void ql_implicit_shift(std::span<double> d, std::span<double> e, Sink&& sink) {
  const int n = static_cast<int>(d.size());
  if (static_cast<int>(e.size()) != n)
    throw std::invalid_argument("ql_implicit_shift: e must have length n");
  if (n == 0) return;
  e[n - 1] = 0.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        // Split where the subdiagonal is negligible relative to its
        // neighbours.
        const double scale = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * scale) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw std::runtime_error(
              "ql_implicit_shift: no convergence in 50 iterations");
        // Wilkinson shift from the leading 2x2 block.
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::sqrt(g * g + 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::sqrt(f * f + g * g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          sink(i, c, s);
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

struct NullSink {
  void operator()(int, double, double) const {}
};

/// Accumulates rotations into a column-major n x n matrix (column j starts
/// at v[j*n]). Initialize the storage to the identity before the QL run.
struct ColumnMajorSink {
  double* v;
  int n;

  void operator()(int i, double c, double s) const {
    double* a = v + static_cast<size_t>(i) * n;
    double* b = a + n;
    for (int k = 0; k < n; ++k) {
      const double f = b[k];
      b[k] = s * a[k] + c * f;
      a[k] = c * a[k] - s * f;
    }
  }
};

}  // namespace qst::detail
