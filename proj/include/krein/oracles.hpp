#pragma once

// Independent reference computations used to validate the production paths.
// None of these call LAPACK or the Padé exponential.

#include "krein/numerics.hpp"

#include <complex>
#include <vector>

namespace krein::oracle {

using lcplx = std::complex<long double>;

/// Monic characteristic polynomial coefficients c_0..c_n (c_n = 1) by Faddeev–LeVerrier
/// in extended precision. Only suitable for small matrices.
inline std::vector<lcplx> characteristic_polynomial(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  using LMat = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
  LMat al = a.cast<lcplx>();
  std::vector<lcplx> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0L;
  LMat m = LMat::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = al * m;
    m.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
    const LMat am = al * m;
    c[static_cast<std::size_t>(n - k)] = -am.trace() / static_cast<long double>(k);
  }
  return c;
}

/// Roots of a polynomial given by ascending coefficients, Aberth–Ehrlich iteration.
inline std::vector<cplx> polynomial_roots(const std::vector<lcplx>& coeffs, int max_iter = 500) {
  const std::size_t n = coeffs.size() - 1;
  if (n == 0) return {};
  const lcplx lead = coeffs[n];
  long double radius = 0.0L;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(coeffs[k] / lead));
  radius = 1.0L + radius;

  std::vector<lcplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long double angle = 2.0L * 3.14159265358979323846L * (static_cast<long double>(k) + 0.25L) / n;
    z[k] = std::polar(0.5L * radius, angle);
  }
  auto eval = [&](lcplx x, lcplx& deriv) {
    lcplx p = coeffs[n];
    deriv = 0.0L;
    for (std::size_t k = n; k-- > 0;) {
      deriv = deriv * x + p;
      p = p * x + coeffs[k];
    }
    return p;
  };
  for (int it = 0; it < max_iter; ++it) {
    long double largest_step = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      lcplx d;
      const lcplx p = eval(z[i], d);
      if (p == 0.0L) continue;
      const lcplx ratio = p / d;
      lcplx repulsion = 0.0L;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0L / (z[i] - z[j]);
      const lcplx step = ratio / (1.0L - ratio * repulsion);
      z[i] -= step;
      largest_step = std::max(largest_step, std::abs(step) / std::max(1.0L, std::abs(z[i])));
    }
    if (largest_step < 1e-19L) break;
  }
  std::vector<cplx> out;
  out.reserve(n);
  for (const auto& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  std::sort(out.begin(), out.end(), spectral_less);
  return out;
}

inline std::vector<cplx> eigenvalues(const ComplexMatrix& a) { return polynomial_roots(characteristic_polynomial(a)); }

/// exp(z H) for Hermitian H through its eigendecomposition.
inline ComplexMatrix hermitian_exp(const ComplexMatrix& h, cplx z) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  ComplexVector e(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = std::exp(z * es.eigenvalues()(k));
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, off) below `x` (Sturm count).
inline std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  std::size_t count = 0;
  double q = diag[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = diag[i] - x - off[i - 1] * off[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

/// Lowest eigenvalue by bisection on the Sturm count.
inline double lowest_tridiagonal_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i < off.size() ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Ground-state energy of −d²/dx² + (g/w) 1_{|x|<w/2} on a Dirichlet box, with
/// `nodes_per_width` staggered nodes inside the well.
inline double square_well_ground_energy(double strength, double width, double half_width = 10.0,
                                        int nodes_per_width = 20) {
  const double h = width / nodes_per_width;
  const Grid1D g = Grid1D::covering(half_width, h);
  const std::size_t n = static_cast<std::size_t>(g.size());
  std::vector<double> diag(n, 2.0 / (h * h)), off(n - 1, -1.0 / (h * h));
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(g.node(static_cast<int>(i))) < 0.5 * width) diag[i] += strength / width;
  return lowest_tridiagonal_eigenvalue(diag, off);
}

struct WellExtrapolation {
  double coarse = 0.0;  // E(w)
  double fine = 0.0;    // E(w/2)
  double extrapolated = 0.0;
};

/// Zero-width limit of the square-well ground state, Richardson in the width (error O(w)).
inline WellExtrapolation delta_limit_energy(double strength, double width = 0.01) {
  WellExtrapolation r;
  r.coarse = square_well_ground_energy(strength, width);
  r.fine = square_well_ground_energy(strength, 0.5 * width);
  r.extrapolated = 2.0 * r.fine - r.coarse;
  return r;
}

}  // namespace krein::oracle
