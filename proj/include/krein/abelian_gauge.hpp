#pragma once

// Scalar gauged Hamiltonian H_g = (p − A)^2 + V, the factorisation of the
// gauge transform U = U_u U_h and the polar split of the metric eta = J |eta|.

#include "krein/numerics.hpp"

#include <random>
#include <sstream>

namespace krein::abelian {

using ScalarFunction = std::function<cplx(double)>;

struct ScalarPotentials {
  ScalarFunction gauge;      // A(x)
  ScalarFunction potential;  // V(x)
};

/// max_j |f(−x_j) − conj f(x_j)| together with the worst node index.
inline std::pair<double, int> pt_violation(const ScalarFunction& f, const Grid1D& g) {
  double worst = 0.0;
  int at = 0;
  for (int i = 0; i < g.size(); ++i) {
    const double d = std::abs(f(-g.node(i)) - std::conj(f(g.node(i))));
    if (d > worst) {
      worst = d;
      at = i;
    }
  }
  return {worst, at};
}

/// A = A_plus + i A_minus with A_plus real-even and A_minus real-odd.
struct EvenOddSplit {
  RealVector even;
  RealVector odd;
  double even_at_origin = 0.0;  // A_plus(0), needed by the half-cell quadrature step
};

inline EvenOddSplit split_even_odd(const ScalarFunction& a, const Grid1D& g, double tol = 1e-10) {
  const int n = g.size();
  std::vector<cplx> values(static_cast<std::size_t>(n));
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = a(g.node(i));
    scale = std::max(scale, std::abs(values[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(values[static_cast<std::size_t>(g.mirror(i))] - std::conj(values[static_cast<std::size_t>(i)]));
    if (d > tol * scale) {
      std::ostringstream msg;
      msg << "split_even_odd: A(-x) != conj A(x) at node " << i << " (x = " << g.node(i) << "), deviation " << d;
      throw std::invalid_argument(msg.str());
    }
  }
  EvenOddSplit s{RealVector(n), RealVector(n), a(0.0).real()};
  // Symmetrised so the parities hold bit for bit.
  for (int i = 0; i < n; ++i) {
    const cplx here = values[static_cast<std::size_t>(i)];
    const cplx there = values[static_cast<std::size_t>(g.mirror(i))];
    s.even(i) = 0.5 * (here.real() + there.real());
    s.odd(i) = 0.5 * (here.imag() - there.imag());
  }
  return s;
}

/// Cumulative trapezoid ∫_0^{x_j} f with a half-cell step from the origin.
/// Mirror-symmetric input gives an exactly odd result, antisymmetric input an exactly even one.
inline RealVector antiderivative_from_origin(const RealVector& f, double f_at_origin, const Grid1D& g) {
  const int n0 = g.half_count;
  const double h = g.spacing;
  RealVector out(g.size());
  out(n0) = 0.25 * h * (f_at_origin + f(n0));
  for (int i = n0 + 1; i < g.size(); ++i) out(i) = out(i - 1) + 0.5 * h * (f(i - 1) + f(i));
  out(n0 - 1) = -0.25 * h * (f_at_origin + f(n0 - 1));
  for (int i = n0 - 2; i >= 0; --i) out(i) = out(i + 1) - 0.5 * h * (f(i + 1) + f(i));
  return out;
}

inline GridOperator diagonal_operator(const Grid1D& g, const ComplexVector& d) {
  GridOperator op{g, 1, ComplexMatrix::Zero(d.size(), d.size())};
  op.matrix.diagonal() = d;
  return op;
}

struct GaugeFactorization {
  GridOperator unitary;     // U_u = diag(e^{−iQ})
  GridOperator hermitian;   // U_h = diag(e^{S})
  GridOperator transform;   // U = U_u U_h
  GridOperator eta;         // U† P U
  GridOperator abs_eta;     // U_h^2
  GridOperator involution;  // J = U_u^{-1} P U_u
  RealVector q;             // Q = ∫_0^x A_plus
  RealVector s;             // S = ∫_0^x A_minus
  std::optional<GridOperator> sign_of_q;  // R_Q = sign(Q); absent when Q vanishes at a node
  RealVector q_abs;
  // Residuals of P U_u = U_u† P, P U_h = U_h P, P U = U† P (max entry).
  double parity_unitary_residual = 0.0;
  double parity_hermitian_residual = 0.0;
  double parity_total_residual = 0.0;
  // R_Q |Q| = Q and P R_Q + R_Q P = 0, when the sign split is defined.
  double sign_split_residual = 0.0;
};

inline GaugeFactorization gauge_factorization(const ScalarFunction& a, const Grid1D& g) {
  const EvenOddSplit split = split_even_odd(a, g);
  const int n = g.size();
  GaugeFactorization f;
  f.q = antiderivative_from_origin(split.even, split.even_at_origin, g);
  f.s = antiderivative_from_origin(split.odd, 0.0, g);

  ComplexVector uu(n), uh(n), uu_inv(n);
  for (int i = 0; i < n; ++i) {
    uu(i) = std::exp(-kI * f.q(i));
    uu_inv(i) = std::exp(kI * f.q(i));
    uh(i) = std::exp(f.s(i));
  }
  f.unitary = diagonal_operator(g, uu);
  f.hermitian = diagonal_operator(g, uh);
  f.transform = diagonal_operator(g, uu.cwiseProduct(uh));
  const ComplexMatrix p = grid_operator(g, OperatorKind::parity).matrix;
  f.eta = GridOperator{g, 1, f.transform.matrix.adjoint() * p * f.transform.matrix};
  f.abs_eta = diagonal_operator(g, uh.cwiseProduct(uh));
  f.involution = GridOperator{g, 1, uu_inv.asDiagonal() * p * uu.asDiagonal()};

  f.parity_unitary_residual = max_abs(p * f.unitary.matrix - f.unitary.matrix.adjoint() * p);
  f.parity_hermitian_residual = max_abs(p * f.hermitian.matrix - f.hermitian.matrix * p);
  f.parity_total_residual =
      max_abs(p * f.transform.matrix - f.transform.matrix.adjoint() * p) / std::max(1.0, max_abs(f.transform.matrix));

  f.q_abs = f.q.cwiseAbs();
  bool has_zero = false;
  for (int i = 0; i < n; ++i) has_zero = has_zero || f.q(i) == 0.0;
  if (!has_zero) {
    ComplexVector sgn(n);
    for (int i = 0; i < n; ++i) sgn(i) = f.q(i) > 0.0 ? 1.0 : -1.0;
    f.sign_of_q = diagonal_operator(g, sgn);
    const ComplexMatrix& r = f.sign_of_q->matrix;
    ComplexMatrix qdiag = ComplexMatrix::Zero(n, n);
    ComplexMatrix qabs = ComplexMatrix::Zero(n, n);
    qdiag.diagonal() = f.q.cast<cplx>();
    qabs.diagonal() = f.q_abs.cast<cplx>();
    f.sign_split_residual = std::max(max_abs(r * qabs - qdiag), max_abs(anticommutator(p, r)));
  }
  return f;
}

/// Residuals of the polar identities eta = J |eta|, J^2 = I, J = J†, |eta| = U_h^2 (relative).
struct PolarResiduals {
  double eta_split = 0.0;
  double involutive = 0.0;
  double hermitian = 0.0;
  double modulus = 0.0;
  double worst() const { return std::max({eta_split, involutive, hermitian, modulus}); }
};

inline PolarResiduals polar_residuals(const GaugeFactorization& f) {
  const ComplexMatrix& j = f.involution.matrix;
  const Eigen::Index n = j.rows();
  PolarResiduals r;
  r.eta_split = max_abs(f.eta.matrix - j * f.abs_eta.matrix) / max_abs(f.eta.matrix);
  r.involutive = max_abs(j * j - ComplexMatrix::Identity(n, n));
  r.hermitian = max_abs(j - j.adjoint());
  r.modulus = max_abs(f.abs_eta.matrix - f.hermitian.matrix * f.hermitian.matrix) / max_abs(f.abs_eta.matrix);
  return r;
}

/// Residual of [PT, U] = 0 on sampled vectors: P conj(U conj(P f)) − U f.
inline double pt_commutator_residual(const GridOperator& u, int samples = 4, unsigned seed = 7) {
  const ComplexMatrix p = grid_operator(u.grid, OperatorKind::parity, u.block_dim).matrix;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    ComplexVector f(u.dim());
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = cplx(normal(rng), normal(rng));
    const ComplexVector lhs = p * (u.matrix * (p * f).conjugate()).conjugate();
    const ComplexVector rhs = u.matrix * f;
    worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
  }
  return worst;
}

enum class KineticScheme {
  expanded,   // p^2 − pA − Ap + A^2, p^2 the 3-point Laplacian, p central differences
  covariant,  // link variables: U^{-1} p^2 U with U = exp(−i ∫_0^x A)
};

inline GridOperator build_scalar_hamiltonian(const ScalarPotentials& pots, const Grid1D& g,
                                             KineticScheme scheme = KineticScheme::expanded) {
  const int n = g.size();
  const double h = g.spacing;
  ComplexMatrix hm = -grid_operator(g, OperatorKind::second_derivative).matrix;
  if (scheme == KineticScheme::expanded) {
    const ComplexMatrix p = grid_operator(g, OperatorKind::momentum).matrix;
    ComplexVector a(n);
    for (int i = 0; i < n; ++i) a(i) = pots.gauge(g.node(i));
    hm -= p * a.asDiagonal();
    hm -= a.asDiagonal() * p;
    hm.diagonal() += a.cwiseProduct(a);
  } else {
    const EvenOddSplit split = split_even_odd(pots.gauge, g);
    const RealVector q = antiderivative_from_origin(split.even, split.even_at_origin, g);
    const RealVector s = antiderivative_from_origin(split.odd, 0.0, g);
    for (int i = 0; i + 1 < n; ++i) {
      // ∫_{x_i}^{x_{i+1}} A = Δq + i Δs
      const cplx link = std::exp(-kI * (q(i + 1) - q(i)) + (s(i + 1) - s(i)));
      hm(i, i + 1) = -link / (h * h);
      hm(i + 1, i) = -1.0 / (link * h * h);
    }
  }
  for (int i = 0; i < n; ++i) hm(i, i) += pots.potential(g.node(i));
  return GridOperator{g, 1, std::move(hm)};
}

/// p^2 + V, the continuum content of U H_g U^{-1}.
inline GridOperator build_regauged_hamiltonian(const ScalarFunction& potential, const Grid1D& g) {
  return build_scalar_hamiltonian({[](double) { return cplx(0.0); }, potential}, g);
}

struct PseudoHermiticityReport {
  double eta_residual = 0.0;       // weak ‖eta H − H† eta‖ / ‖eta H‖
  double parity_residual = 0.0;    // weak ‖P H − H† P‖ / ‖P H‖
  double weighted_residual = 0.0;  // (H phi, J psi)_{|eta|} vs (phi, J H psi)_{|eta|}
  bool pass = false;
};

inline PseudoHermiticityReport verify_pseudo_hermiticity(const GridOperator& hg, const GaugeFactorization& fact,
                                                         double tol, int test_count = 8, unsigned seed = 11) {
  const Grid1D& g = hg.grid;
  if (fact.eta.dim() != hg.dim()) throw std::invalid_argument("verify_pseudo_hermiticity: grid mismatch");
  const ComplexMatrix basis = interior_test_basis(g, test_count);
  const ComplexMatrix& h = hg.matrix;
  const ComplexMatrix& eta = fact.eta.matrix;
  const ComplexMatrix p = grid_operator(g, OperatorKind::parity).matrix;

  PseudoHermiticityReport r;
  const ComplexMatrix etah = basis.adjoint() * eta * h * basis;
  const ComplexMatrix hdag_eta = basis.adjoint() * h.adjoint() * eta * basis;
  r.eta_residual = (etah - hdag_eta).norm() / etah.norm();
  const ComplexMatrix ph = basis.adjoint() * p * h * basis;
  const ComplexMatrix hdag_p = basis.adjoint() * h.adjoint() * p * basis;
  r.parity_residual = (ph - hdag_p).norm() / ph.norm();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_test = [&] {
    ComplexVector c(test_count);
    for (int k = 0; k < test_count; ++k) c(k) = cplx(normal(rng), normal(rng));
    return ComplexVector(basis * c);
  };
  auto weighted_norm = [&](const ComplexVector& v) {
    return std::sqrt(std::abs(indefinite_inner(v, v, GridOperator{g, 1, ComplexMatrix::Identity(v.size(), v.size())},
                                               fact.abs_eta)));
  };
  for (int trial = 0; trial < 6; ++trial) {
    const ComplexVector phi = random_test();
    const ComplexVector psi = random_test();
    const ComplexVector hphi = h * phi;
    const ComplexVector hpsi = h * psi;
    const cplx lhs = indefinite_inner(hphi, psi, fact.involution, fact.abs_eta);
    const cplx rhs = indefinite_inner(phi, hpsi, fact.involution, fact.abs_eta);
    const double scale = weighted_norm(hphi) * weighted_norm(psi) + weighted_norm(phi) * weighted_norm(hpsi);
    r.weighted_residual = std::max(r.weighted_residual, std::abs(lhs - rhs) / scale);
  }
  r.pass = r.eta_residual <= tol && r.weighted_residual <= tol;
  return r;
}

}  // namespace krein::abelian
