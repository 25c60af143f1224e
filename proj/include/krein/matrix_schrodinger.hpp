#pragma once

// Matrix Hamiltonian H_g = (p − A)^2 + V(x) with a constant non-Abelian gauge
// potential, the global re-gauging H = U H_g U^{-1}, symmetry audits and
// spectral comparisons.

#include "krein/cartan.hpp"
#include "krein/numerics.hpp"

#include <random>

namespace krein::nonabelian {

using cartan::ThetaSignature;
using MatrixFunction = std::function<ComplexMatrix(double)>;

struct MatrixPotential {
  int dim = 1;
  MatrixFunction value;
};

/// Constant gauge potential; coordinate-dependent non-Abelian fields are not representable.
struct ConstantGauge {
  ComplexMatrix value;
};

struct AuditReport {
  double gauge_pt = 0.0;           // Theta A* Theta − A
  double potential_pt = 0.0;       // Theta V*(−x) Theta − V(x)
  double gauge_p_adjoint = 0.0;    // Theta A† Theta + A
  double potential_p_adjoint = 0.0;  // Theta V†(−x) Theta − V(x)
  double gauge_antisymmetry = 0.0;   // A + Aᵀ
  double potential_symmetry = 0.0;   // V − Vᵀ
  double tolerance = 0.0;
  double worst() const {
    return std::max({gauge_pt, potential_pt, gauge_p_adjoint, potential_p_adjoint, gauge_antisymmetry,
                     potential_symmetry});
  }
  bool pass() const { return worst() <= tolerance; }
};

inline AuditReport symmetry_audit(const ConstantGauge& a, const MatrixPotential& v, const ThetaSignature& sig,
                                  const Grid1D& g, double tol) {
  const ComplexMatrix t = sig.theta();
  const ComplexMatrix& am = a.value;
  if (am.rows() != sig.m() || v.dim != sig.m()) throw std::invalid_argument("symmetry_audit: dimension mismatch");
  AuditReport r;
  r.tolerance = tol;
  r.gauge_pt = max_abs(t * am.conjugate() * t - am);
  r.gauge_p_adjoint = max_abs(t * am.adjoint() * t + am);
  r.gauge_antisymmetry = max_abs(am + am.transpose());
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    const ComplexMatrix here = v.value(x);
    const ComplexMatrix mirrored = v.value(-x);
    r.potential_pt = std::max(r.potential_pt, max_abs(t * mirrored.conjugate() * t - here));
    r.potential_p_adjoint = std::max(r.potential_p_adjoint, max_abs(t * mirrored.adjoint() * t - here));
    r.potential_symmetry = std::max(r.potential_symmetry, max_abs(here - here.transpose()));
  }
  return r;
}

struct RegaugedSystem {
  GridOperator gauged;           // H_g
  GridOperator regauged;         // H = p^2 + e^{−iAx} V e^{iAx}, built directly
  GridOperator transform;        // U = blockdiag e^{−iAx_j}
  GridOperator similarity;       // U H_g U^{-1}
};

/// (p^2 ⊗ I) − 2 (p ⊗ A) + I ⊗ A^2 + blockdiag V(x_j); the cross term is the exact
/// expansion of −pA − Ap for constant A.
inline GridOperator build_gauged_hamiltonian(const ConstantGauge& a, const MatrixPotential& v, const Grid1D& g) {
  const int m = v.dim;
  const ComplexMatrix& am = a.value;
  if (am.rows() != m) throw std::invalid_argument("build_gauged_hamiltonian: dimension mismatch");
  const ComplexMatrix lap = -grid_operator(g, OperatorKind::second_derivative).matrix;
  const ComplexMatrix p = grid_operator(g, OperatorKind::momentum).matrix;
  ComplexMatrix h = kron(lap, ComplexMatrix::Identity(m, m)) - 2.0 * kron(p, am);
  const ComplexMatrix a2 = am * am;
  for (int i = 0; i < g.size(); ++i)
    h.block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(i) * m, m, m) += a2 + v.value(g.node(i));
  return GridOperator{g, m, std::move(h)};
}

inline RegaugedSystem build_and_regauge(const ConstantGauge& a, const MatrixPotential& v, const Grid1D& g) {
  const int m = v.dim;
  const ComplexMatrix& am = a.value;
  RegaugedSystem out;
  out.gauged = build_gauged_hamiltonian(a, v, g);

  std::vector<ComplexMatrix> forward, backward;
  forward.reserve(static_cast<std::size_t>(g.size()));
  backward.reserve(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    forward.push_back(expm(-kI * am * g.node(i)));
    backward.push_back(expm(kI * am * g.node(i)));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(g.size()) * m;
  ComplexMatrix u = ComplexMatrix::Zero(n, n), u_inv = ComplexMatrix::Zero(n, n);
  ComplexMatrix h = kron(-grid_operator(g, OperatorKind::second_derivative).matrix, ComplexMatrix::Identity(m, m));
  for (int i = 0; i < g.size(); ++i) {
    const Eigen::Index o = static_cast<Eigen::Index>(i) * m;
    const auto k = static_cast<std::size_t>(i);
    u.block(o, o, m, m) = forward[k];
    u_inv.block(o, o, m, m) = backward[k];
    h.block(o, o, m, m) += forward[k] * v.value(g.node(i)) * backward[k];
  }
  out.regauged = GridOperator{g, m, std::move(h)};
  out.similarity = GridOperator{g, m, u * out.gauged.matrix * u_inv};
  out.transform = GridOperator{g, m, std::move(u)};
  return out;
}

/// Extended parity P ⊗ Theta in node-major ordering.
inline ComplexMatrix extended_parity(const Grid1D& g, const ThetaSignature& sig) {
  return kron(grid_operator(g, OperatorKind::parity).matrix, sig.theta());
}

/// Weak-form ‖𝐏H − H†𝐏‖ / ‖𝐏H‖ on interior Hermite test functions.
inline double parity_adjoint_residual(const GridOperator& h, const ThetaSignature& sig, int test_count = 8) {
  const ComplexMatrix basis = interior_test_basis(h.grid, test_count, 1.0, 5, h.block_dim);
  const ComplexMatrix pp = extended_parity(h.grid, sig);
  const ComplexMatrix lhs = basis.adjoint() * pp * h.matrix * basis;
  const ComplexMatrix rhs = basis.adjoint() * h.matrix.adjoint() * pp * basis;
  return (lhs - rhs).norm() / lhs.norm();
}

struct SpectralComparison {
  std::vector<cplx> gauged;    // lowest `count` eigenvalues of H_g
  std::vector<cplx> regauged;  // their matches in the spectrum of H
  std::vector<double> distance;
  double max_relative_mismatch = 0.0;  // max |Δλ| / (1 + |λ|)
  PairingKind gauged_pairing = PairingKind::all_real;
  PairingKind regauged_pairing = PairingKind::all_real;
  double parity_residual = 0.0;
};

/// Pairing tolerance used for discretised spectra: absolute, scaled by the operator size.
inline double spectral_pairing_tolerance(const ComplexMatrix& h) { return 1e-9 * std::max(1.0, max_abs(h)); }

inline SpectralComparison spectral_compare(const GridOperator& hg, const GridOperator& h, const ThetaSignature& sig,
                                           std::size_t count) {
  if (hg.dim() != h.dim()) throw std::invalid_argument("spectral_compare: grid mismatch");
  const SpectrumResult sg = eig(hg.matrix);
  const SpectrumResult sh = eig(h.matrix);
  SpectralComparison c;
  c.gauged = lowest(sg.eigenvalues, count);
  const auto matches = match_spectra(c.gauged, sh.eigenvalues);
  for (std::size_t k = 0; k < matches.size(); ++k) {
    c.regauged.push_back(sh.eigenvalues[matches[k].first]);
    c.distance.push_back(matches[k].second);
    c.max_relative_mismatch = std::max(c.max_relative_mismatch, matches[k].second / (1.0 + std::abs(c.gauged[k])));
  }
  c.gauged_pairing = pairing_check(sg, spectral_pairing_tolerance(hg.matrix)).kind;
  c.regauged_pairing = pairing_check(sh, spectral_pairing_tolerance(h.matrix)).kind;
  c.parity_residual = parity_adjoint_residual(hg, sig);
  return c;
}

/// Random PT-admissible pair: A = i a with a ∈ g_Theta and
/// V(x) = x^2 I + x S_odd + S_even + i (x O_even + O_odd), where the "even"
/// blocks commute with Theta and the "odd" ones anticommute; all real symmetric.
struct AuditedPair {
  ConstantGauge gauge;
  MatrixPotential potential;
};

inline AuditedPair random_audited_pair(const ThetaSignature& sig, std::mt19937_64& rng, double gauge_scale = 0.3,
                                       double potential_scale = 0.3) {
  const int m = sig.m();
  auto symmetric = [&](bool theta_even) {
    const RealMatrix raw = cartan::random_real(m, m, rng, potential_scale);
    RealMatrix r = 0.5 * (raw + raw.transpose());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const bool same_block = (i < sig.p) == (j < sig.p);
        if (same_block != theta_even) r(i, j) = 0.0;
      }
    return ComplexMatrix(r.cast<cplx>());
  };
  const ComplexMatrix s_even = symmetric(true), s_odd = symmetric(false);
  const ComplexMatrix o_even = symmetric(true), o_odd = symmetric(false);
  AuditedPair pair;
  pair.gauge.value = cartan::random_element(sig, rng, gauge_scale).gauge_potential();
  pair.potential.dim = m;
  pair.potential.value = [=](double x) -> ComplexMatrix {
    return x * x * ComplexMatrix::Identity(m, m) + x * s_odd + s_even + kI * (x * o_even + o_odd);
  };
  return pair;
}

}  // namespace krein::nonabelian
