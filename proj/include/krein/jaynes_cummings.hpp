#pragma once

// PT-symmetric Jaynes–Cummings Hamiltonian on a truncated Fock space and its
// cross-check against the grid operator (p − A)^2 + V.
//
// Tensor ordering is Fock ⊗ level: basis index = n * m + j.

#include "krein/cartan.hpp"
#include "krein/matrix_schrodinger.hpp"
#include "krein/numerics.hpp"

#include <cmath>
#include <string>

namespace krein::jc {

using cartan::GaugeAlgebraElement;
using cartan::ThetaSignature;

struct FockLadder {
  int n_max = 0;
  ComplexMatrix d;      // d|n> = sqrt(n)|n−1>
  ComplexMatrix d_dag;  // transpose of d
  ComplexMatrix number;

  static FockLadder make(int n_max) {
    if (n_max < 1) throw std::invalid_argument("FockLadder: n_max must be >= 1");
    FockLadder f;
    f.n_max = n_max;
    f.d = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) f.d(n - 1, n) = std::sqrt(static_cast<double>(n));
    f.d_dag = f.d.transpose();
    f.number = f.d_dag * f.d;
    return f;
  }
  int dim() const { return n_max + 1; }
};

/// a = c − cᵀ with c = [[i ũ, v], [0, i w̃]] and ũ, w̃ the strictly upper parts of u, w.
struct NilpotentSplit {
  ThetaSignature sig;
  ComplexMatrix a;
  ComplexMatrix c;

  double reconstruction_residual() const { return max_abs(a - (c - c.transpose())); }
  double nilpotency_residual() const {
    ComplexMatrix power = ComplexMatrix::Identity(c.rows(), c.cols());
    for (int k = 0; k < sig.m(); ++k) power = power * c;
    return max_abs(power);
  }
};

inline NilpotentSplit nilpotent_split(const GaugeAlgebraElement& a) {
  const ThetaSignature& sig = a.signature();
  const RealMatrix u_up = a.u().triangularView<Eigen::StrictlyUpper>();
  const RealMatrix w_up = a.w().triangularView<Eigen::StrictlyUpper>();
  NilpotentSplit s;
  s.sig = sig;
  s.a = a.matrix();
  s.c = ComplexMatrix::Zero(sig.m(), sig.m());
  s.c.topLeftCorner(sig.p, sig.p) = kI * u_up.cast<cplx>();
  s.c.topRightCorner(sig.p, sig.q) = a.v().cast<cplx>();
  s.c.bottomRightCorner(sig.q, sig.q) = kI * w_up.cast<cplx>();
  return s;
}

struct LevelEnergies {
  std::vector<double> omega;
  ComplexMatrix matrix() const {
    ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(omega.size()), static_cast<Eigen::Index>(omega.size()));
    for (std::size_t j = 0; j < omega.size(); ++j) w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = omega[j];
    return w;
  }
};

/// Coupling matrix entering the Fock build. With s = +1 it is c itself; with s = −1 it is
/// cᵀ, so that c_s − c_sᵀ = s·a while c_s + c_sᵀ (and hence V) is unchanged.
inline ComplexMatrix signed_coupling(const NilpotentSplit& split, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("signed_coupling: sign must be +1 or -1");
  return sign == 1 ? ComplexMatrix(split.c) : ComplexMatrix(split.c.transpose());
}

/// H = 2 [N ⊗ I + sqrt(2) (d ⊗ c_s + d† ⊗ c_sᵀ) + I ⊗ omega].
inline ComplexMatrix build_jc(const NilpotentSplit& split, const LevelEnergies& omega, int n_max, int sign = 1) {
  if (n_max < 2) throw std::invalid_argument("build_jc: n_max must be >= 2");
  const int m = split.sig.m();
  if (static_cast<int>(omega.omega.size()) != m) throw std::invalid_argument("build_jc: omega has wrong size");
  const FockLadder f = FockLadder::make(n_max);
  const ComplexMatrix cs = signed_coupling(split, sign);
  const ComplexMatrix id_m = ComplexMatrix::Identity(m, m);
  const ComplexMatrix id_f = ComplexMatrix::Identity(f.dim(), f.dim());
  const ComplexMatrix half =
      kron(f.number, id_m) + std::sqrt(2.0) * (kron(f.d, cs) + kron(f.d_dag, cs.transpose())) + kron(id_f, omega.matrix());
  return 2.0 * half;
}

struct PtCheck {
  double residual = 0.0;
  bool pass = false;
};

/// Residual of (Pi_F ⊗ Theta) conj(H) (Pi_F ⊗ Theta) = H with Pi_F = diag((−1)^n).
inline PtCheck jc_pt_check(const ComplexMatrix& h, const ThetaSignature& sig, int n_max, double tol) {
  const Eigen::Index dim = static_cast<Eigen::Index>(n_max + 1) * sig.m();
  if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("jc_pt_check: dimension mismatch");
  ComplexMatrix fock_parity = ComplexMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) fock_parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  const ComplexMatrix pp = kron(fock_parity, sig.theta());
  PtCheck r;
  r.residual = max_abs(pp * h.conjugate() * pp - h);
  r.pass = r.residual <= tol;
  return r;
}

/// V(x) = (x^2 − 1) I + 2 (c + cᵀ) x + a^2 + 2 omega.
inline nonabelian::MatrixPotential jc_potential(const NilpotentSplit& split, const LevelEnergies& omega) {
  const int m = split.sig.m();
  const ComplexMatrix sym = split.c + split.c.transpose();
  const ComplexMatrix constant = split.a * split.a + 2.0 * omega.matrix() - ComplexMatrix::Identity(m, m);
  nonabelian::MatrixPotential v;
  v.dim = m;
  v.value = [=](double x) -> ComplexMatrix { return x * x * ComplexMatrix::Identity(m, m) + 2.0 * x * sym + constant; };
  return v;
}

struct EquivalenceReport {
  bool precondition_ok = true;
  std::string diagnostic;
  std::size_t compared = 0;
  std::vector<cplx> grid_values;
  std::vector<cplx> fock_values;  // matched partners under the selected convention
  double deviation_plus = 0.0;    // max |Δλ| with s = +1
  double deviation_minus = 0.0;   // max |Δλ| with s = −1
  int matching_sign = 0;
  double deviation = 0.0;         // deviation of the matching convention
  double truncation_change = 0.0; // retained levels, n_max → ceil(1.5 n_max)
  double tolerance = 5e-2;
  bool pass = false;
};

inline double max_matched_distance(const std::vector<cplx>& lhs, const std::vector<cplx>& rhs) {
  double worst = 0.0;
  for (const auto& [idx, dist] : match_spectra(lhs, rhs)) {
    (void)idx;
    worst = std::max(worst, dist);
  }
  return worst;
}

/// Grid build of (p − i a)^2 + V against the Fock build under both sign conventions.
inline EquivalenceReport jc_equivalence_check(const GaugeAlgebraElement& a, const LevelEnergies& omega,
                                              const Grid1D& grid, int n_max, std::size_t count,
                                              double tolerance = 5e-2) {
  EquivalenceReport r;
  r.tolerance = tolerance;
  const double needed = std::sqrt(2.0 * n_max) + 4.0;
  if (grid.half_width() < needed) {
    r.precondition_ok = false;
    r.diagnostic = "box half-width " + std::to_string(grid.half_width()) + " below required " + std::to_string(needed);
  }
  if (count == 0 || 2 * count > static_cast<std::size_t>(n_max)) {
    r.precondition_ok = false;
    r.diagnostic += (r.diagnostic.empty() ? "" : "; ") + std::string("compared levels must satisfy 1 <= K <= n_max/2");
  }
  if (!r.precondition_ok) return r;

  const NilpotentSplit split = nilpotent_split(a);
  const nonabelian::ConstantGauge gauge{a.gauge_potential()};
  const GridOperator hg = nonabelian::build_gauged_hamiltonian(gauge, jc_potential(split, omega), grid);
  r.grid_values = lowest(eig(hg.matrix).eigenvalues, count);
  r.compared = r.grid_values.size();

  const std::vector<cplx> plus = eig(build_jc(split, omega, n_max, 1)).eigenvalues;
  const std::vector<cplx> minus = eig(build_jc(split, omega, n_max, -1)).eigenvalues;
  r.deviation_plus = max_matched_distance(r.grid_values, plus);
  r.deviation_minus = max_matched_distance(r.grid_values, minus);
  r.matching_sign = r.deviation_minus < r.deviation_plus ? -1 : 1;
  r.deviation = std::min(r.deviation_plus, r.deviation_minus);
  const std::vector<cplx>& chosen = r.matching_sign == 1 ? plus : minus;
  for (const auto& [idx, dist] : match_spectra(r.grid_values, chosen)) {
    (void)dist;
    r.fock_values.push_back(chosen[idx]);
  }

  const int larger = (3 * n_max + 1) / 2;
  const std::vector<cplx> refined = eig(build_jc(split, omega, larger, r.matching_sign)).eigenvalues;
  r.truncation_change = max_matched_distance(r.fock_values, refined);
  r.pass = r.deviation <= tolerance;
  return r;
}

/// Closed-form spectrum for m = 2, c = [[0, alpha], [0, 0]], omega = diag(0, delta) under
/// coupling c_s: decoupled ground level plus 2x2 polariton blocks.
inline std::vector<cplx> two_level_spectrum(double alpha, double delta, int n_max, int sign) {
  std::vector<cplx> out;
  // c_s = c links |n, 1> with |n−1, 0>; c_s = cᵀ links |n, 0> with |n−1, 1>.
  const int top = n_max;
  std::vector<bool> used((static_cast<std::size_t>(top) + 1) * 2, false);
  auto idx = [](int n, int j) { return static_cast<std::size_t>(n) * 2 + static_cast<std::size_t>(j); };
  const double lvl[2] = {0.0, delta};
  for (int n = 1; n <= top; ++n) {
    const int upper_level = sign == 1 ? 1 : 0;
    const int lower_level = 1 - upper_level;
    const double e1 = 2.0 * (n + lvl[upper_level]);
    const double e2 = 2.0 * (n - 1 + lvl[lower_level]);
    const double g = 2.0 * std::sqrt(2.0) * alpha * std::sqrt(static_cast<double>(n));
    const double mean = 0.5 * (e1 + e2);
    const cplx root = std::sqrt(cplx(0.25 * (e1 - e2) * (e1 - e2) + g * g, 0.0));
    out.push_back(mean - root);
    out.push_back(mean + root);
    used[idx(n, upper_level)] = used[idx(n - 1, lower_level)] = true;
  }
  for (int n = 0; n <= top; ++n)
    for (int j = 0; j < 2; ++j)
      if (!used[idx(n, j)]) out.emplace_back(2.0 * (n + lvl[j]), 0.0);
  std::sort(out.begin(), out.end(), spectral_less);
  return out;
}

}  // namespace krein::jc
