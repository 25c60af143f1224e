#pragma once

// Zero-range interaction at x = 0 described by a 2x2 coupling matrix T through the
// boundary condition T Γ0 f = Γ1 f, with the rotated involution P_phi acting on traces.

#include "krein/numerics.hpp"
#include "krein/parallel.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>

namespace krein::point {

using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

struct CouplingMatrix {
  cplx t11{}, t12{}, t21{}, t22{};

  Mat2 matrix() const {
    Mat2 m;
    m << t11, t12, t21, t22;
    return m;
  }
  cplx det() const { return t11 * t22 - t12 * t21; }

  /// t11, t22 real and t12, t21 purely imaginary.
  bool is_pt_symmetric(double tol = 1e-13) const {
    return std::abs(t11.imag()) <= tol && std::abs(t22.imag()) <= tol && std::abs(t12.real()) <= tol &&
           std::abs(t21.real()) <= tol;
  }
  bool is_p_selfadjoint(double tol = 1e-13) const { return is_pt_symmetric(tol) && std::abs(t12 - t21) <= tol; }
};

/// One-sided values and derivatives at 0.
struct Traces {
  cplx f_plus{}, f_minus{}, df_plus{}, df_minus{};
};

/// A function on ℝ∖{0} given by analytic pieces (value and derivative on each side).
struct PiecewiseFunction {
  std::function<cplx(double)> left, left_d, right, right_d;

  Traces traces() const { return Traces{right(0.0), left(0.0), right_d(0.0), left_d(0.0)}; }
  cplx operator()(double x) const { return x > 0 ? right(x) : left(x); }
};

struct BoundaryPair {
  Vec2 gamma0;
  Vec2 gamma1;
};

inline BoundaryPair boundary_maps(const Traces& t) {
  BoundaryPair b;
  b.gamma0 << 0.5 * (t.f_plus + t.f_minus), -0.5 * (t.df_plus + t.df_minus);
  b.gamma1 << t.df_plus - t.df_minus, t.f_plus - t.f_minus;
  return b;
}

/// Inverse of boundary_maps.
inline Traces traces_from_boundary(const Vec2& gamma0, const Vec2& gamma1) {
  Traces t;
  t.f_plus = gamma0(0) + 0.5 * gamma1(1);
  t.f_minus = gamma0(0) - 0.5 * gamma1(1);
  t.df_plus = -gamma0(1) + 0.5 * gamma1(0);
  t.df_minus = -gamma0(1) - 0.5 * gamma1(0);
  return t;
}

struct DomainCheck {
  double residual = 0.0;
  bool pass = false;
};

/// ‖T Γ0 f − Γ1 f‖ (T replaced by T† when `adjoint`).
inline DomainCheck domain_check(const CouplingMatrix& t, const Traces& f, bool adjoint, double tol) {
  const BoundaryPair b = boundary_maps(f);
  const Mat2 m = adjoint ? Mat2(t.matrix().adjoint()) : t.matrix();
  DomainCheck r;
  r.residual = (m * b.gamma0 - b.gamma1).norm();
  r.pass = r.residual <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// Clifford angle

inline Mat2 pauli1() { return sigma1(); }
inline Mat2 pauli3() { return sigma3(); }

inline Mat2 m1_matrix(double phi) { return std::cos(phi) * pauli3(); }
inline Mat2 m2_matrix(double phi) { return (0.5 * kI * std::sin(phi)) * pauli1(); }

struct PhiSolution {
  double phi = 0.0;
  bool degenerate = false;
  Mat2 m1;
  Mat2 m2;
  double residual = 0.0;  // |i sin(phi)(det T + 4) − 2 cos(phi)(t12 − t21)|
};

inline double angle_equation_residual(const CouplingMatrix& t, double phi) {
  return std::abs(kI * std::sin(phi) * (t.det() + 4.0) - 2.0 * std::cos(phi) * (t.t12 - t.t21));
}

/// Reduces an angle to the principal branch (−pi/2, pi/2].
inline double principal_branch(double phi) {
  while (phi > kPi / 2) phi -= kPi;
  while (phi <= -kPi / 2) phi += kPi;
  return phi;
}

inline PhiSolution clifford_angle(const CouplingMatrix& t, double degenerate_tol = 1e-13) {
  if (!t.is_pt_symmetric()) throw std::invalid_argument("clifford_angle: coupling matrix is not PT-symmetric");
  const double d = (t.det() + 4.0).real();
  const double beta = (t.t12 - t.t21).imag();
  PhiSolution s;
  if (std::abs(beta) <= degenerate_tol && std::abs(d) <= degenerate_tol) {
    s.degenerate = true;
    s.phi = 0.0;
  } else {
    s.phi = principal_branch(std::atan2(2.0 * beta, d));
  }
  s.m1 = m1_matrix(s.phi);
  s.m2 = m2_matrix(s.phi);
  s.residual = angle_equation_residual(t, s.phi);
  return s;
}

/// max entry of T† M2 T − (M1 T − T† M1 − 4 M2).
inline double matrix_relation_residual(const CouplingMatrix& t, double phi) {
  const Mat2 tm = t.matrix();
  const Mat2 m1 = m1_matrix(phi), m2 = m2_matrix(phi);
  const Mat2 diff = tm.adjoint() * m2 * tm - (m1 * tm - tm.adjoint() * m1 - 4.0 * m2);
  return diff.cwiseAbs().maxCoeff();
}

/// Traces of P_phi f: g(±0) = e^{∓i phi} f(∓0), g'(±0) = −e^{∓i phi} f'(∓0).
inline Traces rotate_traces(const Traces& f, double phi) {
  const cplx em = std::exp(-kI * phi), ep = std::exp(kI * phi);
  return Traces{em * f.f_minus, ep * f.f_plus, -em * f.df_minus, -ep * f.df_plus};
}

/// (P_phi f)(x) = e^{−i phi sign x} f(−x), piecewise.
inline PiecewiseFunction apply_p_phi(const PiecewiseFunction& f, double phi) {
  const cplx em = std::exp(-kI * phi), ep = std::exp(kI * phi);
  PiecewiseFunction g;
  g.right = [f, em](double x) { return em * f.left(-x); };
  g.right_d = [f, em](double x) { return -em * f.left_d(-x); };
  g.left = [f, ep](double x) { return ep * f.right(-x); };
  g.left_d = [f, ep](double x) { return -ep * f.right_d(-x); };
  return g;
}

/// Boundary data of P_phi f from that of f: (M1 Γ0 + M2 Γ1, −4 M2 Γ0 + M1 Γ1).
inline BoundaryPair transform_boundary(const BoundaryPair& b, double phi) {
  const Mat2 m1 = m1_matrix(phi), m2 = m2_matrix(phi);
  return BoundaryPair{m1 * b.gamma0 + m2 * b.gamma1, -4.0 * m2 * b.gamma0 + m1 * b.gamma1};
}

struct TransformCheck {
  double trace_residual = 0.0;     // traces of P_phi f against the rotation formula
  double gamma0_residual = 0.0;    // Γ0 P_phi f = M1 Γ0 f + M2 Γ1 f
  double gamma1_residual = 0.0;    // Γ1 P_phi f = −4 M2 Γ0 f + M1 Γ1 f
  double matrix_residual = 0.0;    // T† M2 T = M1 T − T† M1 − 4 M2
  double tolerance = 0.0;
  double worst() const { return std::max({trace_residual, gamma0_residual, gamma1_residual, matrix_residual}); }
  bool pass() const { return worst() <= tolerance; }
};

inline double trace_distance(const Traces& a, const Traces& b) {
  return std::max({std::abs(a.f_plus - b.f_plus), std::abs(a.f_minus - b.f_minus), std::abs(a.df_plus - b.df_plus),
                   std::abs(a.df_minus - b.df_minus)});
}

inline TransformCheck boundary_transform_check(const CouplingMatrix& t, const PhiSolution& sol,
                                               const std::vector<PiecewiseFunction>& samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("boundary_transform_check: no sample functions");
  TransformCheck r;
  r.tolerance = tol;
  for (const auto& f : samples) {
    const Traces tf = f.traces();
    const Traces tg = apply_p_phi(f, sol.phi).traces();
    r.trace_residual = std::max(r.trace_residual, trace_distance(tg, rotate_traces(tf, sol.phi)));
    const BoundaryPair direct = boundary_maps(tg);
    const BoundaryPair predicted = transform_boundary(boundary_maps(tf), sol.phi);
    r.gamma0_residual = std::max(r.gamma0_residual, (direct.gamma0 - predicted.gamma0).cwiseAbs().maxCoeff());
    r.gamma1_residual = std::max(r.gamma1_residual, (direct.gamma1 - predicted.gamma1).cwiseAbs().maxCoeff());
  }
  r.matrix_residual = matrix_relation_residual(t, sol.phi);
  return r;
}

struct SelfadjointnessCheck {
  double residual = 0.0;
  bool pass = false;
};

/// P_phi maps D(H_T) into D(H_T†): for Γ0 ∈ {e1, e2}, Γ1 = T Γ0, the transformed data must
/// satisfy T† Γ0' = Γ1'.
inline SelfadjointnessCheck p_phi_selfadjointness_check(const CouplingMatrix& t, double phi, double tol) {
  const Mat2 tm = t.matrix();
  SelfadjointnessCheck r;
  for (int k = 0; k < 2; ++k) {
    BoundaryPair b;
    b.gamma0 = Vec2::Unit(k);
    b.gamma1 = tm * b.gamma0;
    const BoundaryPair img = transform_boundary(b, phi);
    r.residual = std::max(r.residual, (tm.adjoint() * img.gamma0 - img.gamma1).cwiseAbs().maxCoeff());
  }
  r.pass = r.residual <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// Bound states

struct BoundState {
  cplx kappa;
  cplx energy;
  double domain_residual = 0.0;  // relative residual of the reconstructed eigenfunction
};

struct BoundStateResult {
  std::vector<BoundState> states;
  bool indeterminate = false;  // characteristic polynomial vanishes identically
  std::array<cplx, 3> coefficients{};  // c2 kappa^2 + c1 kappa + c0
};

/// Rows of M(kappa) = T G0(kappa) − G1(kappa) acting on the amplitudes (a, b) of
/// f = a e^{−kappa x} (x > 0), b e^{kappa x} (x < 0).
inline Mat2 bound_state_matrix(const CouplingMatrix& t, cplx kappa) {
  Mat2 g0, g1;
  g0 << 0.5, 0.5, 0.5 * kappa, -0.5 * kappa;
  g1 << -kappa, -kappa, 1.0, -1.0;
  return t.matrix() * g0 - g1;
}

inline Traces decaying_traces(cplx a, cplx b, cplx kappa) { return Traces{a, b, -kappa * a, kappa * b}; }

/// Null vector of a singular 2x2 matrix (largest-norm row orthogonal complement).
inline Vec2 null_vector(const Mat2& m) {
  const double r0 = m.row(0).norm(), r1 = m.row(1).norm();
  Vec2 v;
  if (r0 == 0.0 && r1 == 0.0) {
    v << 1.0, 0.0;
    return v;
  }
  const auto row = r0 >= r1 ? m.row(0) : m.row(1);
  v << -row(1), row(0);
  return v / v.norm();
}

inline std::vector<cplx> polynomial_roots(cplx c2, cplx c1, cplx c0, double scale) {
  const double eps = 1e-14 * std::max(1.0, scale);
  if (std::abs(c2) > eps) {
    const cplx disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
    const cplx q = -0.5 * (c1 + (std::real(std::conj(c1) * disc) >= 0.0 ? disc : -disc));
    if (std::abs(q) == 0.0) return {cplx{0.0}, cplx{0.0}};
    return {q / c2, c0 / q};
  }
  if (std::abs(c1) > eps) return {-c0 / c1};
  return {};
}

inline BoundStateResult bound_states(const CouplingMatrix& t, double imag_snap = 1e-10) {
  BoundStateResult out;
  const cplx c2 = 2.0 * t.t22, c1 = t.det() - 4.0, c0 = -2.0 * t.t11;
  out.coefficients = {c2, c1, c0};
  const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale <= 1e-14) {
    out.indeterminate = true;
    return out;
  }
  for (cplx kappa : polynomial_roots(c2, c1, c0, scale)) {
    if (std::abs(kappa.imag()) <= imag_snap * std::max(1.0, std::abs(kappa))) kappa = cplx(kappa.real(), 0.0);
    if (!(kappa.real() > 1e-12)) continue;
    const Mat2 m = bound_state_matrix(t, kappa);
    const Vec2 ab = null_vector(m);
    const Traces tr = decaying_traces(ab(0), ab(1), kappa);
    const BoundaryPair b = boundary_maps(tr);
    const double norm = std::max(1.0, (t.matrix() * b.gamma0).norm() + b.gamma1.norm());
    BoundState s;
    s.kappa = kappa;
    s.energy = -kappa * kappa;
    s.domain_residual = domain_check(t, tr, false, 0.0).residual / norm;
    out.states.push_back(s);
  }
  std::sort(out.states.begin(), out.states.end(),
            [](const BoundState& x, const BoundState& y) { return spectral_less(x.energy, y.energy); });
  return out;
}

// ---------------------------------------------------------------------------
// Phase sweep

struct SweepAxis {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const {
    if (count < 1) throw std::invalid_argument("SweepAxis: count must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
      v[static_cast<std::size_t>(k)] = count == 1 ? start : start + (stop - start) * k / (count - 1);
    return v;
  }
};

struct SweepRow {
  double t11 = 0, t22 = 0, im_t12 = 0, im_t21 = 0;
  double phi = 0;
  bool degenerate = false;
  bool indeterminate = false;
  std::vector<cplx> energies;
  PairingKind classification = PairingKind::all_real;
};

inline SweepRow sweep_point(double t11, double t22, double im12, double im21, double pairing_tol) {
  const CouplingMatrix t{t11, cplx(0.0, im12), cplx(0.0, im21), t22};
  SweepRow row;
  row.t11 = t11;
  row.t22 = t22;
  row.im_t12 = im12;
  row.im_t21 = im21;
  const PhiSolution sol = clifford_angle(t);
  row.phi = sol.phi;
  row.degenerate = sol.degenerate;
  const BoundStateResult bs = bound_states(t);
  row.indeterminate = bs.indeterminate;
  for (const auto& s : bs.states) row.energies.push_back(s.energy);
  row.classification = pairing_check(row.energies, pairing_tol).kind;
  return row;
}

/// Cartesian sweep, row order t11 (slowest), t22, Im t12, Im t21 (fastest).
inline std::vector<SweepRow> pt_phase_sweep(const SweepAxis& t11, const SweepAxis& t22, const SweepAxis& im12,
                                            const SweepAxis& im21, double pairing_tol = 1e-9, unsigned workers = 0) {
  std::vector<std::array<double, 4>> points;
  for (double a : t11.values())
    for (double b : t22.values())
      for (double c : im12.values())
        for (double d : im21.values()) points.push_back({a, b, c, d});
  return parallel_map(
      points, [pairing_tol](const std::array<double, 4>& p) { return sweep_point(p[0], p[1], p[2], p[3], pairing_tol); },
      workers);
}

}  // namespace krein::point
