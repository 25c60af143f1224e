#pragma once

// The gauge algebra g_Theta = { a in so(m,C) : Theta a† Theta = a }, its
// Cartan split k_Theta (+) p_Theta, triple-system closure and the closed-form
// group exponentials.

#include "krein/numerics.hpp"

#include <random>

namespace krein::cartan {

/// Theta = I_{p,q} = diag(I_p, −I_q).
struct ThetaSignature {
  int p = 1;
  int q = 0;

  ThetaSignature() = default;
  ThetaSignature(int p_, int q_) : p(p_), q(q_) {
    if (p_ < 1 || q_ < 0) throw std::invalid_argument("ThetaSignature: need p >= 1, q >= 0");
  }
  int m() const { return p + q; }
  ComplexMatrix theta() const {
    ComplexMatrix t = ComplexMatrix::Identity(m(), m());
    for (int k = p; k < m(); ++k) t(k, k) = -1.0;
    return t;
  }
  bool operator==(const ThetaSignature&) const = default;
};

/// a = [[i u, v], [−vᵀ, i w]] with u, w real antisymmetric and v real.
class GaugeAlgebraElement {
 public:
  static GaugeAlgebraElement make(const ThetaSignature& sig, const RealMatrix& u, const RealMatrix& v,
                                  const RealMatrix& w, double tol = 1e-13) {
    if (u.rows() != sig.p || u.cols() != sig.p || v.rows() != sig.p || v.cols() != sig.q || w.rows() != sig.q ||
        w.cols() != sig.q)
      throw std::invalid_argument("GaugeAlgebraElement: block sizes do not match the signature");
    const double su = u.size() ? (u + u.transpose()).cwiseAbs().maxCoeff() : 0.0;
    const double sw = w.size() ? (w + w.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (su > tol) throw std::invalid_argument("GaugeAlgebraElement: u is not antisymmetric");
    if (sw > tol) throw std::invalid_argument("GaugeAlgebraElement: w is not antisymmetric");
    GaugeAlgebraElement a;
    a.sig_ = sig;
    a.u_ = u;
    a.v_ = v;
    a.w_ = w;
    a.matrix_ = ComplexMatrix::Zero(sig.m(), sig.m());
    a.matrix_.topLeftCorner(sig.p, sig.p) = kI * u.cast<cplx>();
    a.matrix_.topRightCorner(sig.p, sig.q) = v.cast<cplx>();
    a.matrix_.bottomLeftCorner(sig.q, sig.p) = -v.transpose().cast<cplx>();
    a.matrix_.bottomRightCorner(sig.q, sig.q) = kI * w.cast<cplx>();
    return a;
  }

  const ThetaSignature& signature() const { return sig_; }
  const RealMatrix& u() const { return u_; }
  const RealMatrix& v() const { return v_; }
  const RealMatrix& w() const { return w_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// The gauge potential A = i a.
  ComplexMatrix gauge_potential() const { return kI * matrix_; }

 private:
  ThetaSignature sig_;
  RealMatrix u_, v_, w_;
  ComplexMatrix matrix_;
};

/// Membership residual of an arbitrary matrix: max(‖X + Xᵀ‖, ‖Theta X† Theta − X‖) (max entry).
inline double membership_residual(const ComplexMatrix& x, const ThetaSignature& sig) {
  const ComplexMatrix t = sig.theta();
  return std::max(max_abs(x + x.transpose()), max_abs(t * x.adjoint() * t - x));
}

inline RealMatrix random_antisymmetric(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  RealMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = normal(rng);
  return r - r.transpose();
}

inline RealMatrix random_real(int rows, int cols, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  RealMatrix r(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r(i, j) = normal(rng);
  return r;
}

inline GaugeAlgebraElement random_element(const ThetaSignature& sig, std::mt19937_64& rng, double scale = 1.0) {
  const RealMatrix u = random_antisymmetric(sig.p, rng, scale);
  const RealMatrix v = random_real(sig.p, sig.q, rng, scale);
  const RealMatrix w = random_antisymmetric(sig.q, rng, scale);
  return GaugeAlgebraElement::make(sig, u, v, w);
}

/// kappa(a) = −Theta a† Theta.
inline ComplexMatrix kappa(const ComplexMatrix& a, const ThetaSignature& sig) {
  if (a.rows() != sig.m() || a.cols() != sig.m()) throw std::invalid_argument("kappa: dimension mismatch");
  const ComplexMatrix t = sig.theta();
  return -(t * a.adjoint() * t);
}

struct CartanComponents {
  ComplexMatrix compact;     // b = [[0, v], [−vᵀ, 0]]  (k_Theta)
  ComplexMatrix noncompact;  // c = diag(i u, i w)      (p_Theta)
};

inline CartanComponents cartan_split(const GaugeAlgebraElement& a) {
  const ThetaSignature& s = a.signature();
  CartanComponents out{ComplexMatrix::Zero(s.m(), s.m()), ComplexMatrix::Zero(s.m(), s.m())};
  out.compact.topRightCorner(s.p, s.q) = a.matrix().topRightCorner(s.p, s.q);
  out.compact.bottomLeftCorner(s.q, s.p) = a.matrix().bottomLeftCorner(s.q, s.p);
  out.noncompact.topLeftCorner(s.p, s.p) = a.matrix().topLeftCorner(s.p, s.p);
  out.noncompact.bottomRightCorner(s.q, s.q) = a.matrix().bottomRightCorner(s.q, s.q);
  return out;
}

struct LtsReport {
  double closure_residual = 0.0;  // distance of [a1,[a2,a3]] from g_Theta / (‖a1‖‖a2‖‖a3‖)
  double binary_escape = 0.0;     // distance of [a1,a2] from g_Theta / (‖a1‖‖a2‖)
};

inline LtsReport lts_check(const GaugeAlgebraElement& a1, const GaugeAlgebraElement& a2,
                           const GaugeAlgebraElement& a3) {
  const ThetaSignature& sig = a1.signature();
  if (!(a2.signature() == sig) || !(a3.signature() == sig))
    throw std::invalid_argument("lts_check: signature mismatch");
  const ComplexMatrix& x1 = a1.matrix();
  const ComplexMatrix& x2 = a2.matrix();
  const ComplexMatrix& x3 = a3.matrix();
  const double n1 = max_abs(x1), n2 = max_abs(x2), n3 = max_abs(x3);
  LtsReport r;
  const double triple_scale = n1 * n2 * n3;
  const double pair_scale = n1 * n2;
  r.closure_residual =
      triple_scale > 0.0 ? membership_residual(commutator(x1, commutator(x2, x3)), sig) / triple_scale : 0.0;
  r.binary_escape = pair_scale > 0.0 ? membership_residual(commutator(x1, x2), sig) / pair_scale : 0.0;
  return r;
}

struct WickReport {
  double residual = 0.0;
  bool pass = false;
};

/// Checks that f = −i a lies in so(m,C) ∩ su(p,q) and that −i b, −i c fall in
/// the off-diagonal (q) and block-diagonal (l) parts of su(p,q).
inline WickReport wick_check(const ComplexMatrix& a, const ThetaSignature& sig, double tol = 1e-13) {
  if (a.rows() != sig.m() || a.cols() != sig.m()) throw std::invalid_argument("wick_check: dimension mismatch");
  const ComplexMatrix t = sig.theta();
  const ComplexMatrix f = -kI * a;
  auto su_residual = [&](const ComplexMatrix& x) {
    return std::max({max_abs(t * x.adjoint() * t + x), max_abs(x + x.transpose()), std::abs(x.trace())});
  };
  ComplexMatrix b = ComplexMatrix::Zero(sig.m(), sig.m());
  b.topRightCorner(sig.p, sig.q) = a.topRightCorner(sig.p, sig.q);
  b.bottomLeftCorner(sig.q, sig.p) = a.bottomLeftCorner(sig.q, sig.p);
  const ComplexMatrix c = a - b;
  const ComplexMatrix fb = -kI * b;
  const ComplexMatrix fc = -kI * c;
  // Off-diagonal parts anticommute with Theta, block-diagonal parts commute.
  const double block_b = max_abs(t * fb + fb * t);
  const double block_c = max_abs(t * fc - fc * t);
  WickReport r;
  r.residual = std::max({su_residual(f), su_residual(fb), su_residual(fc), block_b, block_c});
  r.pass = r.residual <= tol * std::max(1.0, max_abs(a));
  return r;
}

inline WickReport wick_check(const GaugeAlgebraElement& a, double tol = 1e-13) {
  return wick_check(a.matrix(), a.signature(), tol);
}

/// sin(s x)/s with the series limit below the 1e-8 threshold.
inline double sinc_scaled(double s, double x) {
  if (s < 1e-8) return x * (1.0 - (s * x) * (s * x) / 6.0);
  return std::sin(s * x) / s;
}

/// exp(b x) for b in k_Theta through the SVD of the block v.
inline ComplexMatrix exp_compact(const ComplexMatrix& b, const ThetaSignature& sig, double x) {
  if (b.rows() != sig.m()) throw std::invalid_argument("exp_compact: dimension mismatch");
  const int p = sig.p, q = sig.q;
  const RealMatrix v = b.topRightCorner(p, q).real();
  RealMatrix out = RealMatrix::Identity(sig.m(), sig.m());
  if (q == 0) return out.cast<cplx>();
  Eigen::JacobiSVD<RealMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  auto singular = [&](int k) { return k < sv.size() ? sv(k) : 0.0; };
  RealVector cos_left(p), cos_right(q), sinc_right(q);
  for (int k = 0; k < p; ++k) cos_left(k) = std::cos(singular(k) * x);
  for (int k = 0; k < q; ++k) {
    cos_right(k) = std::cos(singular(k) * x);
    sinc_right(k) = sinc_scaled(singular(k), x);
  }
  const RealMatrix& left = svd.matrixU();   // eigenvectors of v vᵀ
  const RealMatrix& right = svd.matrixV();  // eigenvectors of vᵀ v
  const RealMatrix sinc_vtv = right * sinc_right.asDiagonal() * right.transpose();
  out.topLeftCorner(p, p) = left * cos_left.asDiagonal() * left.transpose();
  out.topRightCorner(p, q) = v * sinc_vtv;
  out.bottomLeftCorner(q, p) = -sinc_vtv * v.transpose();
  out.bottomRightCorner(q, q) = right * cos_right.asDiagonal() * right.transpose();
  return out.cast<cplx>();
}

/// exp(c x) = diag(exp(i u x), exp(i w x)); both blocks Hermitian, exponentiated spectrally.
inline ComplexMatrix exp_noncompact(const ComplexMatrix& c, const ThetaSignature& sig, double x) {
  if (c.rows() != sig.m()) throw std::invalid_argument("exp_noncompact: dimension mismatch");
  auto herm_exp = [x](const ComplexMatrix& block) -> ComplexMatrix {
    if (block.size() == 0) return block;
    const ComplexMatrix sym = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    const RealVector e = (es.eigenvalues() * x).array().exp();
    return es.eigenvectors() * e.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  };
  ComplexMatrix out = ComplexMatrix::Zero(sig.m(), sig.m());
  out.topLeftCorner(sig.p, sig.p) = herm_exp(c.topLeftCorner(sig.p, sig.p));
  out.bottomRightCorner(sig.q, sig.q) = herm_exp(c.bottomRightCorner(sig.q, sig.q));
  return out;
}

struct PolarFactors {
  ComplexMatrix compact;       // U_k (unitary, real)
  ComplexMatrix positive;      // U_p = (U†U)^{1/2}
  ComplexMatrix log_positive;  // Hermitian log of U_p
  double unitarity_residual = 0.0;
  double reality_residual = 0.0;
  double log_in_imag_so = 0.0;    // log U_p ∈ i·so(m,R)
  double log_block_offdiag = 0.0;  // size of the Theta-off-diagonal block of log U_p (0 ⇔ log ∈ p_Theta)
  double roundtrip_residual = 0.0;
  bool pass = false;
};

inline PolarFactors group_polar(const ComplexMatrix& u, const ThetaSignature& sig, double tol = 1e-9) {
  if (u.rows() != sig.m() || u.cols() != sig.m()) throw std::invalid_argument("group_polar: dimension mismatch");
  // Polar factors from the SVD U = W S V†: U_p = V S V†, U_k = W V†. Going through
  // U†U instead would square the condition number of U.
  Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  if (!(sv.minCoeff() > 1e-14 * sv.maxCoeff())) throw NumericalError("group_polar: U is singular");
  const ComplexMatrix& vecs = svd.matrixV();
  PolarFactors f;
  f.positive = vecs * sv.cast<cplx>().asDiagonal() * vecs.adjoint();
  f.log_positive = vecs * sv.array().log().matrix().cast<cplx>().asDiagonal() * vecs.adjoint();
  f.compact = svd.matrixU() * vecs.adjoint();

  const Eigen::Index m = sig.m();
  f.unitarity_residual = max_abs(f.compact.adjoint() * f.compact - ComplexMatrix::Identity(m, m));
  f.reality_residual = max_abs(ComplexMatrix(f.compact.imag().cast<cplx>()));
  const ComplexMatrix& l = f.log_positive;
  const double scale = std::max(1.0, max_abs(l));
  f.log_in_imag_so = std::max(max_abs(ComplexMatrix(l.real().cast<cplx>())), max_abs(l + l.transpose())) / scale;
  f.log_block_offdiag = std::max(max_abs(l.topRightCorner(sig.p, sig.q)), max_abs(l.bottomLeftCorner(sig.q, sig.p))) / scale;
  f.roundtrip_residual = max_abs(f.compact * f.positive - u) / std::max(1.0, max_abs(u));
  f.pass = f.unitarity_residual <= tol && f.reality_residual <= tol && f.log_in_imag_so <= tol &&
           f.roundtrip_residual <= tol;
  return f;
}

struct ParityReport {
  double compact = 0.0;     // Theta U_k(−x) Theta − U_k(x)
  double noncompact = 0.0;  // Theta U_p(−x) Theta U_p(x) − I
  double metric = 0.0;      // U(x)† Theta U(−x) − Theta
  double worst() const { return std::max({compact, noncompact, metric}); }
};

/// Constant-matrix content of the parity relations of the split group factors
/// and of eta = U† P U = P; residuals relative to the factor sizes.
inline ParityReport parity_relations_check(const GaugeAlgebraElement& a, double x) {
  const ThetaSignature& sig = a.signature();
  const ComplexMatrix t = sig.theta();
  const CartanComponents parts = cartan_split(a);
  const ComplexMatrix uk_plus = exp_compact(parts.compact, sig, x);
  const ComplexMatrix uk_minus = exp_compact(parts.compact, sig, -x);
  const ComplexMatrix up_plus = exp_noncompact(parts.noncompact, sig, x);
  const ComplexMatrix up_minus = exp_noncompact(parts.noncompact, sig, -x);
  ParityReport r;
  r.compact = max_abs(t * uk_minus * t - uk_plus);
  // Inverse identity checked as a product against I, scaled like the metric
  // residual; an explicit inverse would square the condition number of U_p.
  const ComplexMatrix reflected = t * up_minus * t;
  r.noncompact = max_abs(reflected * up_plus - ComplexMatrix::Identity(t.rows(), t.cols())) /
                 (max_abs(reflected) * max_abs(up_plus));
  const ComplexMatrix u_plus = uk_plus * up_plus;
  const ComplexMatrix u_minus = uk_minus * up_minus;
  r.metric = max_abs(u_plus.adjoint() * t * u_minus - t) / (max_abs(u_plus) * max_abs(u_minus));
  return r;
}

/// Real dimension of the span of `samples` random compact (or noncompact) components.
inline int sampled_component_rank(const ThetaSignature& sig, bool compact_part, int samples, std::mt19937_64& rng) {
  const Eigen::Index len = static_cast<Eigen::Index>(sig.m()) * sig.m();
  RealMatrix stacked(2 * len, samples);
  for (int k = 0; k < samples; ++k) {
    const CartanComponents parts = cartan_split(random_element(sig, rng));
    const ComplexMatrix& x = compact_part ? parts.compact : parts.noncompact;
    stacked.col(k).head(len) = x.real().reshaped();
    stacked.col(k).tail(len) = x.imag().reshaped();
  }
  Eigen::FullPivLU<RealMatrix> lu(stacked);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

inline int expected_compact_dimension(const ThetaSignature& s) { return s.p * s.q; }
inline int expected_noncompact_dimension(const ThetaSignature& s) { return s.p * (s.p - 1) / 2 + s.q * (s.q - 1) / 2; }

}  // namespace krein::cartan
