#pragma once

// Dense complex linear algebra, spectra and the staggered 1D grid shared by
// every other module.

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace krein {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an iterative routine fails or a result leaves the finite range.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  if (!all_finite(m)) throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Relative deviation ‖a − b‖_F / max(1, ‖b‖_F).
inline double relative_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline ComplexMatrix to_complex(const RealMatrix& m) { return m.cast<cplx>(); }

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }
inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

// Pauli matrices.
inline ComplexMatrix sigma1() {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}
inline ComplexMatrix sigma2() {
  ComplexMatrix s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}
inline ComplexMatrix sigma3() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Spectra

struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  std::optional<ComplexMatrix> eigenvectors;  // columns, same order as eigenvalues
  // max_k ‖M v_k − λ_k v_k‖ / (‖M‖_F ‖v_k‖); 0 when vectors were not requested.
  double residual_norm = 0.0;
};

/// zgeev did not converge; holds the trailing eigenvalues LAPACK reported as converged.
class EigenConvergenceError : public NumericalError {
 public:
  EigenConvergenceError(int first_converged, std::vector<cplx> converged)
      : NumericalError("eig: QR iteration failed; only eigenvalues " + std::to_string(first_converged) +
                       ".." + std::to_string(first_converged + static_cast<int>(converged.size()) - 1) +
                       " converged"),
        converged_(std::move(converged)) {}
  const std::vector<cplx>& converged() const { return converged_; }

 private:
  std::vector<cplx> converged_;
};

inline bool spectral_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// Eigenvalues (and optionally right eigenvectors) of a dense complex matrix,
/// sorted by real part, then imaginary part.
inline SpectrumResult eig(const ComplexMatrix& m, bool want_vectors = false) {
  require_square_finite(m, "eig");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  ComplexMatrix work = m;  // zgeev overwrites its input
  std::vector<cplx> w(static_cast<std::size_t>(n));
  ComplexMatrix vr;
  if (want_vectors) vr.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(),
      n, w.data(), nullptr, 1, want_vectors ? vr.data() : nullptr,
      want_vectors ? n : 1);
  if (info < 0) throw std::invalid_argument("eig: zgeev rejected argument " + std::to_string(-info));
  if (info > 0) {
    std::vector<cplx> converged;
    for (lapack_int k = info; k < n; ++k) converged.push_back(w[static_cast<std::size_t>(k)]);
    throw EigenConvergenceError(static_cast<int>(info), std::move(converged));
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  auto value = [&](std::size_t k) { return w[k]; };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spectral_less(value(a), value(b)); });

  SpectrumResult out;
  out.eigenvalues.reserve(order.size());
  for (std::size_t k : order) out.eigenvalues.push_back(value(k));
  if (want_vectors) {
    ComplexMatrix sorted(n, n);
    for (std::size_t k = 0; k < order.size(); ++k)
      sorted.col(static_cast<Eigen::Index>(k)) = vr.col(static_cast<Eigen::Index>(order[k]));
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const ComplexVector v = sorted.col(k);
      const double r = (m * v - out.eigenvalues[static_cast<std::size_t>(k)] * v).norm() / (scale * v.norm());
      worst = std::max(worst, r);
    }
    out.residual_norm = worst;
    out.eigenvectors = std::move(sorted);
  }
  return out;
}

/// Greedy nearest-neighbour matching of `lhs` into `rhs` (each rhs entry used once).
/// Returns, for every lhs entry in order, the matched rhs index and |lhs − rhs|.
inline std::vector<std::pair<std::size_t, double>> match_spectra(const std::vector<cplx>& lhs,
                                                                 const std::vector<cplx>& rhs) {
  if (lhs.size() > rhs.size()) throw std::invalid_argument("match_spectra: lhs larger than rhs");
  std::vector<bool> used(rhs.size(), false);
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(lhs.size());
  for (const cplx& l : lhs) {
    std::size_t best = rhs.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(l - rhs[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    out.emplace_back(best, best_d);
  }
  return out;
}

/// max_k |lhs_k − matched rhs| / (1 + |lhs_k|).
inline double max_relative_mismatch(const std::vector<cplx>& lhs, const std::vector<cplx>& rhs) {
  const auto m = match_spectra(lhs, rhs);
  double worst = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) worst = std::max(worst, m[k].second / (1.0 + std::abs(lhs[k])));
  return worst;
}

inline std::vector<cplx> lowest(std::vector<cplx> values, std::size_t count) {
  std::sort(values.begin(), values.end(), spectral_less);
  if (values.size() > count) values.resize(count);
  return values;
}

enum class PairingKind { all_real, conjugate_paired, unpaired };

inline const char* to_string(PairingKind k) {
  switch (k) {
    case PairingKind::all_real:
      return "all_real";
    case PairingKind::conjugate_paired:
      return "conjugate_paired";
    case PairingKind::unpaired:
      return "unpaired";
  }
  return "?";
}

struct PairingResult {
  PairingKind kind = PairingKind::all_real;
  std::vector<std::pair<cplx, cplx>> pairs;
  std::vector<cplx> unpaired;
};

/// Classifies a spectrum as real, closed under conjugation, or violating it.
inline PairingResult pairing_check(const std::vector<cplx>& values, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("pairing_check: tol must be positive");
  PairingResult out;
  std::vector<std::size_t> complex_idx;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (std::abs(values[k].imag()) > tol) complex_idx.push_back(k);
  std::vector<bool> used(complex_idx.size(), false);
  for (std::size_t a = 0; a < complex_idx.size(); ++a) {
    if (used[a]) continue;
    const cplx la = values[complex_idx[a]];
    std::size_t best = complex_idx.size();
    double best_d = tol;
    for (std::size_t b = a + 1; b < complex_idx.size(); ++b) {
      if (used[b]) continue;
      const double d = std::abs(la - std::conj(values[complex_idx[b]]));
      if (d <= best_d) {
        best_d = d;
        best = b;
      }
    }
    used[a] = true;
    if (best == complex_idx.size()) {
      out.unpaired.push_back(la);
    } else {
      used[best] = true;
      out.pairs.emplace_back(la, values[complex_idx[best]]);
    }
  }
  if (!out.unpaired.empty())
    out.kind = PairingKind::unpaired;
  else if (!out.pairs.empty())
    out.kind = PairingKind::conjugate_paired;
  return out;
}

inline PairingResult pairing_check(const SpectrumResult& s, double tol) { return pairing_check(s.eigenvalues, tol); }

// ---------------------------------------------------------------------------
// Matrix exponential: Padé scaling and squaring (Higham 2005 degree selection).

namespace detail {

inline double norm1(const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t K>
ComplexMatrix pade_approximant(const ComplexMatrix& a, const std::array<double, K>& b) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix u, v;
  if constexpr (K == 14) {
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix tu = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u = a * tu;
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  } else {
    ComplexMatrix power = id;  // a^{2k}
    ComplexMatrix odd = ComplexMatrix::Zero(n, n);
    v = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k + 1 < K; k += 2) {
      v += b[k] * power;
      odd += b[k + 1] * power;
      power = power * a2;
    }
    u = a * odd;
  }
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// Matrix exponential.
inline ComplexMatrix expm(const ComplexMatrix& m) {
  require_square_finite(m, "expm");
  static constexpr std::array<double, 4> b3{120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                            25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                             2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  static constexpr std::array<double, 14> b13{64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                              670442572800.0,      33522128640.0,       1323241920.0,
                                              40840800.0,          960960.0,            16380.0,
                                              182.0,               1.0};
  const double n1 = detail::norm1(m);
  ComplexMatrix out;
  if (n1 <= 1.495585217958292e-2) {
    out = detail::pade_approximant(m, b3);
  } else if (n1 <= 2.539398330063230e-1) {
    out = detail::pade_approximant(m, b5);
  } else if (n1 <= 9.504178996162932e-1) {
    out = detail::pade_approximant(m, b7);
  } else if (n1 <= 2.097847961257068) {
    out = detail::pade_approximant(m, b9);
  } else {
    const double theta13 = 5.371920351148152;
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(n1 / theta13))));
    if (s > 1023) throw NumericalError("expm: norm too large to scale");
    out = detail::pade_approximant(ComplexMatrix(m * std::ldexp(1.0, -s)), b13);
    for (int k = 0; k < s; ++k) out = out * out;
  }
  if (!all_finite(out)) throw NumericalError("expm: result overflowed");
  return out;
}

// ---------------------------------------------------------------------------
// Staggered symmetric grid: x_j = (j + 1/2) h, j = −N … N−1. Zero is never a node.

struct Grid1D {
  int half_count = 0;
  double spacing = 0.0;

  Grid1D() = default;
  Grid1D(int n, double h) : half_count(n), spacing(h) {
    if (n < 1) throw std::invalid_argument("Grid1D: half_count must be positive");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("Grid1D: spacing must be positive");
  }

  /// Smallest grid with spacing h whose nodes cover [−half_width, half_width].
  static Grid1D covering(double half_width, double h) {
    return Grid1D(static_cast<int>(std::llround(half_width / h)), h);
  }

  int size() const { return 2 * half_count; }
  double node(int i) const { return (i - half_count + 0.5) * spacing; }
  int mirror(int i) const { return size() - 1 - i; }
  double half_width() const { return half_count * spacing; }

  RealVector nodes() const {
    RealVector x(size());
    for (int i = 0; i < size(); ++i) x(i) = node(i);
    return x;
  }
};

enum class OperatorKind { momentum, parity, sign, position, second_derivative };

/// A matrix acting on grid functions with `block_dim` components per node
/// (node-major ordering: index = node * block_dim + component).
struct GridOperator {
  Grid1D grid;
  int block_dim = 1;
  ComplexMatrix matrix;

  Eigen::Index dim() const { return matrix.rows(); }
};

namespace detail {

inline GridOperator blank(const Grid1D& g, int m) {
  if (m < 1) throw std::invalid_argument("grid operator: block_dim must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(g.size()) * m;
  return GridOperator{g, m, ComplexMatrix::Zero(n, n)};
}

}  // namespace detail

inline GridOperator grid_operator(const Grid1D& g, OperatorKind kind, int block_dim = 1) {
  GridOperator op = detail::blank(g, block_dim);
  const int n = g.size();
  const int m = block_dim;
  const double h = g.spacing;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < m; ++c) {
      const Eigen::Index r = static_cast<Eigen::Index>(i) * m + c;
      switch (kind) {
        case OperatorKind::momentum:
          // −i (f_{j+1} − f_{j−1}) / (2h), Dirichlet closure
          if (i + 1 < n) op.matrix(r, r + m) = -kI / (2.0 * h);
          if (i > 0) op.matrix(r, r - m) = kI / (2.0 * h);
          break;
        case OperatorKind::second_derivative:
          op.matrix(r, r) = -2.0 / (h * h);
          if (i + 1 < n) op.matrix(r, r + m) = 1.0 / (h * h);
          if (i > 0) op.matrix(r, r - m) = 1.0 / (h * h);
          break;
        case OperatorKind::parity:
          op.matrix(r, static_cast<Eigen::Index>(g.mirror(i)) * m + c) = 1.0;
          break;
        case OperatorKind::sign:
          op.matrix(r, r) = g.node(i) > 0.0 ? 1.0 : -1.0;
          break;
        case OperatorKind::position:
          op.matrix(r, r) = g.node(i);
          break;
      }
    }
  }
  return op;
}

/// diag(f(x_j)) ⊗ I_m.
inline GridOperator multiplication_operator(const Grid1D& g, const std::function<cplx(double)>& f, int block_dim = 1) {
  GridOperator op = detail::blank(g, block_dim);
  for (int i = 0; i < g.size(); ++i) {
    const cplx v = f(g.node(i));
    for (int c = 0; c < block_dim; ++c) {
      const Eigen::Index r = static_cast<Eigen::Index>(i) * block_dim + c;
      op.matrix(r, r) = v;
    }
  }
  return op;
}

/// blockdiag_j F(x_j) for a matrix-valued function.
inline GridOperator block_multiplication_operator(const Grid1D& g, const std::function<ComplexMatrix(double)>& f,
                                                  int block_dim) {
  GridOperator op = detail::blank(g, block_dim);
  for (int i = 0; i < g.size(); ++i) {
    const ComplexMatrix v = f(g.node(i));
    if (v.rows() != block_dim || v.cols() != block_dim)
      throw std::invalid_argument("block_multiplication_operator: block has wrong size");
    op.matrix.block(static_cast<Eigen::Index>(i) * block_dim, static_cast<Eigen::Index>(i) * block_dim, block_dim,
                    block_dim) = v;
  }
  return op;
}

inline bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx(0.0)) return false;
  return true;
}

/// Quadrature of (f, W J g): h Σ_j w_j (J g)_j conj(f_j).
inline cplx indefinite_inner(const ComplexVector& f, const ComplexVector& g, const GridOperator& involution,
                             const GridOperator& weight) {
  if (f.size() != g.size() || f.size() != involution.dim() || f.size() != weight.dim())
    throw std::invalid_argument("indefinite_inner: dimension mismatch");
  if (!is_diagonal(weight.matrix)) throw std::invalid_argument("indefinite_inner: weight must be diagonal");
  for (Eigen::Index k = 0; k < weight.dim(); ++k) {
    const cplx w = weight.matrix(k, k);
    if (!(w.real() > 0.0) || w.imag() != 0.0)
      throw std::invalid_argument("indefinite_inner: weight entry " + std::to_string(k) + " is not positive");
  }
  const ComplexVector jg = involution.matrix * g;
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k) sum += weight.matrix(k, k).real() * jg(k) * std::conj(f(k));
  return sum * weight.grid.spacing;
}

// ---------------------------------------------------------------------------
// Weak-form evaluation on interior test functions.

/// Orthonormal (ℓ²) columns spanning the first `count` Hermite functions of
/// width `width`, each zeroed within `buffer` nodes of both ends, ⊗ I_m.
inline ComplexMatrix interior_test_basis(const Grid1D& g, int count, double width = 1.0, int buffer = 5,
                                         int block_dim = 1) {
  const int n = g.size();
  RealMatrix raw = RealMatrix::Zero(n, count);
  for (int i = buffer; i < n - buffer; ++i) {
    const double t = g.node(i) / width;
    const double envelope = std::exp(-0.5 * t * t);
    double h_prev = 0.0;
    double h_cur = 1.0;  // physicists' Hermite recursion, scaled by 1/sqrt(2^k k!) on the fly
    for (int k = 0; k < count; ++k) {
      raw(i, k) = h_cur * envelope;
      const double next = (t * std::sqrt(2.0) * h_cur - std::sqrt(static_cast<double>(k)) * h_prev) /
                          std::sqrt(static_cast<double>(k + 1));
      h_prev = h_cur;
      h_cur = next;
    }
  }
  // Orthonormalise the interior rows only, so the buffer rows stay exactly zero.
  const int inner = n - 2 * buffer;
  if (inner < count) throw std::invalid_argument("interior_test_basis: grid too small for the requested basis");
  RealMatrix q = RealMatrix::Zero(n, count);
  q.middleRows(buffer, inner) =
      raw.middleRows(buffer, inner).householderQr().householderQ() * RealMatrix::Identity(inner, count);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * block_dim,
                                          static_cast<Eigen::Index>(count) * block_dim);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < count; ++k)
      for (int c = 0; c < block_dim; ++c)
        out(static_cast<Eigen::Index>(i) * block_dim + c, static_cast<Eigen::Index>(k) * block_dim + c) = q(i, k);
  return out;
}

/// ‖Φ† X Φ‖_F for a test basis Φ.
inline double weak_norm(const ComplexMatrix& basis, const ComplexMatrix& x) {
  return (basis.adjoint() * x * basis).norm();
}

/// Observed order log2(e(h) / e(h/2)).
inline double convergence_order(double coarse_error, double fine_error) {
  return std::log2(coarse_error / fine_error);
}

}  // namespace krein
