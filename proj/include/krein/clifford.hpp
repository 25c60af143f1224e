#pragma once

// Clifford-relation checks for concrete generator matrices and the rotated
// involution P_phi = P exp(i phi R).

#include "krein/numerics.hpp"

#include <Eigen/Sparse>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace krein::clifford {

// Grid parity and sign operators are permutation / diagonal matrices, so the
// relation checks multiply in sparse form: exact arithmetic, O(n) work.
using SparseComplex = Eigen::SparseMatrix<cplx>;

inline SparseComplex to_sparse(const ComplexMatrix& m) { return m.sparseView(0.0, 0.0); }

inline double sparse_max_abs(const SparseComplex& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseComplex::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

/// Generators e_1..e_{m+n} with e_i^2 = +I for the first `positive_count`, −I for the rest.
struct CliffordGenerators {
  int positive_count = 0;
  int negative_count = 0;
  std::vector<ComplexMatrix> generators;
};

struct CliffordReport {
  double max_residual = 0.0;
  bool pass = false;
  int span_dimension = 0;  // rank of the 2^k subset products (4 for two generators)
};

/// Products e_{i1} e_{i2} ... over every subset (ascending index order), identity first.
inline std::vector<ComplexMatrix> basis_products(const std::vector<ComplexMatrix>& gens) {
  const std::size_t k = gens.size();
  if (k > 12) throw std::invalid_argument("basis_products: too many generators");
  const Eigen::Index n = gens.empty() ? 0 : gens.front().rows();
  std::vector<SparseComplex> sparse;
  for (const auto& g : gens) sparse.push_back(to_sparse(g));
  std::vector<ComplexMatrix> out;
  out.reserve(std::size_t{1} << k);
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    SparseComplex p(n, n);
    p.setIdentity();
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) p = SparseComplex(p * sparse[i]);
    out.push_back(ComplexMatrix(p));
  }
  return out;
}

/// Numerical rank of the span of a set of equally sized matrices.
inline int span_rank(const std::vector<ComplexMatrix>& mats, double rel_tol = 1e-10) {
  if (mats.empty()) return 0;
  const Eigen::Index len = mats.front().size();
  ComplexMatrix stacked(len, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t c = 0; c < mats.size(); ++c)
    stacked.col(static_cast<Eigen::Index>(c)) = mats[c].reshaped();
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(stacked);
  qr.setThreshold(rel_tol);
  return static_cast<int>(qr.rank());
}

inline CliffordReport verify_clifford_relations(const CliffordGenerators& gens, double tol) {
  const auto& e = gens.generators;
  if (gens.positive_count < 0 || gens.negative_count < 0 ||
      static_cast<std::size_t>(gens.positive_count + gens.negative_count) != e.size())
    throw std::invalid_argument("verify_clifford_relations: signature does not match generator count");
  if (e.empty()) throw std::invalid_argument("verify_clifford_relations: no generators");
  const Eigen::Index n = e.front().rows();
  for (const auto& g : e)
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("verify_clifford_relations: generators must be square of equal dimension");

  SparseComplex id(n, n);
  id.setIdentity();
  std::vector<SparseComplex> sp;
  for (const auto& g : e) sp.push_back(to_sparse(g));
  CliffordReport r;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double square_sign = static_cast<int>(i) < gens.positive_count ? 1.0 : -1.0;
    r.max_residual = std::max(r.max_residual, sparse_max_abs(SparseComplex(sp[i] * sp[i] - square_sign * id)));
    for (std::size_t k = i + 1; k < sp.size(); ++k)
      r.max_residual = std::max(r.max_residual, sparse_max_abs(SparseComplex(sp[i] * sp[k] + sp[k] * sp[i])));
  }
  r.pass = r.max_residual <= tol;
  r.span_dimension = span_rank(basis_products(e));
  return r;
}

/// P_phi = P exp(i phi R); `route_agreement` is the max entry deviation from
/// exp(−i phi R/2) P exp(i phi R/2).
struct RotatedInvolution {
  double phi = 0.0;
  GridOperator base_parity;
  GridOperator base_sign;
  ComplexMatrix matrix;
  double route_agreement = 0.0;
};

inline RotatedInvolution rotated_involution(const GridOperator& parity, const GridOperator& sign_op, double phi,
                                            double tol = 1e-12) {
  const ComplexMatrix& p = parity.matrix;
  const ComplexMatrix& s = sign_op.matrix;
  if (p.rows() != s.rows()) throw std::invalid_argument("rotated_involution: dimension mismatch");
  const Eigen::Index n = p.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (max_abs(p * p - id) > tol || max_abs(s * s - id) > tol)
    throw std::invalid_argument("rotated_involution: inputs must be involutions");
  if (max_abs(anticommutator(p, s)) > tol)
    throw std::invalid_argument("rotated_involution: parity and sign operator do not anticommute");

  const ComplexMatrix first = p * expm(kI * phi * s);
  const ComplexMatrix second = expm(-kI * (phi / 2.0) * s) * p * expm(kI * (phi / 2.0) * s);
  return RotatedInvolution{phi, parity, sign_op, first, max_abs(first - second)};
}

}  // namespace krein::clifford
