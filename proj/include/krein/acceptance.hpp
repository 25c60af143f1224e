#pragma once

// The ten acceptance criteria at their default desk-scale parameters. Shared by
// `krein verify-all` and the acceptance test binary.

#include "krein/suite.hpp"

#include <chrono>

namespace krein::acceptance {

struct Criterion {
  int id = 0;
  std::string title;
  std::function<Report()> run;
};

inline config::Settings defaults(const std::vector<config::ParamSpec>& specs,
                                 const std::map<std::string, std::string>& overrides = {}) {
  return config::resolve(specs, {}, overrides);
}

inline Report clifford_relations() {
  Report r;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int span_min = 4, span_max = 4;
  for (const auto& [half, h] : std::vector<std::pair<int, double>>{{1, 1.0}, {2, 0.3}, {7, 0.125}, {64, 0.05}, {257, 0.0173}}) {
    const Grid1D g(half, h);
    const clifford::CliffordGenerators gens{
        2, 0, {grid_operator(g, OperatorKind::parity).matrix, grid_operator(g, OperatorKind::sign).matrix}};
    const auto rep = clifford::verify_clifford_relations(gens, 0.0);
    worst = std::max(worst, rep.max_residual);
    span_min = std::min(span_min, rep.span_dimension);
    span_max = std::max(span_max, rep.span_dimension);
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.add(Check::equal("relations_exact", worst, 0.0));
  r.add(Check::equal("span_dimension_min", span_min, 4));
  r.add(Check::equal("span_dimension_max", span_max, 4));
  r.add(Check::flag("runtime_under_1s", elapsed < 1.0));
  return r;
}

inline Report rotated_involution() {
  Report r;
  r.seed = 21;
  const Grid1D g(16, 0.2);
  const GridOperator p = grid_operator(g, OperatorKind::parity);
  const GridOperator s = grid_operator(g, OperatorKind::sign);
  const ComplexMatrix id = ComplexMatrix::Identity(p.dim(), p.dim());
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double square = 0.0, herm = 0.0, route = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto rot = clifford::rotated_involution(p, s, angle(rng));
    square = std::max(square, max_abs(rot.matrix * rot.matrix - id));
    herm = std::max(herm, max_abs(rot.matrix.adjoint() - rot.matrix));
    route = std::max(route, rot.route_agreement);
  }
  r.add(Check::at_most("involution", square, 1e-12));
  r.add(Check::at_most("hermitian", herm, 1e-12));
  r.add(Check::at_most("half_angle_route_agreement", route, 1e-12));
  return r;
}

inline Report lts_all() {
  Report r;
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
    const std::string tag = "pq" + std::to_string(p) + std::to_string(q) + ".";
    r.absorb(suite::lts_analysis(defaults(suite::lts_params(), {{"p", std::to_string(p)}, {"q", std::to_string(q)}})),
             tag);
  }
  return r;
}

/// Closed-form exponentials over x in [−5, 5] for three signatures plus the m = 2 examples.
inline Report exponentials() {
  Report r;
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
    const cartan::ThetaSignature sig(p, q);
    std::mt19937_64 rng(100 + p * 10 + q);
    double ek = 0.0, ep = 0.0;
    for (int n = 0; n < 20; ++n) {
      const auto parts = cartan::cartan_split(cartan::random_element(sig, rng, 0.5));
      for (int k = 0; k <= 40; ++k) {
        const double x = -5.0 + 0.25 * k;
        ek = std::max(ek, suite::relative_gap(cartan::exp_compact(parts.compact, sig, x), expm(parts.compact * x)));
        ep = std::max(ep, suite::relative_gap(cartan::exp_noncompact(parts.noncompact, sig, x), expm(parts.noncompact * x)));
      }
    }
    const std::string tag = "pq" + std::to_string(p) + std::to_string(q) + ".";
    r.add(Check::at_most(tag + "exp_compact_vs_expm", ek, 1e-10));
    r.add(Check::at_most(tag + "exp_noncompact_vs_expm", ep, 1e-10));
  }
  r.absorb(suite::two_by_two_examples(0.7, -5.0, 5.0, 41, 1e-10), "example.");
  return r;
}

inline Report parity_relations() {
  Report r;
  r.seed = 6;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> xdist(-5.0, 5.0);
  const std::vector<cartan::ThetaSignature> sigs{{2, 1}, {2, 2}, {3, 1}};
  cartan::ParityReport worst;
  for (int n = 0; n < 500; ++n) {
    const auto a = cartan::random_element(sigs[static_cast<std::size_t>(n) % sigs.size()], rng, 0.5);
    const auto rep = cartan::parity_relations_check(a, xdist(rng));
    worst.compact = std::max(worst.compact, rep.compact);
    worst.noncompact = std::max(worst.noncompact, rep.noncompact);
    worst.metric = std::max(worst.metric, rep.metric);
  }
  r.add(Check::at_most("compact_factor", worst.compact, 1e-10));
  r.add(Check::at_most("noncompact_factor", worst.noncompact, 1e-10));
  r.add(Check::at_most("metric", worst.metric, 1e-10));
  return r;
}

inline Report point_spectra() {
  Report r;
  r.absorb(suite::point_spectrum(defaults(suite::point_spectrum_params())), "delta.");
  r.absorb(suite::phase_diagram(defaults(suite::phase_diagram_params())), "sweep.");
  return r;
}

inline Report clifford_angle() {
  Report r = suite::point_angle(defaults(suite::point_angle_params()));
  const point::PhiSolution sol = point::clifford_angle({1.0, kI, -kI, 0.0});
  r.add(Check::equal("example_phi_equals_atan2_4_3", sol.phi, std::atan2(4.0, 3.0)));
  return r;
}

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "Clifford relations of parity and sign on the grid", clifford_relations},
      {2, "rotated involution is a Hermitian involution", rotated_involution},
      {3, "abelian gauge factorization and pseudo-Hermiticity",
       [] { return suite::gauge_scalar(defaults(suite::gauge_scalar_params())); }},
      {4, "Lie triple system closure and Cartan dimensions", lts_all},
      {5, "closed-form exponentials against the Pade exponential", exponentials},
      {6, "parity and metric identities of the group factors", parity_relations},
      {7, "matrix Schrodinger re-gauging and spectra",
       [] { return suite::spectrum_matrix(defaults(suite::spectrum_matrix_params())); }},
      {8, "Jaynes-Cummings Fock build against the grid", [] { return suite::jc_analysis(defaults(suite::jc_params())); }},
      {9, "Clifford angle and boundary transform", clifford_angle},
      {10, "point-interaction bound states and PT sweep", point_spectra},
  };
  return list;
}

struct Outcome {
  int id = 0;
  std::string title;
  Report report;
  double seconds = 0.0;
  std::string error;  // non-empty when the run threw
  bool pass() const { return error.empty() && report.pass(); }
};

inline Outcome run(const Criterion& c) {
  Outcome o{c.id, c.title, {}, 0.0, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    o.report = c.run();
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

/// Aggregated report of a set of outcomes, checks prefixed "c<id>.".
inline Report combine(const std::vector<Outcome>& outcomes) {
  Report all;
  all.command = "verify-all";
  for (const auto& o : outcomes) {
    const std::string prefix = "c" + std::to_string(o.id) + ".";
    if (!o.error.empty()) {
      all.add(Check::flag(prefix + "completed", false));
      all.notes.push_back(prefix + "error: " + o.error);
      continue;
    }
    all.absorb(o.report, prefix);
  }
  return all;
}

}  // namespace krein::acceptance
