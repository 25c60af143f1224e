// Gauge models, Jaynes-Cummings, point interactions and the suite-level analyses
// at small sizes.

#include "krein/abelian_gauge.hpp"
#include "krein/acceptance.hpp"
#include "krein/clifford.hpp"
#include "krein/jaynes_cummings.hpp"
#include "krein/matrix_schrodinger.hpp"
#include "krein/point_interaction.hpp"
#include "krein/suite.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace krein;
using Catch::Approx;

// ---------------------------------------------------------------------------
// Abelian gauge

TEST_CASE("gauge factorization reproduces the closed forms", "[abelian]") {
  const Grid1D g = Grid1D::covering(4.0, 0.05);
  const double beta = 0.3, alpha = 1.0;
  const auto lin = abelian::gauge_factorization([beta](double x) { return cplx(0.0, beta * x); }, g);
  const auto con = abelian::gauge_factorization([alpha](double) { return cplx(alpha, 0.0); }, g);
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    CHECK(std::abs(lin.hermitian.matrix(i, i) - std::exp(0.5 * beta * x * x)) <= 1e-10 * std::exp(0.5 * beta * x * x));
    CHECK(std::abs(con.unitary.matrix(i, i) - std::exp(-kI * alpha * x)) <= 1e-12);
  }
  CHECK(abelian::polar_residuals(lin).worst() <= 1e-12);
  CHECK(abelian::polar_residuals(con).worst() <= 1e-12);
  CHECK(con.sign_of_q.has_value());
  CHECK(con.sign_split_residual == 0.0);
}

TEST_CASE("gauge that is not PT-symmetric is rejected", "[abelian]") {
  const Grid1D g(10, 0.1);
  CHECK_THROWS_AS(abelian::gauge_factorization([](double x) { return cplx(x, 0.0); }, g), std::invalid_argument);
}

TEST_CASE("covariant scheme is pseudo-Hermitian while naive parity fails", "[abelian]") {
  const Grid1D g = Grid1D::covering(8.0, 0.05);
  const abelian::ScalarPotentials pots{[](double) { return cplx(1.0, 0.0); },
                                       [](double x) { return cplx(x * x, 0.2 * x); }};
  const auto fact = abelian::gauge_factorization(pots.gauge, g);
  const auto hg = abelian::build_scalar_hamiltonian(pots, g, abelian::KineticScheme::covariant);
  const auto r = abelian::verify_pseudo_hermiticity(hg, fact, 1e-8);
  CHECK(r.eta_residual <= 1e-12);
  CHECK(r.parity_residual > 0.1);
  CHECK(r.pass);
}

TEST_CASE("zero gauge reduces every scheme to p^2 + V", "[abelian]") {
  const Grid1D g(30, 0.1);
  const abelian::ScalarPotentials pots{[](double) { return cplx(0.0); }, [](double x) { return cplx(x * x, 0.0); }};
  const auto a = abelian::build_scalar_hamiltonian(pots, g, abelian::KineticScheme::expanded);
  const auto b = abelian::build_scalar_hamiltonian(pots, g, abelian::KineticScheme::covariant);
  const auto c = abelian::build_regauged_hamiltonian(pots.potential, g);
  CHECK(max_abs(a.matrix - c.matrix) == 0.0);
  CHECK(max_abs(b.matrix - c.matrix) <= 1e-12);
}

// ---------------------------------------------------------------------------
// Rotated parity on grid functions

TEST_CASE("grid P_phi acts on sampled functions as the piecewise formula", "[clifford][point]") {
  const Grid1D g(40, 0.05);
  const auto par = grid_operator(g, OperatorKind::parity);
  const auto sgn = grid_operator(g, OperatorKind::sign);
  point::PiecewiseFunction f;
  f.right = [](double x) { return cplx(std::exp(-x), 0.5 * x); };
  f.right_d = [](double x) { return cplx(-std::exp(-x), 0.5); };
  f.left = [](double x) { return cplx(1.0 + x * x, -std::sin(x)); };
  f.left_d = [](double x) { return cplx(2.0 * x, -std::cos(x)); };
  for (double phi : {0.0, 0.4, -1.2}) {
    const ComplexMatrix pphi = clifford::rotated_involution(par, sgn, phi).matrix;
    ComplexVector samples(g.size());
    for (int i = 0; i < g.size(); ++i) samples(i) = f(g.node(i));
    const ComplexVector image = pphi * samples;
    const point::PiecewiseFunction expected = point::apply_p_phi(f, phi);
    double worst = 0.0;
    for (int i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(image(i) - expected(g.node(i))));
    CHECK(worst <= 1e-14);
  }
}

// ---------------------------------------------------------------------------
// Matrix Schrodinger

TEST_CASE("symmetry audit accepts the sigma_2 example and rejects sigma_1", "[nonabelian]") {
  const cartan::ThetaSignature sig(1, 1);
  const Grid1D g(20, 0.2);
  const nonabelian::MatrixPotential v{2, [](double x) { return ComplexMatrix(x * x * ComplexMatrix::Identity(2, 2)); }};
  CHECK(nonabelian::symmetry_audit({0.5 * sigma2()}, v, sig, g, 1e-12).pass());
  const auto bad = nonabelian::symmetry_audit({0.5 * sigma1()}, v, sig, g, 1e-12);
  CHECK_FALSE(bad.pass());
  CHECK(bad.gauge_antisymmetry > 0.5);
}

TEST_CASE("random audited pairs pass the audit", "[nonabelian]") {
  std::mt19937_64 rng(77);
  const Grid1D g(30, 0.1);
  for (const cartan::ThetaSignature sig : {cartan::ThetaSignature{2, 1}, cartan::ThetaSignature{2, 2}}) {
    const auto pair = nonabelian::random_audited_pair(sig, rng);
    CHECK(nonabelian::symmetry_audit(pair.gauge, pair.potential, sig, g, 1e-12).pass());
  }
}

TEST_CASE("zero gauge: regauged and gauged Hamiltonians coincide", "[nonabelian]") {
  const Grid1D g(15, 0.2);
  const nonabelian::MatrixPotential v{2, [](double x) { return ComplexMatrix(x * x * ComplexMatrix::Identity(2, 2)); }};
  const auto sys = nonabelian::build_and_regauge({ComplexMatrix::Zero(2, 2)}, v, g);
  CHECK(max_abs(sys.gauged.matrix - sys.regauged.matrix) == 0.0);
  CHECK(max_abs(sys.similarity.matrix - sys.gauged.matrix) <= 1e-14);
}

TEST_CASE("m = 1 reduces to the scalar builder", "[nonabelian]") {
  const Grid1D g(25, 0.1);
  const nonabelian::MatrixPotential v{1, [](double x) { return ComplexMatrix::Constant(1, 1, cplx(x * x, 0.1 * x)); }};
  const auto mat = nonabelian::build_gauged_hamiltonian({ComplexMatrix::Constant(1, 1, cplx(0.7, 0.0))}, v, g);
  const auto sca = abelian::build_scalar_hamiltonian(
      {[](double) { return cplx(0.7, 0.0); }, [](double x) { return cplx(x * x, 0.1 * x); }}, g);
  CHECK(max_abs(mat.matrix - sca.matrix) <= 1e-12);
}

TEST_CASE("sigma_2 example: spectra agree and pair under conjugation", "[nonabelian]") {
  const cartan::ThetaSignature sig(1, 1);
  const Grid1D g = Grid1D::covering(7.0, 0.1);
  const nonabelian::MatrixPotential v{2, [](double x) { return ComplexMatrix(x * x * ComplexMatrix::Identity(2, 2)); }};
  const auto sys = nonabelian::build_and_regauge({0.5 * sigma2()}, v, g);
  const auto c = nonabelian::spectral_compare(sys.gauged, sys.regauged, sig, 6);
  CHECK(c.max_relative_mismatch <= 5e-2);
  CHECK(c.gauged_pairing != PairingKind::unpaired);
  CHECK(c.parity_residual <= 1e-10);
  // Low levels approach the oscillator values 1, 1, 3, 3, 5, 5.
  CHECK(c.gauged[0].real() == Approx(1.0).margin(5e-3));
  CHECK(c.gauged[5].real() == Approx(5.0).margin(5e-2));
}

// ---------------------------------------------------------------------------
// Jaynes-Cummings

TEST_CASE("Fock ladder algebra", "[jc]") {
  const auto f = jc::FockLadder::make(6);
  const ComplexMatrix comm = f.d * f.d_dag - f.d_dag * f.d;
  for (int n = 0; n < 6; ++n) CHECK(comm(n, n).real() == Approx(1.0));  // last level is truncated
  CHECK(f.number(4, 4).real() == Approx(4.0));
  CHECK_THROWS(jc::FockLadder::make(0));
}

TEST_CASE("nilpotent split round-trips", "[jc]") {
  std::mt19937_64 rng(5);
  for (const cartan::ThetaSignature sig : {cartan::ThetaSignature{1, 1}, cartan::ThetaSignature{2, 2}}) {
    const auto s = jc::nilpotent_split(cartan::random_element(sig, rng));
    CHECK(s.reconstruction_residual() == 0.0);
    CHECK(s.nilpotency_residual() <= 1e-12);
  }
}

TEST_CASE("two-level JC matches the polariton closed form and is PT-symmetric", "[jc]") {
  const auto a = cartan::GaugeAlgebraElement::make({1, 1}, RealMatrix::Zero(1, 1), RealMatrix::Constant(1, 1, 0.3),
                                                   RealMatrix::Zero(1, 1));
  const auto split = jc::nilpotent_split(a);
  const jc::LevelEnergies omega{{0.0, 0.5}};
  for (int sign : {1, -1}) {
    const ComplexMatrix h = jc::build_jc(split, omega, 10, sign);
    CHECK(jc::jc_pt_check(h, {1, 1}, 10, 1e-12).pass);
    CHECK(max_relative_mismatch(eig(h).eigenvalues, jc::two_level_spectrum(0.3, 0.5, 10, sign)) <= 1e-10);
  }
}

TEST_CASE("JC equivalence reports precondition failures", "[jc]") {
  const auto a = cartan::GaugeAlgebraElement::make({1, 1}, RealMatrix::Zero(1, 1), RealMatrix::Constant(1, 1, 0.3),
                                                   RealMatrix::Zero(1, 1));
  const auto small_box = jc::jc_equivalence_check(a, {{0.0, 0.5}}, Grid1D::covering(3.0, 0.1), 12, 4);
  CHECK_FALSE(small_box.precondition_ok);
  CHECK_FALSE(small_box.pass);
  const auto too_many = jc::jc_equivalence_check(a, {{0.0, 0.5}}, Grid1D::covering(10.0, 0.1), 12, 7);
  CHECK_FALSE(too_many.precondition_ok);
}

// ---------------------------------------------------------------------------
// Point interaction

TEST_CASE("Clifford angle of the worked example", "[point]") {
  const point::CouplingMatrix t{1.0, kI, -kI, 0.0};
  const auto s = point::clifford_angle(t);
  CHECK(s.phi == std::atan2(4.0, 3.0));
  CHECK(s.residual <= 1e-14);
  CHECK(point::matrix_relation_residual(t, s.phi) <= 1e-14);
  CHECK(point::p_phi_selfadjointness_check(t, s.phi, 1e-12).pass);
  CHECK_FALSE(point::p_phi_selfadjointness_check(t, s.phi + 0.3, 1e-6).pass);
}

TEST_CASE("Clifford angle vanishes for P-self-adjoint couplings and rejects non-PT input", "[point]") {
  CHECK(point::clifford_angle({2.0, cplx(0, 0.7), cplx(0, 0.7), -1.0}).phi == 0.0);
  CHECK(point::clifford_angle({-4.0, 0.0, 0.0, 0.0}).degenerate == false);
  CHECK(point::clifford_angle({0.0, 0.0, 0.0, 0.0}).phi == 0.0);
  CHECK_THROWS_AS(point::clifford_angle({cplx(1, 1), 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("boundary maps round-trip through traces", "[point]") {
  const point::Traces t{cplx(1, 2), cplx(-0.5, 0), cplx(0.3, -1), cplx(2, 2)};
  const auto b = point::boundary_maps(t);
  CHECK(point::trace_distance(point::traces_from_boundary(b.gamma0, b.gamma1), t) <= 1e-15);
}

TEST_CASE("attractive delta: one bound state at E = -(alpha/2)^2", "[point]") {
  // t11 = alpha, others zero: f'(0+) − f'(0−) = alpha f(0).
  for (double alpha : {-2.0, -0.6}) {
    const auto r = point::bound_states({alpha, 0.0, 0.0, 0.0});
    REQUIRE(r.states.size() == 1);
    CHECK(r.states[0].energy.real() == Approx(-0.25 * alpha * alpha));
    CHECK(r.states[0].domain_residual <= 1e-14);
  }
  CHECK(point::bound_states({1.0, 0.0, 0.0, 0.0}).states.empty());
}

TEST_CASE("exceptional-point slice: real, complex pair, then none", "[point]") {
  CHECK(point::sweep_point(-1.0, 1.0, 0.5, 0.5, 1e-9).classification == PairingKind::all_real);
  const auto complex_pair = point::sweep_point(-1.0, 1.0, 1.5, 1.5, 1e-9);
  CHECK(complex_pair.classification == PairingKind::conjugate_paired);
  CHECK(complex_pair.energies.size() == 2);
  CHECK(point::sweep_point(-1.0, 1.0, 2.6, 2.6, 1e-9).energies.empty());
  CHECK(point::sweep_point(-1.0, 1.0, 1.5, -1.5, 1e-9).classification == PairingKind::all_real);
}

TEST_CASE("indeterminate bound-state polynomial is flagged", "[point]") {
  // t11 = t22 = 0 and det T = 4 make every coefficient vanish.
  const auto r = point::bound_states({0.0, cplx(0, 2), cplx(0, 2), 0.0});
  CHECK(r.indeterminate);
  CHECK(r.states.empty());
}

TEST_CASE("phase sweep keeps row order", "[point]") {
  const auto rows = point::pt_phase_sweep({-1, 1, 3}, {0, 0, 1}, {0, 1, 2}, {0.5, 0.5, 1}, 1e-9);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].t11 == -1.0);
  CHECK(rows[1].im_t12 == 1.0);
  CHECK(rows[5].t11 == 1.0);
}

// ---------------------------------------------------------------------------
// Suite analyses at reduced sizes

TEST_CASE("suite analyses pass at small parameters", "[suite]") {
  using acceptance::defaults;
  CHECK(suite::gauge_scalar(defaults(suite::gauge_scalar_params(), {{"half_width", "6"}, {"h", "0.1"}})).pass());
  CHECK(suite::cartan_analysis(defaults(suite::cartan_params())).pass());
  CHECK(suite::lts_analysis(defaults(suite::lts_params(), {{"samples", "50"}})).pass());
  CHECK(suite::point_angle(defaults(suite::point_angle_params())).pass());
  CHECK(suite::point_spectrum(defaults(suite::point_spectrum_params())).pass());
}

TEST_CASE("suite rejects malformed parameters", "[suite]") {
  using acceptance::defaults;
  CHECK_THROWS_AS(suite::point_angle(defaults(suite::point_angle_params(), {{"t11", "1+1i"}})),
                  config::UsageError);
  CHECK_THROWS_AS(defaults(suite::lts_params(), {{"nope", "1"}}), config::UsageError);
}
