// Numerical kernels, independent oracles, Clifford / Cartan algebra, and the
// configuration and report plumbing.

#include "krein/cartan.hpp"
#include "krein/clifford.hpp"
#include "krein/config.hpp"
#include "krein/numerics.hpp"
#include "krein/oracles.hpp"
#include "krein/parallel.hpp"
#include "krein/report.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

using namespace krein;
using Catch::Approx;

namespace {

ComplexMatrix random_complex(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  ComplexMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = cplx(normal(rng), normal(rng));
  return m;
}

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix m = random_complex(n, rng);
  return 0.5 * (m + m.adjoint());
}

}  // namespace

// ---------------------------------------------------------------------------
// eig / expm

TEST_CASE("eig agrees with characteristic-polynomial roots on random 8x8 matrices", "[numerics][oracle]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_complex(8, rng);
    const auto lapack = eig(m).eigenvalues;
    const auto roots = oracle::eigenvalues(m);
    REQUIRE(lapack.size() == 8);
    REQUIRE(roots.size() == 8);
    CHECK(max_relative_mismatch(lapack, roots) <= 1e-8);
  }
}

TEST_CASE("eig returns sorted values and accurate vectors", "[numerics]") {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = random_complex(12, rng);
  const auto s = eig(m, true);
  REQUIRE(s.eigenvectors.has_value());
  CHECK(s.residual_norm < 1e-12);
  for (std::size_t k = 1; k < s.eigenvalues.size(); ++k)
    CHECK_FALSE(spectral_less(s.eigenvalues[k], s.eigenvalues[k - 1]));
}

TEST_CASE("eig rejects non-finite and non-square input", "[numerics]") {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m(1, 2) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(eig(m), std::invalid_argument);
  CHECK_THROWS_AS(eig(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("expm matches the spectral exponential of Hermitian matrices", "[numerics][oracle]") {
  std::mt19937_64 rng(17);
  for (double scale : {0.01, 1.0, 8.0, 40.0}) {
    const ComplexMatrix h = random_hermitian(6, rng);
    const cplx z(0.0, -scale);
    const ComplexMatrix a = expm(z * h);
    const ComplexMatrix b = oracle::hermitian_exp(h, z);
    CHECK(max_abs(a - b) <= 1e-10 * std::max(1.0, max_abs(b)));
  }
  // Real exponent, strong growth: compare relatively.
  const ComplexMatrix h = random_hermitian(5, rng);
  const ComplexMatrix a = expm(3.0 * h), b = oracle::hermitian_exp(h, 3.0);
  CHECK(max_abs(a - b) / max_abs(b) <= 1e-11);
}

TEST_CASE("expm of nilpotent and zero matrices", "[numerics]") {
  CHECK(max_abs(expm(ComplexMatrix::Zero(4, 4)) - ComplexMatrix::Identity(4, 4)) == 0.0);
  ComplexMatrix n = ComplexMatrix::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  ComplexMatrix expected = ComplexMatrix::Identity(3, 3) + n;
  expected(0, 2) = 3.0;  // n^2 / 2
  CHECK(max_abs(expm(n) - expected) <= 1e-14);
}

// ---------------------------------------------------------------------------
// Spectral matching and pairing

TEST_CASE("match_spectra pairs nearest neighbours without reuse", "[numerics]") {
  const std::vector<cplx> a{1.0, 2.0}, b{2.1, 0.9, 5.0};
  const auto m = match_spectra(a, b);
  CHECK(m[0].first == 1);
  CHECK(m[1].first == 0);
  CHECK(m[0].second == Approx(0.1));
  CHECK_THROWS(match_spectra(b, a));
}

TEST_CASE("pairing_check classifies real, conjugate and broken spectra", "[numerics]") {
  CHECK(pairing_check({1.0, 2.0, 3.0}, 1e-9).kind == PairingKind::all_real);
  CHECK(pairing_check({1.0, cplx(2, 1), cplx(2, -1)}, 1e-9).kind == PairingKind::conjugate_paired);
  const auto broken = pairing_check({cplx(2, 1), cplx(2, -0.9)}, 1e-9);
  CHECK(broken.kind == PairingKind::unpaired);
  CHECK(broken.unpaired.size() == 2);
  CHECK_THROWS(pairing_check({1.0}, 0.0));
}

// ---------------------------------------------------------------------------
// Grid

TEST_CASE("staggered grid is symmetric and avoids the origin", "[grid]") {
  const Grid1D g(5, 0.3);
  REQUIRE(g.size() == 10);
  for (int i = 0; i < g.size(); ++i) {
    CHECK(g.node(i) != 0.0);
    CHECK(g.node(g.mirror(i)) == -g.node(i));
  }
  CHECK(Grid1D::covering(8.0, 0.05).size() == 320);
  CHECK_THROWS(Grid1D(0, 0.1));
  CHECK_THROWS(Grid1D(3, -0.1));
}

TEST_CASE("grid momentum and Laplacian are Hermitian; p^2 differs from the Laplacian at O(1)", "[grid]") {
  const Grid1D g(20, 0.1);
  const ComplexMatrix p = grid_operator(g, OperatorKind::momentum).matrix;
  const ComplexMatrix d2 = grid_operator(g, OperatorKind::second_derivative).matrix;
  CHECK(max_abs(p - p.adjoint()) == 0.0);
  CHECK(max_abs(d2 - d2.adjoint()) == 0.0);
  const ComplexMatrix par = grid_operator(g, OperatorKind::parity).matrix;
  CHECK(max_abs(par * p * par + p) == 0.0);  // P p P = −p
}

TEST_CASE("interior test basis is orthonormal and vanishes near the walls", "[grid]") {
  const Grid1D g(60, 0.1);
  const ComplexMatrix b = interior_test_basis(g, 6, 1.0, 5, 2);
  CHECK(max_abs(b.adjoint() * b - ComplexMatrix::Identity(12, 12)) <= 1e-12);
  CHECK(b.topRows(10).cwiseAbs().maxCoeff() == 0.0);
  CHECK(b.bottomRows(10).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("indefinite inner product validates the weight", "[grid]") {
  const Grid1D g(3, 0.5);
  const GridOperator par = grid_operator(g, OperatorKind::parity);
  GridOperator w = multiplication_operator(g, [](double) { return cplx(1.0); });
  ComplexVector f = ComplexVector::Ones(6);
  CHECK(indefinite_inner(f, f, par, w) == cplx(3.0, 0.0));
  w.matrix(2, 2) = -1.0;
  CHECK_THROWS_AS(indefinite_inner(f, f, par, w), std::invalid_argument);
}

TEST_CASE("convergence order of a second-order sequence", "[numerics]") {
  CHECK(convergence_order(4e-4, 1e-4) == Approx(2.0));
}

// ---------------------------------------------------------------------------
// Oracles

TEST_CASE("Aberth roots recover a known polynomial", "[oracle]") {
  // (z − 1)(z + 2)(z − i)
  const std::vector<cplx> expected{1.0, -2.0, cplx(0, 1)};
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) d(k, k) = expected[static_cast<std::size_t>(k)];
  CHECK(max_relative_mismatch(expected, oracle::eigenvalues(d)) <= 1e-13);
}

TEST_CASE("Sturm bisection finds the lowest eigenvalue of the discrete Laplacian", "[oracle]") {
  const int n = 50;
  std::vector<double> diag(n, 2.0), off(n - 1, -1.0);
  const double exact = 2.0 - 2.0 * std::cos(kPi / (n + 1));
  CHECK(oracle::lowest_tridiagonal_eigenvalue(diag, off) == Approx(exact).epsilon(1e-12));
  CHECK(oracle::sturm_count(diag, off, 4.5) == static_cast<std::size_t>(n));
}

TEST_CASE("square-well limit approaches the attractive delta ground state", "[oracle]") {
  // −d² − 2δ has E = −1.
  const auto e = oracle::delta_limit_energy(-2.0);
  CHECK(e.coarse > -1.0);
  CHECK(std::abs(e.extrapolated + 1.0) < 1e-3);
  CHECK(std::abs(e.extrapolated + 1.0) < std::abs(e.fine + 1.0));
}

// ---------------------------------------------------------------------------
// Clifford

TEST_CASE("parity and sign generate a four-dimensional Clifford algebra on every grid", "[clifford]") {
  for (const auto& [n, h] : std::vector<std::pair<int, double>>{{1, 1.0}, {4, 0.2}, {33, 0.07}}) {
    const Grid1D g(n, h);
    const clifford::CliffordGenerators gens{
        2, 0, {grid_operator(g, OperatorKind::parity).matrix, grid_operator(g, OperatorKind::sign).matrix}};
    const auto r = clifford::verify_clifford_relations(gens, 0.0);
    CHECK(r.pass);
    CHECK(r.max_residual == 0.0);
    CHECK(r.span_dimension == 4);
  }
}

TEST_CASE("Clifford check detects commuting generators and bad signatures", "[clifford]") {
  const Grid1D g(4, 0.5);
  const ComplexMatrix p = grid_operator(g, OperatorKind::parity).matrix;
  const clifford::CliffordGenerators same{2, 0, {p, p}};
  CHECK_FALSE(clifford::verify_clifford_relations(same, 1e-12).pass);
  CHECK_THROWS(clifford::verify_clifford_relations({1, 0, {p, p}}, 0.0));
}

TEST_CASE("rotated involution at phi = 0 is parity and agrees on both routes", "[clifford]") {
  const Grid1D g(6, 0.3);
  const auto p = grid_operator(g, OperatorKind::parity);
  const auto s = grid_operator(g, OperatorKind::sign);
  CHECK(max_abs(clifford::rotated_involution(p, s, 0.0).matrix - p.matrix) <= 1e-15);
  const auto r = clifford::rotated_involution(p, s, 1.1);
  CHECK(r.route_agreement <= 1e-13);
  CHECK_THROWS(clifford::rotated_involution(p, p, 0.3));
}

// ---------------------------------------------------------------------------
// Cartan

TEST_CASE("random algebra elements are members and split into the two components", "[cartan]") {
  std::mt19937_64 rng(8);
  for (const cartan::ThetaSignature sig : {cartan::ThetaSignature{2, 1}, cartan::ThetaSignature{2, 2}}) {
    const auto a = cartan::random_element(sig, rng);
    CHECK(cartan::membership_residual(a.matrix(), sig) <= 1e-15);
    const auto parts = cartan::cartan_split(a);
    CHECK(max_abs(parts.compact + parts.noncompact - a.matrix()) == 0.0);
    // Every member satisfies kappa(x) = −x; the components differ in Theta-parity.
    CHECK(max_abs(cartan::kappa(a.matrix(), sig) + a.matrix()) <= 1e-15);
    const ComplexMatrix t = sig.theta();
    CHECK(max_abs(t * parts.compact * t + parts.compact) == 0.0);
    CHECK(max_abs(t * parts.noncompact * t - parts.noncompact) == 0.0);
    CHECK(cartan::wick_check(a).pass);
  }
}

TEST_CASE("ternary brackets close while binary brackets escape", "[cartan]") {
  std::mt19937_64 rng(12);
  const cartan::ThetaSignature sig(2, 2);
  const auto a = cartan::random_element(sig, rng), b = cartan::random_element(sig, rng),
             c = cartan::random_element(sig, rng);
  const auto r = cartan::lts_check(a, b, c);
  CHECK(r.closure_residual <= 1e-14);
  CHECK(r.binary_escape > 1e-3);
}

TEST_CASE("closed-form exponentials match expm and the 2x2 examples", "[cartan]") {
  std::mt19937_64 rng(4);
  const cartan::ThetaSignature sig(3, 1);
  const auto parts = cartan::cartan_split(cartan::random_element(sig, rng, 0.5));
  for (double x : {-5.0, -0.3, 0.0, 2.0}) {
    CHECK(max_abs(cartan::exp_compact(parts.compact, sig, x) - expm(parts.compact * x)) <= 1e-12);
    CHECK(max_abs(cartan::exp_noncompact(parts.noncompact, sig, x) - expm(parts.noncompact * x)) /
              max_abs(expm(parts.noncompact * x)) <=
          1e-12);
  }
  // Theta = sigma_3: a = [[0, t], [−t, 0]] is a rotation.
  const auto rot = cartan::GaugeAlgebraElement::make({1, 1}, RealMatrix::Zero(1, 1), RealMatrix::Constant(1, 1, 0.7),
                                                     RealMatrix::Zero(1, 1));
  const ComplexMatrix r = cartan::exp_compact(cartan::cartan_split(rot).compact, {1, 1}, 2.0);
  CHECK(r(0, 0).real() == Approx(std::cos(1.4)));
  CHECK(r(0, 1).real() == Approx(std::sin(1.4)));
}

TEST_CASE("parity identities of the split factors", "[cartan]") {
  std::mt19937_64 rng(31);
  const auto a = cartan::random_element({2, 1}, rng, 0.5);
  const auto r = cartan::parity_relations_check(a, 3.7);
  CHECK(r.worst() <= 1e-13);
}

TEST_CASE("compact and noncompact dimensions", "[cartan]") {
  std::mt19937_64 rng(9);
  const cartan::ThetaSignature sig(3, 2);
  CHECK(cartan::sampled_component_rank(sig, true, 20, rng) == cartan::expected_compact_dimension(sig));
  CHECK(cartan::sampled_component_rank(sig, false, 20, rng) == cartan::expected_noncompact_dimension(sig));
}

TEST_CASE("group polar factors of a product of exponentials", "[cartan]") {
  std::mt19937_64 rng(10);
  const cartan::ThetaSignature sig(2, 1);
  const auto a = cartan::random_element(sig, rng, 0.4);
  const auto parts = cartan::cartan_split(a);
  const ComplexMatrix u = cartan::exp_compact(parts.compact, sig, 1.3) * cartan::exp_noncompact(parts.noncompact, sig, 1.3);
  const auto f = cartan::group_polar(u, sig);
  CHECK(f.pass);
  CHECK(f.roundtrip_residual <= 1e-12);
}

TEST_CASE("algebra element constructor validates its blocks", "[cartan]") {
  CHECK_THROWS(cartan::GaugeAlgebraElement::make({2, 1}, RealMatrix::Identity(2, 2), RealMatrix::Zero(2, 1),
                                                 RealMatrix::Zero(1, 1)));
  CHECK_THROWS(cartan::GaugeAlgebraElement::make({2, 1}, RealMatrix::Zero(1, 1), RealMatrix::Zero(2, 1),
                                                 RealMatrix::Zero(1, 1)));
}

// ---------------------------------------------------------------------------
// Config

TEST_CASE("complex numbers parse in re+imi form", "[config]") {
  using config::parse_complex;
  CHECK(parse_complex("k", "1") == cplx(1, 0));
  CHECK(parse_complex("k", "i") == cplx(0, 1));
  CHECK(parse_complex("k", "-i") == cplx(0, -1));
  CHECK(parse_complex("k", "0.5i") == cplx(0, 0.5));
  CHECK(parse_complex("k", "1-2i") == cplx(1, -2));
  CHECK(parse_complex("k", " 3e-1 + 1e2i ") == cplx(0.3, 100));
  CHECK(parse_complex("k", "-2e+1-i") == cplx(-20, -1));
  CHECK_THROWS_AS(parse_complex("k", "abc"), config::UsageError);
  CHECK_THROWS_AS(parse_complex("k", ""), config::UsageError);
}

TEST_CASE("numbers, integers and axes", "[config]") {
  CHECK(config::parse_double("k", " 2.5 ") == 2.5);
  CHECK(config::parse_double("k", "+1e-3") == 1e-3);
  CHECK_THROWS_AS(config::parse_double("k", "1.0x"), config::UsageError);
  CHECK_THROWS_AS(config::parse_double("k", "inf"), config::UsageError);
  CHECK(config::parse_integer("k", "42") == 42);
  CHECK_THROWS_AS(config::parse_integer("k", "4.2"), config::UsageError);
  const auto axis = config::parse_axis("k", "-1:1:5");
  CHECK(axis.values() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(config::parse_axis("k", "0.25").values() == std::vector<double>{0.25});
  CHECK_THROWS_AS(config::parse_axis("k", "0:1"), config::UsageError);
  CHECK_THROWS_AS(config::parse_axis("k", "0:1:0"), config::UsageError);
}

TEST_CASE("resolution order is defaults, then file, then flags", "[config]") {
  const std::vector<config::ParamSpec> specs{{"a", "1", ""}, {"b", "2", ""}, {"c", "3", ""}};
  const auto s = config::resolve(specs, {{"a", "10"}, {"b", "20"}}, {{"b", "200"}});
  CHECK(s.text("a") == "10");
  CHECK(s.text("b") == "200");
  CHECK(s.text("c") == "3");
  CHECK(s.integer("b", 0, 1000) == 200);
  CHECK_THROWS_AS(s.integer("b", 0, 100), config::UsageError);
  CHECK_THROWS_AS(config::resolve(specs, {{"zzz", "1"}}, {}), config::UsageError);
  CHECK_THROWS_AS(config::resolve(specs, {}, {{"zzz", "1"}}), config::UsageError);
}

TEST_CASE("key=value files ignore comments and reject malformed lines", "[config]") {
  const auto dir = std::filesystem::temp_directory_path() / "krein_config_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.cfg";
  write_text_file(good, "# header\n alpha = 0.5  # trailing\n\nbeta=2\n");
  const auto values = config::read_key_value_file(good.string());
  REQUIRE(values.size() == 2);
  CHECK(values[0] == std::pair<std::string, std::string>{"alpha", "0.5"});
  CHECK(values[1] == std::pair<std::string, std::string>{"beta", "2"});
  const auto bad = dir / "bad.cfg";
  write_text_file(bad, "alpha 0.5\n");
  CHECK_THROWS_AS(config::read_key_value_file(bad.string()), config::UsageError);
  CHECK_THROWS_AS(config::read_key_value_file((dir / "missing.cfg").string()), config::UsageError);
}

// ---------------------------------------------------------------------------
// Reports

TEST_CASE("doubles print with 17 significant digits and round-trip", "[report]") {
  CHECK(format_double(0.1) == "1.0000000000000001e-01");
  CHECK(format_double(-0.0) == "0.0000000000000000e+00");
  CHECK(format_double(std::nan("")) == "nan");
  for (double v : {kPi, 1e-300, -123456.789, 2.0 / 3.0}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("CSV layout and escaping", "[report]") {
  Table t{"demo", {"k", "value", "label"}, {}};
  t.add_row({std::int64_t{1}, 0.5, std::string("plain")});
  t.add_row({std::int64_t{2}, -2.0, std::string("a,\"b\"")});
  CHECK(to_csv(t) ==
        "k,value,label\n1,5.0000000000000000e-01,plain\n2,-2.0000000000000000e+00,\"a,\"\"b\"\"\"\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("JSON keys keep a fixed order and checks carry their relation", "[report]") {
  Report r;
  r.command = "demo";
  r.config = {{"z", "1"}, {"a", "2"}};
  r.seed = 5;
  r.add(Check::at_most("small", 1e-14, 1e-12));
  r.add(Check::at_least("large", 0.5, 0.1));
  r.add(Check::info("note", std::nan("")));
  r.notes.push_back("hello");
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"command", "config", "seed", "pass", "checks", "tables", "notes"});
  std::vector<std::string> cfg;
  for (const auto& item : j["config"].items()) cfg.push_back(item.key());
  CHECK(cfg == std::vector<std::string>{"z", "a"});
  CHECK(j["pass"] == true);
  CHECK(j["checks"][1]["relation"] == ">=");
  CHECK(j["checks"][2]["residual"] == "nan");
  r.wall_time_s = 1.5;
  CHECK(to_json(r).contains("wall_time_s"));
}

TEST_CASE("check factories decide pass and fail", "[report]") {
  CHECK_FALSE(Check::at_most("x", std::nan(""), 1.0).pass);
  CHECK_FALSE(Check::at_least("x", 0.0, 1.0).pass);
  CHECK(Check::equal("x", 4.0, 4.0).pass);
  CHECK_FALSE(Check::flag("x", false).pass);
  Report r;
  r.add(Check::flag("ok", true));
  Report inner;
  inner.add(Check::at_most("bad", 2.0, 1.0));
  r.absorb(inner, "sub.");
  CHECK(r.checks.back().name == "sub.bad");
  CHECK_FALSE(r.pass());
}

TEST_CASE("emit writes one JSON file and one CSV per table", "[report]") {
  const auto dir = std::filesystem::temp_directory_path() / "krein_emit_test";
  std::filesystem::remove_all(dir);
  Report r;
  r.command = "demo";
  r.tables.push_back(Table{"a/b", {"x"}, {{1.0}}});
  const auto paths = emit(r, dir, "demo", Format::both);
  REQUIRE(paths.size() == 2);
  CHECK(std::filesystem::exists(dir / "demo.json"));
  CHECK(std::filesystem::exists(dir / "demo_a_b.csv"));
  CHECK(emit(r, dir, "only", Format::json).size() == 1);
}

// ---------------------------------------------------------------------------
// parallel_map

TEST_CASE("parallel_map preserves order and propagates exceptions", "[parallel]") {
  std::vector<int> in(1000);
  for (int k = 0; k < 1000; ++k) in[static_cast<std::size_t>(k)] = k;
  const auto out = parallel_map(in, [](int v) { return v * v; }, 4);
  for (int k = 0; k < 1000; ++k) CHECK(out[static_cast<std::size_t>(k)] == k * k);
  CHECK(parallel_map(std::vector<int>{}, [](int v) { return v; }).empty());
  CHECK_THROWS_AS(parallel_map(in, [](int v) -> int { if (v == 500) throw std::runtime_error("x"); return v; }, 3),
                  std::runtime_error);
}
