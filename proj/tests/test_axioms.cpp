#include <doctest.h>

#include <Eigen/Dense>

#include "causkit/axioms.hpp"
#include "causkit/backend.hpp"
#include "causkit/error.hpp"
#include "helpers.hpp"

using namespace causkit;

TEST_SUITE("axiom-harness") {

TEST_CASE("every backend reports the expected verdicts") {
  AxiomConfig cfg;
  cfg.instances = 10;
  for (Backend b : {Backend::MatR, Backend::Cpm, Backend::Rel})
    for (const auto& r : run_all(b, cfg)) {
      INFO(to_string(b) << " " << to_string(r.axiom) << ": " << r.witness);
      CHECK(r.verdict == expected_verdict(r.axiom, b));
    }
  CHECK(expected_verdict(Axiom::C5p, Backend::Rel) == AxiomVerdict::Refuted);
}

TEST_CASE("C2 reports the dimension") {
  AxiomResult r = run_axiom(Axiom::C2, Backend::MatR);
  CHECK(r.verdict == AxiomVerdict::Holds);
  CHECK(r.witness.find("d=3 -> 3") != std::string::npos);
}

TEST_CASE("C4' reconstruction residual") {
  AxiomResult r = run_axiom(Axiom::C4p, Backend::MatR);
  CHECK(r.verdict == AxiomVerdict::Holds);
  CHECK(r.residual < 1e-12);
  CHECK(run_axiom(Axiom::C4p, Backend::Rel).residual == 0.0);
}

TEST_CASE("rel C5' refutation names the witness") {
  AxiomResult r = run_axiom(Axiom::C5p, Backend::Rel);
  CHECK(r.verdict == AxiomVerdict::Refuted);
  CHECK(r.witness.find("not(i and j)") != std::string::npos);
  Process w = rel_c5_witness();
  CHECK(w.data() == std::vector<Complex>{1, 1, 1, 0});
  // normalizes every causal relation B -> A ...
  for (const auto& f : spanning_channels(Backend::Rel, {{"A", 2}}, {{"B", 2}})) {
    Link l1{{"A", Role::Out}, {"A", Role::In}}, l2{{"B", Role::In}, {"B", Role::Out}};
    std::vector<Link> links{l1, l2};
    CHECK(plug(w, f, links).scalar_value().real() == 1.0);
  }
  // ... but does not split
  CHECK(marginal_residual(w, std::vector<std::string>{"B"}) > 0.0);
}

TEST_CASE("cpm constructive C4' is unsupported") {
  AxiomConfig cfg;
  cfg.cpm_constructive = true;
  try {
    run_axiom(Axiom::C4p, Backend::Cpm, cfg);
    FAIL("expected UnsupportedCombination");
  } catch (const CausError& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedCombination);
  }
}

TEST_CASE("the only normalizing effect is discard") {
  for (Backend b : {Backend::MatR, Backend::Cpm})
    for (int d = 1; d <= 4; ++d) {
      EffectSolve s = solve_normalizing_effect(b, {"A", d});
      CHECK(s.nullity == 0);
      CHECK(s.residual < 1e-9);
      CHECK(max_abs_diff(s.effect, discard(b, System{"A", d})) < 1e-9);
    }
}

TEST_CASE("second-order effects split") {
  for (Backend b : {Backend::MatR, Backend::Cpm})
    for (int da = 1; da <= 3; ++da)
      for (int db = 1; db <= 3; ++db) {
        SplitSolve s = solve_second_order_effects(b, {"A", da}, {"B", db});
        CHECK(s.split_residual < 1e-9);
        CHECK(s.solve_residual < 1e-9);
        std::size_t ext = wire_extent(b, da);
        CHECK(s.nullity == ext - 1);
      }
}

TEST_CASE("enough product states") {
  // Evaluation on products of causal basis states is injective on processes
  // A (x) B -> C, so two processes agreeing there agree everywhere.
  for (Backend b : {Backend::MatR, Backend::Cpm})
    for (auto [da, db] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
      if (b == Backend::Cpm && da * db > 6) continue;
      std::vector<System> outs{{"C", 2}}, ins{{"A", da}, {"B", db}};
      Process shape = causkit::testing::random_process(b, outs, ins, 0);
      const std::size_t n = shape.data().size();
      std::vector<Process> probes;
      for (const auto& ra : causal_basis(b, {"A", da}))
        for (const auto& rb : causal_basis(b, {"B", db})) probes.push_back(tensor_par(ra, rb));
      const std::size_t rows = probes.size() * wire_extent(b, 2);
      Eigen::MatrixXcd eval(rows, n);
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<Complex> unit(n, Complex{});
        unit[k] = 1.0;
        Process e(b, outs, ins, unit);
        std::size_t r = 0;
        for (const auto& st : probes) {
          Process val = compose_seq(st, e);
          for (auto x : val.data()) eval(r++, k) = x;
        }
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval);
      const auto& sv = svd.singularValues();
      CHECK(sv.minCoeff() > 1e-9 * sv.maxCoeff());
    }
}

TEST_CASE("config parsing") {
  AxiomConfig c = parse_axiom_config("# comment\nseed = 7\ninstances=3\ntol = 1e-8\ncpm_constructive = true\n");
  CHECK(c.seed == 7);
  CHECK(c.instances == 3);
  CHECK(c.tol == 1e-8);
  CHECK(c.cpm_constructive);
  CHECK(c.max_dim(Backend::Cpm) == 3);
  CHECK_THROWS_AS(parse_axiom_config("bogus = 1\n"), CausError);
  CHECK_THROWS_AS(parse_axiom_config("seed\n"), CausError);
  CHECK(axiom_from_string("C4'") == Axiom::C4p);
}

}  // TEST_SUITE
