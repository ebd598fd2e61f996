#include <doctest.h>

#include <Eigen/Dense>

#include "causkit/backend.hpp"
#include "causkit/error.hpp"
#include "causkit/json_io.hpp"
#include "helpers.hpp"

using namespace causkit;

TEST_SUITE("backends") {

TEST_CASE("discard effects") {
  Process m = discard(Backend::MatR, System{"A", 3});
  CHECK(m.data() == std::vector<Complex>{1, 1, 1});
  Eigen::MatrixXcd j = choi_matrix(discard(Backend::Cpm, System{"A", 2}));
  CHECK((j - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
  Process r = discard(Backend::Rel, System{"A", 2});
  CHECK(r.data() == std::vector<Complex>{1, 1});
}

TEST_CASE("is_causal on column-stochastic matrices") {
  Process good(Backend::MatR, {{"B", 2}}, {{"A", 2}}, {0.3, 1.0, 0.7, 0.0});
  CHECK(is_causal(good).verdict);
  Process twice = scale(identity(Backend::MatR, {"A", 2}, {"A", 2}), 2.0);
  CheckReport r = is_causal(twice);
  CHECK_FALSE(r.verdict);
  CHECK(r.residual == doctest::Approx(1.0));
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("cpm causality is the partial trace condition") {
  // completely depolarizing channel: J = I/2 (x) I
  Eigen::MatrixXcd j = 0.5 * Eigen::MatrixXcd::Identity(4, 4);
  Process dep = from_choi({{"B", 2}}, {{"A", 2}}, j);
  CHECK(is_causal(dep).verdict);
  CHECK(is_positive(dep).verdict);
  Process wrong = from_choi({{"B", 2}}, {{"A", 2}}, Eigen::MatrixXcd::Identity(4, 4));
  CHECK_FALSE(is_causal(wrong).verdict);
}

TEST_CASE("is_positive") {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Identity(2, 2);
  j(1, 1) = -0.1;
  CHECK_FALSE(is_positive(from_choi({{"A", 2}}, {}, j)).verdict);
  CHECK(is_positive(random_causal(Backend::MatR, {{"A", 3}}, {{"B", 2}}, 5)).verdict);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(is_positive(random_causal(Backend::Cpm, {{"A", 2}}, {{"B", 3}}, seed)).verdict);
}

TEST_CASE("causal bases") {
  auto m = causal_basis(Backend::MatR, System{"A", 2});
  REQUIRE(m.size() == 2);
  CHECK(m[0].data() == std::vector<Complex>{1, 0});
  CHECK(m[1].data() == std::vector<Complex>{0, 1});
  auto r = causal_basis(Backend::Rel, System{"A", 2});
  REQUIRE(r.size() == 2);
  CHECK(r[1].data() == std::vector<Complex>{0, 1});

  for (int d = 1; d <= 3; ++d) {
    auto q = causal_basis(Backend::Cpm, System{"A", d});
    REQUIRE(q.size() == static_cast<std::size_t>(d * d));
    Eigen::MatrixXcd span(d * d, q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      CHECK(is_causal(q[k]).verdict);
      CHECK(is_positive(q[k]).verdict);
      for (int i = 0; i < d * d; ++i) span(i, k) = q[k].data()[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span);
    CHECK(svd.singularValues().minCoeff() > 1e-9 * svd.singularValues().maxCoeff());
  }
}

TEST_CASE("random_causal is causal and deterministic") {
  for (Backend b : {Backend::MatR, Backend::Cpm, Backend::Rel})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Process f = random_causal(b, {{"A", 2}, {"C", 2}}, {{"B", 3}}, seed);
      CHECK(is_causal(f).verdict);
      CHECK(random_causal(b, {{"A", 2}, {"C", 2}}, {{"B", 3}}, seed).data() == f.data());
    }
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Process f = random_causal(Backend::MatR, {{"A", 2}}, {{"B", 2}}, seed);
    for (std::size_t c = 0; c < 2; ++c)
      worst = std::max(worst, std::abs(f.data()[c].real() + f.data()[2 + c].real() - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("factorize_one_way on products and memory composites") {
  Event first{"a", {"A"}, {"A'"}}, second{"b", {"B"}, {"B'"}};
  for (Backend b : {Backend::MatR, Backend::Rel})
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Process prod = tensor_par(random_causal(b, {{"A", 2}}, {{"A'", 2}}, seed),
                                random_causal(b, {{"B", 3}}, {{"B'", 2}}, seed + 50));
      auto [p1, p2] = factorize_one_way(prod, first, second);
      CHECK(p1.find_out(kMemoryLabel).has_value());
      CHECK(max_abs_diff(recompose_one_way(p1, p2), prod) < 1e-12);

      Process c1 = random_causal(b, {{"A", 2}}, {{"A'", 2}, {"M", 2}}, seed + 7);
      Process c2 = random_causal(b, {{"M", 2}, {"B", 2}}, {{"B'", 3}}, seed + 8);
      Link mem{{"M", Role::Out}, {"M", Role::In}};
      Process comp = plug(c1, c2, std::span<const Link>(&mem, 1));
      auto [q1, q2] = factorize_one_way(comp, first, second);
      CHECK(max_abs_diff(recompose_one_way(q1, q2), comp) < 1e-12);
    }
}

TEST_CASE("factorize_one_way refuses cpm and signalling inputs") {
  Process q = random_causal(Backend::Cpm, {{"A", 2}, {"B", 2}}, {{"A'", 2}, {"B'", 2}}, 1);
  Event first{"a", {"A"}, {"A'"}}, second{"b", {"B"}, {"B'"}};
  try {
    factorize_one_way(q, first, second);
    FAIL("expected UnsupportedBackend");
  } catch (const CausError& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedBackend);
  }
  // A' copies B: signals backwards
  Process back = tensor_par(identity(Backend::MatR, {"B", 2}, {"A'", 2}),
                            tensor_par(discard(Backend::MatR, System{"A", 2}),
                                       uniform_state(Backend::MatR, {"B'", 2})));
  try {
    factorize_one_way(back, first, second);
    FAIL("expected NotOneWay");
  } catch (const CausError& e) {
    CHECK(e.kind() == ErrorKind::NotOneWay);
  }
}

TEST_CASE("marginal_residual detects dependence") {
  Process prod = tensor_par(random_causal(Backend::MatR, {{"A", 2}}, {{"A'", 2}}, 1),
                            random_causal(Backend::MatR, {{"B", 2}}, {{"B'", 2}}, 2));
  std::vector<std::string> a{"A"};
  Process marg = discard_outputs(prod, std::vector<std::string>{"A'"});
  CHECK(marginal_residual(marg, a) < 1e-15);
  Process id = identity(Backend::MatR, {"A", 2}, {"A'", 2});
  CHECK(marginal_residual(id, a) == doctest::Approx(0.5));
}

TEST_CASE("choi round trip") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Process f = random_causal(Backend::Cpm, {{"A", 2}, {"C", 3}}, {{"B", 2}}, seed);
    Process back = from_choi(f.outs(), f.ins(), choi_matrix(f));
    CHECK(max_abs_diff(back, f) < 1e-15);
  }
}

TEST_CASE("spanning channel family sizes") {
  CHECK(spanning_family_size(Backend::MatR, 2, 3) == 9);
  CHECK(spanning_family_size(Backend::Rel, 3, 2) == 8);
  CHECK(spanning_family_size(Backend::Cpm, 2, 2) == 4 * 3 + 1);
  auto fam = spanning_channels(Backend::Cpm, {{"A", 2}}, {{"B", 2}});
  CHECK(fam.size() == 13);
}

TEST_CASE("json round trip") {
  for (Backend b : {Backend::MatR, Backend::Cpm, Backend::Rel})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Process f = causkit::testing::random_process(b, {{"A", 2}, {"B'", 3}}, {{"C", 2}}, seed);
      if (b == Backend::Cpm) f = random_causal(b, {{"C", 2}}, {{"A", 2}, {"B'", 3}}, seed);
      Process g = process_from_json(process_to_json(f));
      CHECK(g.outs() == f.outs());
      CHECK(g.ins() == f.ins());
      CHECK(max_abs_diff(g, f) == 0.0);
    }
  CHECK_THROWS_AS(process_from_json(nlohmann::json{{"backend", "matr+"}}), CausError);
}

}  // TEST_SUITE
