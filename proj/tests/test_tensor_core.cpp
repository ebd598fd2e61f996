#include <doctest.h>

#include <map>
#include <random>

#include "causkit/backend.hpp"
#include "causkit/error.hpp"
#include "causkit/process.hpp"
#include "helpers.hpp"

using namespace causkit;
using causkit::testing::random_process;

namespace {

/// Brute-force plug: sums over every joint index assignment.
Process naive_plug(const Process& f, const Process& g, const std::vector<Link>& wiring) {
  auto fe = f.extents(), ge = g.extents();
  std::map<std::size_t, std::size_t> f_to_g;
  for (const auto& [a, b] : wiring) f_to_g[f.axis(a)] = g.axis(b);
  std::vector<bool> g_linked(g.rank(), false);
  for (auto& [fa, gb] : f_to_g) g_linked[gb] = true;

  std::vector<System> outs, ins;
  std::vector<std::pair<int, std::size_t>> free_out, free_in;  // (0 = f / 1 = g, axis)
  for (std::size_t k = 0; k < f.outs().size(); ++k)
    if (!f_to_g.count(k)) outs.push_back(f.outs()[k]), free_out.push_back({0, k});
  for (std::size_t k = 0; k < g.outs().size(); ++k)
    if (!g_linked[k]) outs.push_back(g.outs()[k]), free_out.push_back({1, k});
  for (std::size_t k = 0; k < f.ins().size(); ++k)
    if (!f_to_g.count(f.outs().size() + k)) ins.push_back(f.ins()[k]), free_in.push_back({0, f.outs().size() + k});
  for (std::size_t k = 0; k < g.ins().size(); ++k)
    if (!g_linked[g.outs().size() + k]) ins.push_back(g.ins()[k]), free_in.push_back({1, g.outs().size() + k});

  auto free_axes = free_out;
  free_axes.insert(free_axes.end(), free_in.begin(), free_in.end());
  std::size_t n_out = 1;
  for (auto [w, ax] : free_axes) n_out *= (w == 0 ? fe : ge)[ax];
  std::vector<Complex> out(n_out, Complex{});

  std::size_t nf = f.data().size();
  for (std::size_t fi = 0; fi < nf; ++fi) {
    std::vector<std::size_t> fidx(fe.size());
    for (std::size_t r = fi, k = fe.size(); k-- > 0;) fidx[k] = r % fe[k], r /= fe[k];
    for (std::size_t gi = 0; gi < g.data().size(); ++gi) {
      std::vector<std::size_t> gidx(ge.size());
      for (std::size_t r = gi, k = ge.size(); k-- > 0;) gidx[k] = r % ge[k], r /= ge[k];
      bool ok = true;
      for (auto& [fa, gb] : f_to_g) ok = ok && fidx[fa] == gidx[gb];
      if (!ok) continue;
      std::size_t o = 0;
      for (auto [w, ax] : free_axes) o = o * (w == 0 ? fe : ge)[ax] + (w == 0 ? fidx : gidx)[ax];
      out[o] += f.data()[fi] * g.data()[gi];
    }
  }
  if (f.backend() == Backend::Rel)
    for (auto& x : out) x = std::abs(x) > 0 ? 1.0 : 0.0;
  return Process(f.backend(), outs, ins, out);
}

const Backend kAll[] = {Backend::MatR, Backend::Cpm, Backend::Rel};

}  // namespace

TEST_SUITE("tensor-core") {

TEST_CASE("identity is a unit for compose_seq") {
  for (Backend b : kAll) {
    Process f = random_process(b, {{"B", 3}}, {{"A", 2}}, 7);
    Process left = compose_seq(identity(b, {"A", 2}, {"A", 2}), f);
    Process right = compose_seq(f, identity(b, {"B", 3}, {"B", 3}));
    CHECK(max_abs_diff(left, f) < 1e-12);
    CHECK(max_abs_diff(right, f) < 1e-12);
  }
}

TEST_CASE("stochastic after stochastic stays stochastic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Process f = random_causal(Backend::MatR, {{"A", 3}}, {{"B", 3}}, seed);
    Process g = random_causal(Backend::MatR, {{"B", 3}}, {{"C", 3}}, seed + 100);
    Process h = compose_seq(f, g);
    for (std::size_t col = 0; col < 3; ++col) {
      double sum = 0;
      for (std::size_t row = 0; row < 3; ++row) sum += h.data()[row * 3 + col].real();
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("rel composite with the identity") {
  Process w(Backend::Rel, {{"A", 2}}, {{"B", 2}}, {1, 1, 1, 0});
  CHECK(max_abs_diff(compose_seq(identity(Backend::Rel, {"B", 2}, {"B", 2}), w), w) == 0.0);
}

TEST_CASE("tensor with the empty process") {
  Process f = random_process(Backend::MatR, {{"B", 2}}, {{"A", 3}}, 1);
  Process one = Process::scalar(Backend::MatR, 1.0);
  CHECK(max_abs_diff(tensor_par(f, one), f) == 0.0);
  CHECK(max_abs_diff(tensor_par(one, f), f) == 0.0);
}

TEST_CASE("point states tensor to a basis vector") {
  using causkit::testing::basis_state;
  Process p = tensor_par(basis_state(Backend::MatR, {"A", 2}, 0), basis_state(Backend::MatR, {"B", 2}, 1));
  std::vector<Complex> want{0, 1, 0, 0};
  CHECK(p.data() == want);
}

TEST_CASE("causal tensor causal is causal") {
  for (Backend b : kAll)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Process f = random_causal(b, {{"A", 2}}, {{"A'", 3}}, seed);
      Process g = random_causal(b, {{"B", 3}}, {{"B'", 2}}, seed + 9);
      CHECK(is_causal(tensor_par(f, g)).verdict);
    }
}

TEST_CASE("duplicate labels on one side are rejected") {
  Process f = random_process(Backend::MatR, {{"A", 2}}, {}, 1);
  try {
    tensor_par(f, f);
    FAIL("expected DuplicateLabel");
  } catch (const CausError& e) {
    CHECK(e.kind() == ErrorKind::DuplicateLabel);
  }
}

TEST_CASE("permute round trips") {
  Process f = random_process(Backend::MatR, {{"A", 2}, {"B", 3}}, {{"C", 2}, {"D", 2}}, 4);
  std::vector<std::size_t> id{0, 1}, sw{1, 0};
  CHECK(max_abs_diff(permute(f, id, id), f) == 0.0);
  Process twice = permute(permute(f, sw, sw), sw, sw);
  CHECK(twice.outs() == f.outs());
  CHECK(twice.data() == f.data());
  std::vector<std::size_t> bad{0, 0};
  CHECK_THROWS_AS(permute(f, bad, id), CausError);
}

TEST_CASE("yanking: bend then unbend is the identity") {
  for (Backend b : kAll)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Process f = random_process(b, {{"B", 2}}, {{"A", 3}, {"C", 2}}, seed);
      for (const std::string l : {"A", "C"}) {
        Process up = bend(f, l, BendDir::InToOut);
        CHECK(up.find_out(l + "*").has_value());
        Process down = bend(up, l + "*", BendDir::OutToIn);
        CHECK(max_abs_diff(down, f) == 0.0);
      }
      Process out_first = bend(bend(f, "B", BendDir::OutToIn), "B*", BendDir::InToOut);
      CHECK(max_abs_diff(out_first, f) == 0.0);
    }
}

TEST_CASE("bending the identity gives the cup") {
  Process m = bend(identity(Backend::MatR, {"A", 2}, {"A", 2}), "A", BendDir::InToOut);
  std::vector<Complex> want{1, 0, 0, 1};
  CHECK(m.data() == want);

  Process q = bend(identity(Backend::Cpm, {"A", 2}, {"A", 2}), "A", BendDir::InToOut);
  Eigen::MatrixXcd j = choi_matrix(q);
  REQUIRE(j.rows() == 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      double want_rc = ((r == 0 || r == 3) && (c == 0 || c == 3)) ? 1.0 : 0.0;
      CHECK(std::abs(j(r, c) - want_rc) < 1e-15);
    }
}

TEST_CASE("interchange law") {
  for (Backend b : kAll)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      int d1 = 1 + seed % 3, d2 = 1 + (seed + 1) % 3, d3 = 1 + (seed + 2) % 2;
      Process f = random_process(b, {{"B", d2}}, {{"A", d1}}, seed * 4);
      Process g = random_process(b, {{"D", d3}}, {{"C", d2}}, seed * 4 + 1);
      Process h = random_process(b, {{"E", d1}}, {{"B", d2}}, seed * 4 + 2);
      Process k = random_process(b, {{"F", d2}}, {{"D", d3}}, seed * 4 + 3);
      Process lhs = compose_seq(tensor_par(f, g), tensor_par(h, k));
      Process rhs = tensor_par(compose_seq(f, h), compose_seq(g, k));
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("discarding is multiplicative") {
  for (Backend b : kAll)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Process f = random_process(b, {{"A", 2}, {"B", 3}, {"C", 2}}, {{"X", 2}}, seed);
      std::vector<std::string> s1{"A"}, s2{"C", "B"}, all{"A", "B", "C"}, rev{"C", "B"};
      Process joint = discard_outputs(f, all);
      Process seq = discard_outputs(discard_outputs(f, s1), s2);
      Process other = discard_outputs(discard_outputs(f, rev), s1);
      CHECK(max_abs_diff(joint, seq) < 1e-12);
      CHECK(max_abs_diff(joint, other) < 1e-12);
      CHECK(max_abs_diff(discard_outputs(f, std::vector<std::string>{}), f) == 0.0);
    }
}

TEST_CASE("discarding a causal channel leaves the discard effect") {
  Process f = random_causal(Backend::MatR, {{"A", 3}}, {{"B", 2}}, 3);
  Process e = discard_all_outputs(f);
  for (auto x : e.data()) CHECK(x.real() == doctest::Approx(1.0).epsilon(1e-12));

  Process q = discard_all_outputs(identity(Backend::Cpm, {"A", 2}, {"A", 2}));
  Eigen::MatrixXcd j = choi_matrix(q);
  CHECK((j - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("plug with no links is tensor") {
  Process f = random_process(Backend::MatR, {{"B", 2}}, {{"A", 2}}, 1);
  Process g = random_process(Backend::MatR, {{"D", 3}}, {{"C", 2}}, 2);
  CHECK(max_abs_diff(plug(f, g, std::vector<Link>{}), tensor_par(f, g)) == 0.0);
}

TEST_CASE("plug agrees with brute-force contraction on random wirings") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    Backend b = kAll[trial % 3];
    int d = b == Backend::Cpm ? 2 : 1 + static_cast<int>(rng() % 3);
    Process f = random_process(b, {{"P", d}, {"Q", 2}}, {{"R", d}, {"S", 2}}, rng());
    Process g = random_process(b, {{"T", d}, {"U", 2}}, {{"V", d}, {"W", 2}}, rng());
    // links in both directions, chosen at random
    std::vector<Link> wiring;
    if (rng() % 2) wiring.push_back({{"P", Role::Out}, {"V", Role::In}});
    if (rng() % 2) wiring.push_back({{"S", Role::In}, {"U", Role::Out}});
    if (rng() % 2) wiring.push_back({{"R", Role::In}, {"T", Role::Out}});
    if (rng() % 2) wiring.push_back({{"Q", Role::Out}, {"W", Role::In}});
    Process got = plug(f, g, wiring);
    Process want = naive_plug(f, g, wiring);
    REQUIRE(got.outs() == want.outs());
    REQUIRE(got.ins() == want.ins());
    CHECK(max_abs_diff(got, want) < 1e-12);
  }
}

TEST_CASE("plug rejects a wire used twice") {
  Process f = random_process(Backend::MatR, {{"A", 2}}, {}, 1);
  Process g = random_process(Backend::MatR, {}, {{"B", 2}, {"C", 2}}, 2);
  std::vector<Link> w{{{"A", Role::Out}, {"B", Role::In}}, {{"A", Role::Out}, {"C", Role::In}}};
  CHECK_THROWS_AS(plug(f, g, w), CausError);
}

TEST_CASE("uniform states and dimensions") {
  Process u = uniform_state(Backend::MatR, {"A", 2});
  CHECK(u.data()[0].real() == 0.5);
  CHECK(u.data()[1].real() == 0.5);
  Eigen::MatrixXcd j = choi_matrix(uniform_state(Backend::Cpm, {"A", 2}));
  CHECK((j - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);
  for (Backend b : kAll)
    for (int d = 1; d <= 4; ++d) CHECK(is_causal(uniform_state(b, {"A", d})).verdict);

  CHECK(dimension(Backend::MatR, {"A", 3}).value.real() == 3.0);
  CHECK(dimension(Backend::Cpm, {"A", 2}).value.real() == 4.0);
  CHECK(dimension(Backend::Rel, {"A", 3}).value.real() == 1.0);
}

TEST_CASE("feedback closes the identity into a trace") {
  std::vector<std::pair<std::string, std::string>> loop{{"A", "A"}};
  CHECK(feedback(identity(Backend::MatR, {"A", 3}, {"A", 3}), loop).scalar_value().real() == 3.0);
  CHECK(feedback(identity(Backend::Cpm, {"A", 2}, {"A", 2}), loop).scalar_value().real() == 4.0);
}

}  // TEST_SUITE
