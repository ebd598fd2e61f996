#include <doctest.h>

#include <random>

#include "causkit/backend.hpp"
#include "causkit/checks.hpp"
#include "causkit/error.hpp"
#include "causkit/gallery.hpp"
#include "causkit/types.hpp"

using namespace causkit;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const CausError& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidData;
}

CausalType random_type(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"A", "B", "C'", "D1"};
  if (depth == 0 || rng() % 4 == 0) {
    if (rng() % 8 == 0) return unit();
    return atom(names[rng() % 4], 1 + static_cast<int>(rng() % 3));
  }
  switch (rng() % 4) {
    case 0: return dual(random_type(rng, depth - 1));
    case 1: return tensor({random_type(rng, depth - 1), random_type(rng, depth - 1)});
    case 2: return par({random_type(rng, depth - 1), random_type(rng, depth - 1)});
    default: return lolli(random_type(rng, depth - 1), random_type(rng, depth - 1));
  }
}

}  // namespace

TEST_SUITE("type-algebra") {

TEST_CASE("parse shapes") {
  CausalType t = parse_type("(A[2] -o A'[2]) (x) (B[2] -o B'[2])");
  REQUIRE(t.kind == TypeKind::Tensor);
  REQUIRE(t.kids.size() == 2);
  CHECK(t.kids[0].kind == TypeKind::Lolli);
  CHECK(t.kids[1].kind == TypeKind::Lolli);
  CHECK(t.kids[0].kids[0] == atom("A", 2));

  CausalType d = parse_type("A[2]^*");
  CHECK(d.kind == TypeKind::Dual);
  CHECK(d.kids[0] == atom("A", 2));

  CHECK(parse_type("X cap Y").kind == TypeKind::Cap);
  CHECK(parse_type("A -o B -o C") == lolli(atom("A"), lolli(atom("B"), atom("C"))));
  CHECK(parse_type("I") == unit());
}

TEST_CASE("syntax errors") {
  for (const char* bad : {"", "A -o", "(A", "A[x]", "A (x)", "A B", "A[2", "-o A"})
    CHECK(kind_of([&] { parse_type(bad); }) == ErrorKind::SyntaxError);
}

TEST_CASE("print then parse is the identity") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 300; ++k) {
    CausalType t = random_type(rng, 4);
    std::string text = print_type(t);
    CAPTURE(text);
    CHECK(parse_type(text) == t);
  }
}

TEST_CASE("normalize pushes duals to atoms") {
  CausalType a = atom("A", 2), b = atom("B", 2);
  CHECK(normal_tree(dual(tensor({a, b}))) == par({dual(a), dual(b)}));
  CHECK(normal_tree(dual(dual(a))) == a);
  CHECK(normal_tree(dual(unit())) == unit());
  CHECK(normal_tree(dual(lolli(a, b))) == tensor({a, dual(b)}));

  NormalForm nf = normalize(parse_type("A -o (A' -o B) -o B'"));
  CHECK(nf.tree == par({dual(atom("A")), tensor({atom("A'"), dual(atom("B"))}), atom("B'")}));
  REQUIRE(nf.signature.size() == 4);
  CHECK_FALSE(nf.signature[0].positive);
  CHECK(nf.signature[1].positive);
}

TEST_CASE("dual is an involution on normal forms") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    CausalType n = normal_tree(random_type(rng, 4));
    CHECK(normal_tree(dual(normal_tree(dual(n)))) == n);
  }
}

TEST_CASE("units vanish from tensors and pars") {
  CausalType a = atom("A", 2);
  CHECK(normal_tree(tensor({a, unit()})) == a);
  CHECK(normal_tree(par({unit(), a})) == a);
  CHECK(normal_tree(lolli(unit(), a)) == a);
}

TEST_CASE("dual of a cap is unsupported") {
  CausalType c = cap(atom("A"), atom("A"));
  CHECK(kind_of([&] { normalize(dual(c)); }) == ErrorKind::UnsupportedIso);
}

TEST_CASE("first-order embedding") {
  Embedding e = fo_embedding(parse_type("A[2] -o B[2]"));
  CHECK(e.perm == std::vector<std::size_t>{0, 1});
  CHECK(e.ambient == lolli(atom("A", 2), atom("B", 2)));

  Embedding comb = fo_embedding(parse_type("A1[2] -o (A1'[2] -o A2[2]) -o A2'[2]"));
  CHECK(comb.perm == std::vector<std::size_t>{0, 2, 1, 3});
  CHECK(comb.ambient == lolli(tensor({atom("A1", 2), atom("A2", 2)}), tensor({atom("A1'", 2), atom("A2'", 2)})));

  Embedding two = fo_embedding(parse_type("(A -o A') (x) (B -o B')"));
  CHECK(two.ambient == lolli(tensor({atom("A"), atom("B")}), tensor({atom("A'"), atom("B'")})));

  CHECK(kind_of([&] { fo_embedding(parse_type("A (x) A")); }) == ErrorKind::NotFirstOrderBased);
}

TEST_CASE("intersections need one ambient") {
  CausalType ab = parse_type("A -o B"), ba = parse_type("B -o A");
  CHECK(kind_of([&] { intersect(ab, ba); }) == ErrorKind::EmbedMismatch);
  CHECK(kind_of([&] { fo_embedding(parse_type("X cap Y")); }) == ErrorKind::EmbedMismatch);

  // the two totalisations of a common cause, as in the worked example
  CausalType t1 = parse_type("A -o (A' -o B) -o (B' -o C) -o C'");
  CausalType t2 = parse_type("A -o (A' -o C) -o (C' -o B) -o B'");
  CausalType both = intersect(t1, t2);
  CHECK(both.kind == TypeKind::Cap);
}

TEST_CASE("lolli symmetry") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Process phi = random_causal(Backend::MatR, {{"A", 2}, {"B", 2}}, {{"C", 2}}, seed);
    bool ab = check_membership(phi, parse_type("A[2] -o B[2] -o C[2]")).verdict;
    bool ba = check_membership(phi, parse_type("B[2] -o A[2] -o C[2]")).verdict;
    CHECK(ab == ba);
  }
  Process not_causal = scale(random_causal(Backend::MatR, {{"A", 2}, {"B", 2}}, {{"C", 2}}, 1), 1.5);
  CHECK(check_membership(not_causal, parse_type("A[2] -o B[2] -o C[2]")).verdict ==
        check_membership(not_causal, parse_type("B[2] -o A[2] -o C[2]")).verdict);
}

TEST_CASE("normalization preserves gallery verdicts") {
  for (const auto& ex : gallery_all())
    for (const auto& h : ex.home_types) {
      bool raw = check_membership(ex.process, h.type).verdict;
      bool normal = check_membership(ex.process, normal_tree(h.type)).verdict;
      CHECK(raw == normal);
    }
}

TEST_CASE("first-order tensor and par agree") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Backend b = seed % 2 ? Backend::Cpm : Backend::MatR;
    Process st = random_causal(b, {}, {{"A", 2}, {"B", 3}}, seed);
    if (seed % 3 == 0) st = scale(st, 0.5);
    bool t = check_membership(st, parse_type("A[2] (x) B[3]")).verdict;
    bool p = check_membership(st, parse_type("A[2] (+) B[3]")).verdict;
    CHECK(t == p);
  }
}

}  // TEST_SUITE
