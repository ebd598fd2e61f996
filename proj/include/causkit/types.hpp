#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "causkit/process.hpp"

namespace causkit {

enum class TypeKind { Atom, Unit, Dual, Tensor, Par, Lolli, Cap };

/**
 * Syntax tree of a causal type. Atoms carry a label and an optional
 * dimension (0 when unspecified). Tensor and Par are n-ary; the parser
 * produces binary nodes and normalize() flattens them.
 **/
struct CausalType {
  TypeKind kind = TypeKind::Unit;
  std::string name;
  int dim = 0;
  std::vector<CausalType> kids;

  bool operator==(const CausalType&) const = default;
};

CausalType atom(std::string name, int dim = 0);
CausalType atom(const System& s);
CausalType unit();
CausalType dual(CausalType t);
CausalType tensor(std::vector<CausalType> kids);
CausalType par(std::vector<CausalType> kids);
CausalType lolli(CausalType a, CausalType b);
CausalType cap(CausalType a, CausalType b);

/// Grammar: atoms `Name[dim]`, unit `I`, postfix `^*`, infix `(x)`, `(+)`,
/// `cap` (all left-assoc) and `-o` (right-assoc, loosest). Throws SyntaxError.
CausalType parse_type(const std::string& text);
std::string print_type(const CausalType& t);

struct SignedAtom {
  System atom;
  bool positive = true;

  bool operator==(const SignedAtom&) const = default;
};

/// Duals only directly above atoms, Tensor/Par flattened, units dropped.
struct NormalForm {
  CausalType tree;
  std::vector<SignedAtom> signature;  // leaves, left to right
};

NormalForm normalize(const CausalType& t);
/// Normalizes a tree without collecting the signature.
CausalType normal_tree(const CausalType& t);
std::vector<SignedAtom> signature_of(const CausalType& normal);

struct Embedding {
  CausalType source;
  CausalType ambient;              // (x) negatives -o (x) positives
  std::vector<std::size_t> perm;   // ambient leaf k is signature entry perm[k]
  std::vector<SignedAtom> signature;
};

Embedding fo_embedding(const CausalType& t);

/// Cap node after checking both sides share one ambient (EmbedMismatch).
CausalType intersect(const CausalType& a, const CausalType& b);

/**
 * Nested comb over a sequence of groups x1..x2n:
 * x1 -o ((x2 .. x2n-1 comb) -o x2n). Groups of several systems are tensored.
 **/
CausalType comb_type(const std::vector<std::vector<System>>& sequence);

/// (A1 -o A1') (x) ... (x) (An -o An') -o (C -o C'); empty groups are I.
CausalType soc_type(const std::vector<std::pair<std::vector<System>, std::vector<System>>>& parties,
                    const std::vector<System>& c_in, const std::vector<System>& c_out);

}  // namespace causkit
