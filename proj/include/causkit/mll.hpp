#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace causkit {

enum class FormulaKind { Atom, NegAtom, One, Bot, Tensor, Par };

/// MLL formula in negation normal form. Tensor and Par are binary.
struct Formula {
  FormulaKind kind = FormulaKind::One;
  std::string name;
  std::vector<Formula> kids;

  bool operator==(const Formula&) const = default;
};

/// A one-sided sequent |- f1, ..., fn, kept as a multiset.
using Sequent = std::vector<Formula>;

enum class Rule { Ax, One, Bot, Par, Tensor, Mix, Mix0 };

struct Proof {
  Rule rule = Rule::Mix0;
  Sequent conclusion;
  std::vector<Proof> premises;
};

std::string print_formula(const Formula& f);
std::string print_sequent(const Sequent& s);
Formula negate(const Formula& f);

/**
 * "G1, ..., Gm |- D1, ..., Dn" in the type grammar, becoming
 * |- G1^perp, ..., Gm^perp, D1, ..., Dn. Dimensions are ignored, units inside
 * (x) and (+) are dropped (I = I^*). Throws SyntaxError or
 * UnsupportedConnective for `cap`.
 **/
Sequent parse_sequent(const std::string& text);

inline constexpr std::size_t kDefaultProofBudget = 2000000;

struct ProveResult {
  std::optional<Proof> proof;  // empty: not derivable in MLL+Mix
  std::size_t explored = 0;
};

/// Exhaustive cut-free search. Throws BudgetExceeded past `budget` nodes.
ProveResult prove(const Sequent& s, std::size_t budget = kDefaultProofBudget);

/// Rule-by-rule recheck of a proof tree.
bool verify_proof(const Proof& p);

std::size_t proof_size(const Proof& p);

/// One line per node, "Rule |- f1, f2", two spaces of indent per depth.
std::string render_proof(const Proof& p);
Proof parse_proof(const std::string& text);

}  // namespace causkit
