#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causkit/process.hpp"

namespace causkit {

enum class Axiom { C1, C2, C3, C4p, C5p };
enum class AxiomVerdict { Holds, Refuted, Untested };

std::string to_string(Axiom a);
std::string to_string(AxiomVerdict v);
Axiom axiom_from_string(const std::string& s);

struct AxiomConfig {
  std::uint64_t seed = 20240901;
  int instances = 50;
  int max_dim_matr = 4;
  int max_dim_cpm = 3;
  int max_dim_rel = 3;
  double tol = 1e-9;
  /// Ask for a constructed cpm factorization (not available).
  bool cpm_constructive = false;

  int max_dim(Backend b) const;
};

/// key=value lines; '#' starts a comment. Unknown keys raise InvalidData.
AxiomConfig load_axiom_config(const std::string& path);
AxiomConfig parse_axiom_config(const std::string& text);

struct AxiomResult {
  Axiom axiom = Axiom::C1;
  Backend backend = Backend::MatR;
  AxiomVerdict verdict = AxiomVerdict::Untested;
  std::string witness;
  double residual = 0.0;
};

/// Throws UnsupportedCombination for (C4', cpm) in constructive mode.
AxiomResult run_axiom(Axiom axiom, Backend backend, const AxiomConfig& config = {});
std::vector<AxiomResult> run_all(Backend backend, const AxiomConfig& config = {});

/// The verdict each backend is known to give.
AxiomVerdict expected_verdict(Axiom axiom, Backend backend);

struct EffectSolve {
  Process effect;           // least-norm solution
  std::size_t nullity = 0;  // dimension of the solution space minus one point
  double residual = 0.0;    // max |pi . rho_k - 1| of the solution
};

/// Solves pi . rho = 1 for every rho in causal_basis(s).
EffectSolve solve_normalizing_effect(Backend b, const System& s);

/**
 * Solves "w normalizes every causal channel A -> B" for w : B -> A and
 * returns the largest distance of any solution (particular plus unit null
 * directions) from the split form rho (x) discard_B.
 **/
struct SplitSolve {
  double split_residual = 0.0;
  double solve_residual = 0.0;
  std::size_t nullity = 0;
};
SplitSolve solve_second_order_effects(Backend b, const System& a, const System& bsys);

/// The relation w(i, j) = not (i and j) on two bits, as a process B -> A.
Process rel_c5_witness();

}  // namespace causkit
