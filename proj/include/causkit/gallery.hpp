#pragma once

#include <string>
#include <vector>

#include "causkit/checks.hpp"
#include "causkit/process.hpp"
#include "causkit/types.hpp"

namespace causkit {

struct HomeType {
  CausalType type;
  bool expected = true;
};

struct NamedExample {
  std::string name;
  Process process;
  std::vector<HomeType> home_types;
  std::string citation;
};

/**
 * Control X (dim 2) chooses the order: X = 0 feeds C to A, A' to B and B' to
 * C'; X = 1 feeds C to B, B' to A and A' to C'. Wires: inputs X, C, A', B';
 * outputs A, B, C'.
 **/
NamedExample classical_switch(int d = 2);
/// Qubit version with control effects Tr(|i><i| -).
NamedExample quantum_z_switch();
/// Process matrix on w outputs A, B and w inputs A', B' (qubits).
NamedExample ocb_process();
/// Deterministic three-party classical process without causal order.
NamedExample bw_process();
/**
 * Staircase composition. Wires shared between consecutive channels (an
 * output of one named like an input of the next) are the memory.
 **/
NamedExample memory_comb(const std::vector<Process>& channels);
NamedExample swap_process(const System& a, const System& b, Backend backend = Backend::MatR);
/// Trace of the identity channel on a dim-d system: the scalar d (d^2 in cpm).
NamedExample time_travel_counterexample(int d, Backend backend = Backend::MatR);

/// The fixed instances that have golden files.
std::vector<NamedExample> gallery_all();
std::vector<std::string> gallery_names();
/// Throws InvalidData for unknown names.
NamedExample gallery_get(const std::string& name);

struct VerdictRow {
  std::string type_text;
  bool expected = true;
  CheckReport report;
  bool matches() const { return report.verdict == expected; }
};

std::vector<VerdictRow> verify_example(const NamedExample& ex, Tolerance tol = {});

/// The comb orderings used by the switch, OCB and B&W verdict tables.
std::vector<Event> switch_order(bool a_first);
std::vector<Event> party_order(const std::vector<std::string>& parties);

}  // namespace causkit
