#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "causkit/process.hpp"
#include "causkit/report.hpp"

namespace causkit {

enum class ScalarKind { NonnegReal, Boolean };

struct BackendProfile {
  Backend id;
  bool supports_factorization;
  ScalarKind scalar_kind;
};

BackendProfile profile(Backend b);

/// The discarding effect on one system.
Process discard(Backend b, const System& s);
/// Discarding on a list of systems, as one effect.
Process discard(Backend b, std::span<const System> systems);

/// Compares discard-after-f with discarding the inputs of f.
CheckReport is_causal(const Process& f, Tolerance tol = {});

/// Matrix entries over all wires: matr+ nonnegative, cpm Choi PSD.
CheckReport is_positive(const Process& f, Tolerance tol = {});

/// A spanning family of causal states of `s` (ext(s) states).
std::vector<Process> causal_basis(Backend b, const System& s);

/// Deterministic pseudo-random causal process.
Process random_causal(Backend b, std::vector<System> ins, std::vector<System> outs,
                      std::uint64_t seed);

/// Size of spanning_channels() for flattened dimensions din -> dout.
std::size_t spanning_family_size(Backend b, std::size_t din, std::size_t dout);

/**
 * Causal channels ins -> outs whose affine span contains every causal
 * channel: all functions for matr+ and rel, and for cpm the completely
 * depolarizing channel plus traceless Hermitian directions.
 **/
std::vector<Process> spanning_channels(Backend b, const std::vector<System>& ins,
                                       const std::vector<System>& outs);

/**
 * Splits a one-way signalling process (first before second) into
 * Phi1 : first.ins -> first.outs (x) memory and Phi2 : memory (x) second.ins
 * -> second.outs. matr+ and rel only.
 **/
std::pair<Process, Process> factorize_one_way(const Process& phi, const Event& first,
                                              const Event& second, Tolerance tol = {});

/// Joins the factors produced by factorize_one_way through their memory wire.
Process recompose_one_way(const Process& phi1, const Process& phi2);

/// Label used for the memory wire of factorize_one_way.
inline constexpr const char* kMemoryLabel = "_mem";

// ---------------------------------------------------------------------------
// Marginal machinery shared by the causality checks.

/// Plugs the uniform state into the listed inputs.
Process plug_uniform(const Process& r, std::span<const std::string> inputs);

/**
 * Max-abs distance between r and (r with uniform states plugged into
 * `inputs`) tensored with discarding on those inputs. Zero exactly when r
 * does not depend on `inputs`.
 **/
double marginal_residual(const Process& r, std::span<const std::string> inputs);

// ---------------------------------------------------------------------------
// Choi matrices (cpm).

/// J[(o, i), (o', i')] over (all outputs) (x) (all inputs), row-major flats.
Eigen::MatrixXcd choi_matrix(const Process& f);
Process from_choi(std::vector<System> outs, std::vector<System> ins,
                  const Eigen::MatrixXcd& choi);

}  // namespace causkit
