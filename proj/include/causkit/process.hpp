#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace causkit {

using Complex = std::complex<double>;

enum class Backend { MatR, Cpm, Rel };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

/// A labelled system. `dim` is the vector-space dimension (matr+, rel) or the
/// Hilbert-space dimension (cpm). dim == 1 is the trivial system.
struct System {
  std::string label;
  int dim = 1;

  bool operator==(const System&) const = default;
};

enum class Role { In, Out };

struct WireRef {
  std::string label;
  Role role = Role::Out;
};

/// Comparison tolerance for floating backends. rel is always exact.
struct Tolerance {
  double eps = 1e-9;
};

/**
 * A morphism of one of the three concrete process theories, stored as a dense
 * tensor with one axis per wire, output axes first, then input axes, each list
 * in its declared order, row-major.
 *
 * matr+ and rel use one axis of extent d per wire. cpm uses the doubled
 * superoperator layout: one axis of extent d*d per wire whose index packs the
 * (row, column) pair of the operator on that wire, so that entry
 * [o_1..o_n; i_1..i_m] is <o_row| Phi(|i_row><i_col|) |o_col>. That value is
 * also the Choi matrix entry J[(o_row, i_row), (o_col, i_col)], see
 * choi_matrix(). Under this layout the cup, cap and composition are plain
 * index contractions for every backend.
 *
 * Processes are immutable values.
 **/
class Process {
 public:
  Process() = default;
  Process(Backend backend, std::vector<System> outs, std::vector<System> ins,
          std::vector<Complex> data);

  static Process scalar(Backend backend, Complex value);

  Backend backend() const { return backend_; }
  const std::vector<System>& outs() const { return outs_; }
  const std::vector<System>& ins() const { return ins_; }
  const std::vector<Complex>& data() const { return data_; }

  std::size_t rank() const { return outs_.size() + ins_.size(); }
  /// Axis extents in storage order.
  std::vector<std::size_t> extents() const;
  std::size_t extent(const System& s) const;

  bool is_scalar() const { return outs_.empty() && ins_.empty(); }
  Complex scalar_value() const;

  std::optional<std::size_t> find_out(const std::string& label) const;
  std::optional<std::size_t> find_in(const std::string& label) const;
  /// Storage axis of a wire; throws NoSuchWire.
  std::size_t axis(const WireRef& w) const;
  const System& system(const WireRef& w) const;

  double max_abs() const;

 private:
  Backend backend_ = Backend::MatR;
  std::vector<System> outs_;
  std::vector<System> ins_;
  std::vector<Complex> data_;
};

/// Extent of one wire axis for a backend (d, or d*d for cpm).
std::size_t wire_extent(Backend b, int dim);

struct Scalar {
  Backend backend = Backend::MatR;
  Complex value{0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Tensor core. All operations are pure.

/// g after f; f's outputs are matched positionally to g's inputs.
Process compose_seq(const Process& f, const Process& g);

Process tensor_par(const Process& f, const Process& g);

/// new_outs[k] = outs[out_perm[k]], new_ins[k] = ins[in_perm[k]].
Process permute(const Process& f, std::span<const std::size_t> in_perm,
                std::span<const std::size_t> out_perm);

/// Reorders wires of `f` to the label order of `like` (same wire sets).
Process align_to(const Process& f, const Process& like);

enum class BendDir { InToOut, OutToIn };

/**
 * Moves one wire across with the cup/cap. Bending input `A` produces output
 * `A*` appended to the outputs; bending output `A*` back yields input `A`.
 * Data is unchanged up to reindexing for every backend.
 **/
Process bend(const Process& f, const std::string& label, BendDir dir);

/// Applies the discarding effect to the listed outputs.
Process discard_outputs(const Process& f, std::span<const std::string> labels);
Process discard_all_outputs(const Process& f);

/// One connection of plug(): `first` names a wire of f, `second` a wire of g,
/// with opposite roles.
using Link = std::pair<WireRef, WireRef>;

/**
 * General contraction of two processes. Remaining outputs are f's then g's,
 * likewise for inputs. Connections may run in both directions between f and g
 * (feedback through a higher-order process), but a wire may be used once.
 **/
Process plug(const Process& f, const Process& g, std::span<const Link> wiring);

/// Connects outputs of f to inputs of f (a closed loop).
Process feedback(const Process& f,
                 std::span<const std::pair<std::string, std::string>> out_to_in);

Process identity(Backend b, const System& in, const System& out);
Process uniform_state(Backend b, const System& s);
Scalar dimension(Backend b, const System& s);

/// Largest |a - b| entry after aligning b's wires to a's labels.
double max_abs_diff(const Process& a, const Process& b);

/// Scales every entry (not meaningful for rel).
Process scale(const Process& f, Complex factor);
Process add(const Process& a, const Process& b);

/// Renames one wire.
Process relabel(const Process& f, const WireRef& w, const std::string& label);

}  // namespace causkit
