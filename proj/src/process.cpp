#include "causkit/process.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "causkit/error.hpp"
#include "tensor_kernel.hpp"

namespace causkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BackendMismatch: return "BackendMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::InvalidPermutation: return "InvalidPermutation";
    case ErrorKind::NoSuchWire: return "NoSuchWire";
    case ErrorKind::CyclicWiring: return "CyclicWiring";
    case ErrorKind::NotOneWay: return "NotOneWay";
    case ErrorKind::UnsupportedBackend: return "UnsupportedBackend";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::EmbedMismatch: return "EmbedMismatch";
    case ErrorKind::NotFirstOrderBased: return "NotFirstOrderBased";
    case ErrorKind::UnsupportedIso: return "UnsupportedIso";
    case ErrorKind::UnsupportedType: return "UnsupportedType";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::UnknownEvent: return "UnknownEvent";
    case ErrorKind::TooManyEvents: return "TooManyEvents";
    case ErrorKind::CombinatorialBlowup: return "CombinatorialBlowup";
    case ErrorKind::UnsupportedConnective: return "UnsupportedConnective";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotCausalInput: return "NotCausalInput";
    case ErrorKind::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorKind::InvalidData: return "InvalidData";
  }
  return "Unknown";
}

std::string to_string(Backend b) {
  switch (b) {
    case Backend::MatR: return "matr+";
    case Backend::Cpm: return "cpm";
    case Backend::Rel: return "rel";
  }
  return "?";
}

Backend backend_from_string(const std::string& s) {
  if (s == "matr+") return Backend::MatR;
  if (s == "cpm") return Backend::Cpm;
  if (s == "rel") return Backend::Rel;
  throw CausError(ErrorKind::InvalidData, "unknown backend '" + s + "'");
}

std::size_t wire_extent(Backend b, int dim) {
  auto d = static_cast<std::size_t>(dim);
  return b == Backend::Cpm ? d * d : d;
}

namespace {

void check_unique(const std::vector<System>& wires, const char* side) {
  std::set<std::string> seen;
  for (const auto& w : wires) {
    if (w.dim < 1)
      throw CausError(ErrorKind::InvalidData,
                      "wire '" + w.label + "' has dimension < 1");
    if (!seen.insert(w.label).second)
      throw CausError(ErrorKind::DuplicateLabel,
                      std::string("label '") + w.label + "' repeated among " + side);
  }
}

void require_same_backend(const Process& f, const Process& g) {
  if (f.backend() != g.backend())
    throw CausError(ErrorKind::BackendMismatch,
                    to_string(f.backend()) + " vs " + to_string(g.backend()));
}

Process finish(Backend b, std::vector<System> outs, std::vector<System> ins,
               std::vector<Complex> data) {
  if (b == Backend::Rel) detail::saturate(data);
  return Process(b, std::move(outs), std::move(ins), std::move(data));
}

std::string star_toggled(const std::string& label) {
  if (!label.empty() && label.back() == '*') return label.substr(0, label.size() - 1);
  return label + "*";
}

}  // namespace

Process::Process(Backend backend, std::vector<System> outs, std::vector<System> ins,
                 std::vector<Complex> data)
    : backend_(backend), outs_(std::move(outs)), ins_(std::move(ins)), data_(std::move(data)) {
  check_unique(outs_, "outputs");
  check_unique(ins_, "inputs");
  auto ext = extents();
  if (data_.size() != detail::volume(ext)) {
    std::ostringstream os;
    os << "data has " << data_.size() << " entries, wires require " << detail::volume(ext);
    throw CausError(ErrorKind::ShapeMismatch, os.str());
  }
  if (backend_ == Backend::Rel) {
    for (const auto& x : data_)
      if (!(x == Complex{0.0, 0.0} || x == Complex{1.0, 0.0}))
        throw CausError(ErrorKind::InvalidData, "rel entries must be 0 or 1");
  }
}

Process Process::scalar(Backend backend, Complex value) {
  if (backend == Backend::Rel) value = (value != Complex{}) ? Complex{1.0} : Complex{};
  return Process(backend, {}, {}, {value});
}

std::vector<std::size_t> Process::extents() const {
  std::vector<std::size_t> ext;
  ext.reserve(rank());
  for (const auto& w : outs_) ext.push_back(extent(w));
  for (const auto& w : ins_) ext.push_back(extent(w));
  return ext;
}

std::size_t Process::extent(const System& s) const { return wire_extent(backend_, s.dim); }

Complex Process::scalar_value() const {
  if (!is_scalar()) throw CausError(ErrorKind::ShapeMismatch, "process is not a scalar");
  return data_[0];
}

std::optional<std::size_t> Process::find_out(const std::string& label) const {
  for (std::size_t k = 0; k < outs_.size(); ++k)
    if (outs_[k].label == label) return k;
  return std::nullopt;
}

std::optional<std::size_t> Process::find_in(const std::string& label) const {
  for (std::size_t k = 0; k < ins_.size(); ++k)
    if (ins_[k].label == label) return k;
  return std::nullopt;
}

std::size_t Process::axis(const WireRef& w) const {
  if (w.role == Role::Out) {
    if (auto k = find_out(w.label)) return *k;
    throw CausError(ErrorKind::NoSuchWire, "no output '" + w.label + "'");
  }
  if (auto k = find_in(w.label)) return outs_.size() + *k;
  throw CausError(ErrorKind::NoSuchWire, "no input '" + w.label + "'");
}

const System& Process::system(const WireRef& w) const {
  auto ax = axis(w);
  return ax < outs_.size() ? outs_[ax] : ins_[ax - outs_.size()];
}

double Process::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------

Process compose_seq(const Process& f, const Process& g) {
  require_same_backend(f, g);
  if (f.outs().size() != g.ins().size())
    throw CausError(ErrorKind::ShapeMismatch, "output count of f differs from input count of g");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < f.outs().size(); ++k) {
    if (f.outs()[k].dim != g.ins()[k].dim)
      throw CausError(ErrorKind::ShapeMismatch,
                      "dimension mismatch at position " + std::to_string(k));
    pairs.emplace_back(k, g.outs().size() + k);
  }
  auto fe = f.extents(), ge = g.extents();
  // result axes: f.ins, g.outs
  auto raw = detail::contract(f.data(), fe, g.data(), ge, pairs);
  std::size_t ni = f.ins().size(), no = g.outs().size();
  std::vector<std::size_t> ext;
  for (const auto& w : f.ins()) ext.push_back(f.extent(w));
  for (const auto& w : g.outs()) ext.push_back(g.extent(w));
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < no; ++k) perm.push_back(ni + k);
  for (std::size_t k = 0; k < ni; ++k) perm.push_back(k);
  return finish(f.backend(), g.outs(), f.ins(), detail::permute_axes(raw, ext, perm));
}

Process tensor_par(const Process& f, const Process& g) {
  require_same_backend(f, g);
  std::vector<System> outs = f.outs(), ins = f.ins();
  outs.insert(outs.end(), g.outs().begin(), g.outs().end());
  ins.insert(ins.end(), g.ins().begin(), g.ins().end());
  auto fe = f.extents(), ge = g.extents();
  auto raw = detail::contract(f.data(), fe, g.data(), ge, {});
  // raw axes: f.outs f.ins g.outs g.ins
  std::vector<std::size_t> ext = fe;
  ext.insert(ext.end(), ge.begin(), ge.end());
  std::size_t fo = f.outs().size(), fi = f.ins().size(), go = g.outs().size(),
              gi = g.ins().size();
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < fo; ++k) perm.push_back(k);
  for (std::size_t k = 0; k < go; ++k) perm.push_back(fo + fi + k);
  for (std::size_t k = 0; k < fi; ++k) perm.push_back(fo + k);
  for (std::size_t k = 0; k < gi; ++k) perm.push_back(fo + fi + go + k);
  return finish(f.backend(), std::move(outs), std::move(ins),
                detail::permute_axes(raw, ext, perm));
}

namespace {

void check_perm(std::span<const std::size_t> p, std::size_t n) {
  if (p.size() != n) throw CausError(ErrorKind::InvalidPermutation, "wrong length");
  std::vector<bool> seen(n, false);
  for (auto k : p) {
    if (k >= n || seen[k]) throw CausError(ErrorKind::InvalidPermutation, "not a bijection");
    seen[k] = true;
  }
}

}  // namespace

Process permute(const Process& f, std::span<const std::size_t> in_perm,
                std::span<const std::size_t> out_perm) {
  check_perm(in_perm, f.ins().size());
  check_perm(out_perm, f.outs().size());
  std::vector<System> outs, ins;
  std::vector<std::size_t> perm;
  for (auto k : out_perm) {
    outs.push_back(f.outs()[k]);
    perm.push_back(k);
  }
  for (auto k : in_perm) {
    ins.push_back(f.ins()[k]);
    perm.push_back(f.outs().size() + k);
  }
  auto ext = f.extents();
  return Process(f.backend(), std::move(outs), std::move(ins),
                 detail::permute_axes(f.data(), ext, perm));
}

Process align_to(const Process& f, const Process& like) {
  if (f.outs().size() != like.outs().size() || f.ins().size() != like.ins().size())
    throw CausError(ErrorKind::ShapeMismatch, "wire sets differ");
  std::vector<std::size_t> op, ip;
  for (const auto& w : like.outs()) {
    auto k = f.find_out(w.label);
    if (!k || f.outs()[*k].dim != w.dim)
      throw CausError(ErrorKind::ShapeMismatch, "output '" + w.label + "' missing or resized");
    op.push_back(*k);
  }
  for (const auto& w : like.ins()) {
    auto k = f.find_in(w.label);
    if (!k || f.ins()[*k].dim != w.dim)
      throw CausError(ErrorKind::ShapeMismatch, "input '" + w.label + "' missing or resized");
    ip.push_back(*k);
  }
  return permute(f, ip, op);
}

Process bend(const Process& f, const std::string& label, BendDir dir) {
  std::vector<System> outs = f.outs(), ins = f.ins();
  std::size_t no = outs.size();
  std::vector<std::size_t> perm;
  if (dir == BendDir::InToOut) {
    auto k = f.find_in(label);
    if (!k) throw CausError(ErrorKind::NoSuchWire, "no input '" + label + "'");
    System moved{star_toggled(label), ins[*k].dim};
    ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(*k));
    outs.push_back(moved);
    for (std::size_t j = 0; j < no; ++j) perm.push_back(j);
    perm.push_back(no + *k);
    for (std::size_t j = 0; j < f.ins().size(); ++j)
      if (j != *k) perm.push_back(no + j);
  } else {
    auto k = f.find_out(label);
    if (!k) throw CausError(ErrorKind::NoSuchWire, "no output '" + label + "'");
    System moved{star_toggled(label), outs[*k].dim};
    outs.erase(outs.begin() + static_cast<std::ptrdiff_t>(*k));
    ins.push_back(moved);
    for (std::size_t j = 0; j < no; ++j)
      if (j != *k) perm.push_back(j);
    for (std::size_t j = 0; j < f.ins().size(); ++j) perm.push_back(no + j);
    perm.push_back(*k);
  }
  auto ext = f.extents();
  return Process(f.backend(), std::move(outs), std::move(ins),
                 detail::permute_axes(f.data(), ext, perm));
}

namespace {

std::vector<Complex> discard_vector(Backend b, int dim) {
  auto d = static_cast<std::size_t>(dim);
  if (b != Backend::Cpm) return std::vector<Complex>(d, Complex{1.0});
  std::vector<Complex> v(d * d, Complex{});
  for (std::size_t r = 0; r < d; ++r) v[r * d + r] = 1.0;
  return v;
}

}  // namespace

Process discard_outputs(const Process& f, std::span<const std::string> labels) {
  Process cur = f;
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second)
      throw CausError(ErrorKind::NoSuchWire, "output '" + label + "' listed twice");
    auto k = cur.find_out(label);
    if (!k) throw CausError(ErrorKind::NoSuchWire, "no output '" + label + "'");
    int dim = cur.outs()[*k].dim;
    auto eff = discard_vector(cur.backend(), dim);
    std::vector<std::size_t> eext{eff.size()};
    std::pair<std::size_t, std::size_t> pr{*k, 0};
    auto ext = cur.extents();
    auto raw = detail::contract(cur.data(), ext, eff, eext, std::span(&pr, 1));
    auto outs = cur.outs();
    outs.erase(outs.begin() + static_cast<std::ptrdiff_t>(*k));
    cur = finish(cur.backend(), std::move(outs), cur.ins(), std::move(raw));
  }
  return cur;
}

Process discard_all_outputs(const Process& f) {
  std::vector<std::string> labels;
  for (const auto& w : f.outs()) labels.push_back(w.label);
  return discard_outputs(f, labels);
}

Process plug(const Process& f, const Process& g, std::span<const Link> wiring) {
  require_same_backend(f, g);
  std::vector<bool> f_used(f.rank(), false), g_used(g.rank(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [a, b] : wiring) {
    if (a.role == b.role)
      throw CausError(ErrorKind::ShapeMismatch,
                      "link '" + a.label + "'-'" + b.label + "' joins two wires of the same role");
    auto fa = f.axis(a);
    auto gb = g.axis(b);
    if (f.system(a).dim != g.system(b).dim)
      throw CausError(ErrorKind::ShapeMismatch,
                      "link '" + a.label + "'-'" + b.label + "' joins different dimensions");
    if (f_used[fa] || g_used[gb])
      throw CausError(ErrorKind::CyclicWiring,
                      "wire '" + (f_used[fa] ? a.label : b.label) + "' is connected twice");
    f_used[fa] = g_used[gb] = true;
    pairs.emplace_back(fa, gb);
  }
  auto fe = f.extents(), ge = g.extents();
  auto raw = detail::contract(f.data(), fe, g.data(), ge, pairs);

  // raw axes: f free (outs then ins), g free (outs then ins)
  std::vector<System> f_outs, f_ins, g_outs, g_ins;
  std::vector<std::size_t> f_out_ext, f_in_ext, g_out_ext, g_in_ext;
  for (std::size_t k = 0; k < f.outs().size(); ++k)
    if (!f_used[k]) f_outs.push_back(f.outs()[k]);
  for (std::size_t k = 0; k < f.ins().size(); ++k)
    if (!f_used[f.outs().size() + k]) f_ins.push_back(f.ins()[k]);
  for (std::size_t k = 0; k < g.outs().size(); ++k)
    if (!g_used[k]) g_outs.push_back(g.outs()[k]);
  for (std::size_t k = 0; k < g.ins().size(); ++k)
    if (!g_used[g.outs().size() + k]) g_ins.push_back(g.ins()[k]);

  std::vector<std::size_t> ext;
  for (const auto& w : f_outs) ext.push_back(f.extent(w));
  for (const auto& w : f_ins) ext.push_back(f.extent(w));
  for (const auto& w : g_outs) ext.push_back(g.extent(w));
  for (const auto& w : g_ins) ext.push_back(g.extent(w));
  std::size_t a = f_outs.size(), b = f_ins.size(), c = g_outs.size(), d = g_ins.size();
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < a; ++k) perm.push_back(k);
  for (std::size_t k = 0; k < c; ++k) perm.push_back(a + b + k);
  for (std::size_t k = 0; k < b; ++k) perm.push_back(a + k);
  for (std::size_t k = 0; k < d; ++k) perm.push_back(a + b + c + k);

  std::vector<System> outs = f_outs, ins = f_ins;
  outs.insert(outs.end(), g_outs.begin(), g_outs.end());
  ins.insert(ins.end(), g_ins.begin(), g_ins.end());
  return finish(f.backend(), std::move(outs), std::move(ins),
                detail::permute_axes(raw, ext, perm));
}

Process feedback(const Process& f,
                 std::span<const std::pair<std::string, std::string>> out_to_in) {
  std::vector<bool> used(f.rank(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [o, i] : out_to_in) {
    auto oa = f.axis({o, Role::Out});
    auto ia = f.axis({i, Role::In});
    if (f.system({o, Role::Out}).dim != f.system({i, Role::In}).dim)
      throw CausError(ErrorKind::ShapeMismatch, "loop '" + o + "'->'" + i + "' joins different dimensions");
    if (used[oa] || used[ia])
      throw CausError(ErrorKind::CyclicWiring, "wire used twice in feedback");
    used[oa] = used[ia] = true;
    pairs.emplace_back(oa, ia);
  }
  auto ext = f.extents();
  auto raw = detail::self_trace(f.data(), ext, pairs);
  std::vector<System> outs, ins;
  for (std::size_t k = 0; k < f.outs().size(); ++k)
    if (!used[k]) outs.push_back(f.outs()[k]);
  for (std::size_t k = 0; k < f.ins().size(); ++k)
    if (!used[f.outs().size() + k]) ins.push_back(f.ins()[k]);
  return finish(f.backend(), std::move(outs), std::move(ins), std::move(raw));
}

Process identity(Backend b, const System& in, const System& out) {
  if (in.dim != out.dim) throw CausError(ErrorKind::ShapeMismatch, "identity needs equal dims");
  auto e = wire_extent(b, in.dim);
  std::vector<Complex> data(e * e, Complex{});
  for (std::size_t k = 0; k < e; ++k) data[k * e + k] = 1.0;
  return Process(b, {out}, {in}, std::move(data));
}

Process uniform_state(Backend b, const System& s) {
  auto v = discard_vector(b, s.dim);
  if (b != Backend::Rel)
    for (auto& x : v) x /= static_cast<double>(s.dim);
  return Process(b, {s}, {}, std::move(v));
}

Scalar dimension(Backend b, const System& s) {
  // cap after cup, i.e. the closed loop on the identity.
  std::pair<std::string, std::string> loop{s.label + "_", s.label};
  Process closed =
      feedback(identity(b, s, System{s.label + "_", s.dim}), std::span(&loop, 1));
  return Scalar{b, closed.scalar_value()};
}

double max_abs_diff(const Process& a, const Process& b) {
  require_same_backend(a, b);
  Process bb = align_to(b, a);
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - bb.data()[k]));
  return m;
}

Process scale(const Process& f, Complex factor) {
  auto data = f.data();
  for (auto& x : data) x *= factor;
  return finish(f.backend(), f.outs(), f.ins(), std::move(data));
}

Process add(const Process& a, const Process& b) {
  require_same_backend(a, b);
  Process bb = align_to(b, a);
  auto data = a.data();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] += bb.data()[k];
  return finish(a.backend(), a.outs(), a.ins(), std::move(data));
}

Process relabel(const Process& f, const WireRef& w, const std::string& label) {
  auto outs = f.outs(), ins = f.ins();
  auto ax = f.axis(w);
  if (ax < outs.size())
    outs[ax].label = label;
  else
    ins[ax - outs.size()].label = label;
  return Process(f.backend(), std::move(outs), std::move(ins), f.data());
}

}  // namespace causkit
