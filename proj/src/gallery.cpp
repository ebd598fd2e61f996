#include "causkit/gallery.hpp"

#include <cmath>
#include <set>

#include "causkit/backend.hpp"
#include "causkit/error.hpp"

namespace causkit {

namespace {

std::string fmt(const std::string& pattern, int d) {
  std::string out;
  for (char c : pattern) {
    if (c == '#') out += std::to_string(d);
    else out += c;
  }
  return out;
}

std::vector<HomeType> switch_types(int d) {
  return {
      {parse_type(fmt("X[2] (x) C[#] -o (A[#] -o A'[#]) (x) (B[#] -o B'[#]) -o C'[#]", d)), true},
      {parse_type(fmt("X[2] (x) C[#] -o (A[#] -o (A'[#] -o B[#]) -o B'[#]) -o C'[#]", d)), false},
      {parse_type(fmt("X[2] (x) C[#] -o (B[#] -o (B'[#] -o A[#]) -o A'[#]) -o C'[#]", d)), false},
  };
}

// Row-major index over the listed extents.
std::size_t flat(std::initializer_list<std::size_t> idx, std::initializer_list<std::size_t> ext) {
  std::size_t f = 0;
  auto e = ext.begin();
  for (auto i : idx) f = f * *e++ + i;
  return f;
}

Process switch_process(Backend b, int d) {
  const auto n = wire_extent(b, d);
  const auto nx = wire_extent(b, 2);
  // Control value i as an index on the X axis: |i><i| in the doubled layout.
  auto control = [&](std::size_t i) { return b == Backend::Cpm ? i * 2 + i : i; };
  std::vector<System> outs{{"A", d}, {"B", d}, {"C'", d}};
  std::vector<System> ins{{"X", 2}, {"C", d}, {"A'", d}, {"B'", d}};
  std::vector<Complex> data(n * n * n * nx * n * n * n, Complex{});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t ap = 0; ap < n; ++ap)
        for (std::size_t bp = 0; bp < n; ++bp) {
          std::size_t a, bb, cp;
          if (x == 0) {
            a = c, bb = ap, cp = bp;
          } else {
            bb = c, a = bp, cp = ap;
          }
          data[flat({a, bb, cp, control(x), c, ap, bp}, {n, n, n, nx, n, n, n})] = 1.0;
        }
  return Process(b, std::move(outs), std::move(ins), std::move(data));
}

CausalType party_comb_type(const std::vector<std::string>& parties, int d) {
  std::vector<std::vector<System>> seq;
  for (const auto& p : parties) {
    seq.push_back({System{p, d}});
    seq.push_back({System{p + "'", d}});
  }
  return lolli(comb_type(seq), unit());
}

CausalType party_soc_type(const std::vector<std::string>& parties, int d) {
  std::vector<std::pair<std::vector<System>, std::vector<System>>> arrows;
  for (const auto& p : parties) arrows.push_back({{System{p, d}}, {System{p + "'", d}}});
  return soc_type(arrows, {}, {});
}

}  // namespace

std::vector<Event> switch_order(bool a_first) {
  std::string p = a_first ? "A" : "B", q = a_first ? "B" : "A";
  return {Event{"control", {"X", "C"}, {p}}, Event{p, {p + "'"}, {q}}, Event{q, {q + "'"}, {"C'"}}};
}

std::vector<Event> party_order(const std::vector<std::string>& parties) {
  std::vector<Event> evs;
  std::vector<std::string> prev;
  for (const auto& p : parties) {
    evs.push_back(Event{"to_" + p, prev, {p}});
    prev = {p + "'"};
  }
  evs.push_back(Event{"end", prev, {}});
  return evs;
}

NamedExample classical_switch(int d) {
  if (d < 2) throw CausError(ErrorKind::InvalidData, "switch needs d >= 2");
  return {"classical_switch", switch_process(Backend::MatR, d), switch_types(d), "control-ordered wiring of two parties"};
}

NamedExample quantum_z_switch() {
  return {"quantum_z_switch", switch_process(Backend::Cpm, 2), switch_types(2), "switch with a qubit control measured in the Z basis"};
}

NamedExample ocb_process() {
  using M = Eigen::Matrix2cd;
  M id = M::Identity(), z, x;
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  auto k4 = [](const M& a, const M& b, const M& c, const M& d) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        out(i, j) = a(i >> 3 & 1, j >> 3 & 1) * b(i >> 2 & 1, j >> 2 & 1) * c(i >> 1 & 1, j >> 1 & 1) *
                    d(i & 1, j & 1);
    return out;
  };
  // Wire order A, B (outputs of w), A', B' (inputs of w).
  Eigen::MatrixXcd w = k4(id, id, id, id) + (k4(id, z, z, id) + k4(z, x, id, z)) / std::sqrt(2.0);
  w /= 4.0;
  Process p = from_choi({{"A", 2}, {"B", 2}}, {{"A'", 2}, {"B'", 2}}, w);
  return {"ocb_process", p,
          {{party_soc_type({"A", "B"}, 2), true},
           {party_comb_type({"A", "B"}, 2), false},
           {party_comb_type({"B", "A"}, 2), false}},
          "Oreshkov, Costa, Brukner (2012)"};
}

NamedExample bw_process() {
  std::vector<Complex> data(64, Complex{});
  for (std::size_t ap = 0; ap < 2; ++ap)
    for (std::size_t bp = 0; bp < 2; ++bp)
      for (std::size_t cp = 0; cp < 2; ++cp) {
        std::size_t a = (!bp && cp), b = (!cp && ap), c = (!ap && bp);
        data[flat({a, b, c, ap, bp, cp}, {2, 2, 2, 2, 2, 2})] = 1.0;
      }
  Process p(Backend::MatR, {{"A", 2}, {"B", 2}, {"C", 2}}, {{"A'", 2}, {"B'", 2}, {"C'", 2}}, std::move(data));
  std::vector<HomeType> types{{party_soc_type({"A", "B", "C"}, 2), true}};
  std::vector<std::string> perm{"A", "B", "C"};
  do {
    types.push_back({party_comb_type(perm, 2), false});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {"bw_process", p, types, "Baumeler, Wolf (2016)"};
}

NamedExample memory_comb(const std::vector<Process>& channels) {
  if (channels.empty()) throw CausError(ErrorKind::ShapeMismatch, "no channels");
  for (std::size_t k = 0; k < channels.size(); ++k)
    if (!is_causal(channels[k]).verdict)
      throw CausError(ErrorKind::NotCausalInput, "channel " + std::to_string(k) + " is not causal");

  std::vector<std::vector<System>> seq;
  Process cur = channels[0];
  std::vector<std::string> memory_in;  // inputs of channel k fed by channel k-1
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const Process& ch = channels[k];
    std::set<std::string> next_ins;
    if (k + 1 < channels.size())
      for (const auto& s : channels[k + 1].ins()) next_ins.insert(s.label);
    std::vector<System> ins, outs;
    std::set<std::string> mem(memory_in.begin(), memory_in.end());
    for (const auto& s : ch.ins())
      if (!mem.count(s.label)) ins.push_back(s);
    std::vector<std::string> produced;
    for (const auto& s : ch.outs()) {
      if (next_ins.count(s.label)) produced.push_back(s.label);
      else outs.push_back(s);
    }
    if (k + 1 < channels.size() && produced.empty())
      throw CausError(ErrorKind::ShapeMismatch, "channel " + std::to_string(k) + " has no memory wire to the next");
    if (k > 0) {
      std::vector<Link> links;
      for (const auto& l : memory_in) links.push_back({WireRef{l, Role::Out}, WireRef{l, Role::In}});
      cur = plug(cur, ch, links);
    }
    seq.push_back(ins);
    seq.push_back(outs);
    memory_in = produced;
  }
  return {"memory_comb", cur, {{comb_type(seq), true}}, "memory channels composed in sequence"};
}

NamedExample swap_process(const System& a, const System& b, Backend backend) {
  Process ia = identity(backend, a, a), ib = identity(backend, b, b);
  Process p = tensor_par(ia, ib);
  Process swapped = permute(p, std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0});
  CausalType arrow_ab = lolli(atom(a), atom(b)), arrow_ba = lolli(atom(b), atom(a));
  return {"swap_process", swapped,
          {{par({arrow_ab, arrow_ba}), true}, {tensor({arrow_ab, arrow_ba}), false}},
          "symmetry map"};
}

NamedExample time_travel_counterexample(int d, Backend backend) {
  System s{"A", d};
  std::vector<std::pair<std::string, std::string>> loop{{"A", "A"}};
  Process p = feedback(identity(backend, s, s), loop);
  return {"time_travel", p, {{unit(), d == 1}}, "trace of the identity channel"};
}

namespace {

std::vector<Process> fixed_memory_channels() {
  return {random_causal(Backend::MatR, {{"A1", 2}}, {{"A1'", 2}, {"M1", 2}}, 11),
          random_causal(Backend::MatR, {{"M1", 2}, {"A2", 2}}, {{"A2'", 2}, {"M2", 2}}, 12),
          random_causal(Backend::MatR, {{"M2", 2}, {"A3", 2}}, {{"A3'", 2}}, 13)};
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"classical_switch", "quantum_z_switch", "ocb_process", "bw_process",
          "memory_comb",      "swap_process",     "time_travel"};
}

NamedExample gallery_get(const std::string& name) {
  if (name == "classical_switch") return classical_switch(2);
  if (name == "quantum_z_switch") return quantum_z_switch();
  if (name == "ocb_process") return ocb_process();
  if (name == "bw_process") return bw_process();
  if (name == "memory_comb") return memory_comb(fixed_memory_channels());
  if (name == "swap_process") return swap_process({"A", 2}, {"B", 2});
  if (name == "time_travel") return time_travel_counterexample(2);
  throw CausError(ErrorKind::InvalidData, "unknown example '" + name + "'");
}

std::vector<NamedExample> gallery_all() {
  std::vector<NamedExample> out;
  for (const auto& n : gallery_names()) out.push_back(gallery_get(n));
  return out;
}

std::vector<VerdictRow> verify_example(const NamedExample& ex, Tolerance tol) {
  std::vector<VerdictRow> rows;
  for (const auto& h : ex.home_types)
    rows.push_back({print_type(h.type), h.expected, check_membership(ex.process, h.type, tol)});
  return rows;
}

}  // namespace causkit
