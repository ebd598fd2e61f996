#include "causkit/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "causkit/backend.hpp"
#include "causkit/checks.hpp"
#include "causkit/error.hpp"

namespace causkit {

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::C1: return "C1";
    case Axiom::C2: return "C2";
    case Axiom::C3: return "C3";
    case Axiom::C4p: return "C4'";
    case Axiom::C5p: return "C5'";
  }
  return "?";
}

std::string to_string(AxiomVerdict v) {
  switch (v) {
    case AxiomVerdict::Holds: return "holds";
    case AxiomVerdict::Refuted: return "refuted";
    case AxiomVerdict::Untested: return "untested";
  }
  return "?";
}

Axiom axiom_from_string(const std::string& s) {
  for (Axiom a : {Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C4p, Axiom::C5p})
    if (to_string(a) == s) return a;
  if (s == "C4p") return Axiom::C4p;
  if (s == "C5p") return Axiom::C5p;
  throw CausError(ErrorKind::InvalidData, "unknown axiom '" + s + "'");
}

int AxiomConfig::max_dim(Backend b) const {
  switch (b) {
    case Backend::MatR: return max_dim_matr;
    case Backend::Cpm: return max_dim_cpm;
    case Backend::Rel: return max_dim_rel;
  }
  return 2;
}

AxiomConfig parse_axiom_config(const std::string& text) {
  AxiomConfig c;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos)
      throw CausError(ErrorKind::InvalidData, "config line " + std::to_string(no) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (key == "seed") c.seed = std::stoull(value);
      else if (key == "instances") c.instances = std::stoi(value);
      else if (key == "max_dim_matr") c.max_dim_matr = std::stoi(value);
      else if (key == "max_dim_cpm") c.max_dim_cpm = std::stoi(value);
      else if (key == "max_dim_rel") c.max_dim_rel = std::stoi(value);
      else if (key == "tol") c.tol = std::stod(value);
      else if (key == "cpm_constructive") c.cpm_constructive = (value == "true" || value == "1");
      else throw CausError(ErrorKind::InvalidData, "config line " + std::to_string(no) + ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw CausError(ErrorKind::InvalidData, "config line " + std::to_string(no) + ": bad value '" + value + "'");
    }
  }
  return c;
}

AxiomConfig load_axiom_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CausError(ErrorKind::InvalidData, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_axiom_config(ss.str());
}

AxiomVerdict expected_verdict(Axiom axiom, Backend backend) {
  if (axiom == Axiom::C5p && backend == Backend::Rel) return AxiomVerdict::Refuted;
  return AxiomVerdict::Holds;
}

// ---------------------------------------------------------------------------
// Linear solves

namespace {

Eigen::MatrixXcd state_matrix(const std::vector<Process>& states) {
  const auto rows = static_cast<Eigen::Index>(states.front().data().size());
  Eigen::MatrixXcd m(rows, static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, static_cast<Eigen::Index>(k)) = states[k].data()[static_cast<std::size_t>(r)];
  return m;
}

std::size_t numeric_rank(const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd, double eps) {
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double cut = eps * std::max(1.0, sv(0));
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cut) ++r;
  return r;
}

}  // namespace

EffectSolve solve_normalizing_effect(Backend b, const System& s) {
  auto basis = causal_basis(b, s);
  // Rows: basis states as covectors; pi . rho = sum_x pi[x] rho[x].
  Eigen::MatrixXcd a = state_matrix(basis).transpose();
  Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(a.rows());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  Eigen::VectorXcd x = svd.solve(ones);
  EffectSolve out;
  out.nullity = static_cast<std::size_t>(a.cols()) - numeric_rank(svd, 1e-12);
  out.residual = (a * x - ones).cwiseAbs().maxCoeff();
  std::vector<Complex> data(x.data(), x.data() + x.size());
  out.effect = Process(b == Backend::Rel ? Backend::MatR : b, {}, {s}, std::move(data));
  return out;
}

SplitSolve solve_second_order_effects(Backend b, const System& a, const System& bsys) {
  if (b == Backend::Rel)
    throw CausError(ErrorKind::UnsupportedBackend, "linear solves need a field; use rel_c5_witness for rel");
  auto family = spanning_channels(b, {a}, {bsys});
  const std::size_t na = wire_extent(b, a.dim), nb = wire_extent(b, bsys.dim);
  // w : B -> A with data [a; b]; a channel phi has data [b; a].
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(family.size()), static_cast<Eigen::Index>(na * nb));
  for (std::size_t k = 0; k < family.size(); ++k)
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i * nb + j)) = family[k].data()[j * na + i];
  Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  Eigen::VectorXcd x = svd.solve(ones);
  const std::size_t rank = numeric_rank(svd, 1e-12);

  SplitSolve out;
  out.solve_residual = (m * x - ones).cwiseAbs().maxCoeff();
  out.nullity = na * nb - rank;
  auto split_distance = [&](const Eigen::VectorXcd& v) {
    std::vector<Complex> data(v.data(), v.data() + v.size());
    Process w(b, {a}, {bsys}, std::move(data));
    const std::string in_label = bsys.label;
    return marginal_residual(w, std::span(&in_label, 1));
  };
  out.split_residual = split_distance(x);
  const auto& v = svd.matrixV();
  for (Eigen::Index k = static_cast<Eigen::Index>(rank); k < v.cols(); ++k) {
    Eigen::VectorXcd dir = v.col(k);
    dir /= dir.cwiseAbs().maxCoeff();
    out.split_residual = std::max(out.split_residual, split_distance(dir));
  }
  return out;
}

Process rel_c5_witness() {
  // [i; j] = not (i and j), i on A (output), j on B (input).
  std::vector<Complex> data{1.0, 1.0, 1.0, 0.0};
  return Process(Backend::Rel, {{"A", 2}}, {{"B", 2}}, std::move(data));
}

// ---------------------------------------------------------------------------
// Axioms

namespace {

struct Runner {
  Backend b;
  const AxiomConfig& cfg;
  std::uint64_t seed;

  Tolerance tol() const { return Tolerance{cfg.tol}; }
  double limit() const { return b == Backend::Rel ? 0.0 : cfg.tol; }

  int dim_for(int k) const {
    int hi = cfg.max_dim(b);
    return 2 + k % std::max(1, hi - 1);
  }

  AxiomResult result(Axiom a, double residual, const std::string& ok, const std::string& bad) const {
    AxiomResult r;
    r.axiom = a;
    r.backend = b;
    r.residual = residual;
    r.verdict = residual <= limit() ? AxiomVerdict::Holds : AxiomVerdict::Refuted;
    r.witness = r.verdict == AxiomVerdict::Holds ? ok : bad;
    return r;
  }

  AxiomResult c1() const {
    double worst = 0.0;
    for (int k = 0; k < cfg.instances; ++k) {
      System x{"X", dim_for(k)}, a{"A", dim_for(k + 1)}, c{"B", dim_for(k + 2)};
      Process f = random_causal(b, {x}, {a, c}, seed + static_cast<std::uint64_t>(k));
      std::vector<std::string> both{"A", "B"}, first{"A"}, second{"B"};
      Process joint = discard_outputs(f, both);
      Process ab = discard_outputs(discard_outputs(f, first), second);
      Process ba = discard_outputs(discard_outputs(f, second), first);
      // The discard of a composite system is the tensor of the discards.
      std::vector<System> sys{a, c};
      Process composite = discard(b, std::span<const System>(sys));
      Process product = tensor_par(discard(b, a), discard(b, c));
      worst = std::max({worst, max_abs_diff(joint, ab), max_abs_diff(joint, ba), max_abs_diff(composite, product)});
    }
    // Discarding the trivial system is the empty diagram.
    Process trivial = discard(b, System{"I", 1});
    worst = std::max(worst, std::abs(trivial.data()[0] - Complex{1.0}));
    return result(Axiom::C1, worst, "discarding is multiplicative", "discard of a composite differs from the product");
  }

  AxiomResult c2() const {
    std::string values;
    double worst = 0.0;
    bool all_invertible = true;
    for (int d = 1; d <= cfg.max_dim(b); ++d) {
      Complex v = dimension(b, System{"A", d}).value;
      double expect = b == Backend::Rel ? 1.0 : b == Backend::Cpm ? d * d : d;
      worst = std::max(worst, std::abs(v - Complex{expect}));
      if (std::abs(v) == 0.0) all_invertible = false;
      values += (values.empty() ? "" : ", ") + std::string("d=") + std::to_string(d) + " -> " +
                std::to_string(static_cast<long long>(std::llround(v.real())));
    }
    AxiomResult r = result(Axiom::C2, worst, values, values);
    if (!all_invertible) r.verdict = AxiomVerdict::Refuted;
    return r;
  }

  AxiomResult c3() const {
    double worst = 0.0;
    std::string bad;
    for (int d = 1; d <= cfg.max_dim(b); ++d) {
      System s{"A", d};
      auto basis = causal_basis(b, s);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state_matrix(basis));
      if (numeric_rank(svd, 1e-12) != wire_extent(b, d)) {
        worst = 1.0;
        bad = "basis for d=" + std::to_string(d) + " does not span";
      }
    }
    // Distinct processes are told apart on product basis states.
    for (int k = 0; k < cfg.instances; ++k) {
      System x{"X", dim_for(k)}, y{"Y", dim_for(k + 1)}, o{"O", dim_for(k + 2)};
      Process f = random_causal(b, {x, y}, {o}, seed + 2 * static_cast<std::uint64_t>(k));
      Process g = random_causal(b, {x, y}, {o}, seed + 2 * static_cast<std::uint64_t>(k) + 1);
      double differ = 0.0;
      for (const auto& rx : causal_basis(b, x))
        for (const auto& ry : causal_basis(b, y)) {
          Process st = tensor_par(rx, ry);
          differ = std::max(differ, max_abs_diff(compose_seq(st, f), compose_seq(st, g)));
        }
      double actual = max_abs_diff(f, g);
      if ((actual > limit()) != (differ > limit())) {
        worst = std::max(worst, actual);
        bad = "instance " + std::to_string(k) + " agrees on product states but differs";
      }
    }
    return result(Axiom::C3, worst, "causal states span; product states separate processes", bad);
  }

  // Phi2 . (Phi1 (x) id) with a memory wire: one-way signalling A1 before A2.
  Process one_way_instance(int k, std::uint64_t s) const {
    System a1{"A1", dim_for(k)}, a1p{"A1'", dim_for(k + 1)}, m{"M", dim_for(k + 2)};
    System a2{"A2", dim_for(k + 3)}, a2p{"A2'", 2};
    Process p1 = random_causal(b, {a1}, {a1p, m}, s);
    Process p2 = random_causal(b, {m, a2}, {a2p}, s + 7919);
    Link link{WireRef{"M", Role::Out}, WireRef{"M", Role::In}};
    return plug(p1, p2, std::span(&link, 1));
  }

  AxiomResult c4p() const {
    const Event first{"first", {"A1"}, {"A1'"}}, second{"second", {"A2"}, {"A2'"}};
    if (b == Backend::Cpm) {
      if (cfg.cpm_constructive)
        throw CausError(ErrorKind::UnsupportedCombination, "cpm one-way factorization is checked, not constructed");
      double worst = 0.0;
      for (int k = 0; k < cfg.instances; ++k) {
        Process phi = one_way_instance(k, seed + static_cast<std::uint64_t>(k));
        worst = std::max(worst, check_one_way(phi, {first}, {second}, tol()).residual);
      }
      return result(Axiom::C4p, worst, "marginal-consistency mode: every memory composite is one-way",
                    "a memory composite fails the one-way condition");
    }
    double worst = 0.0;
    for (int k = 0; k < cfg.instances; ++k) {
      Process phi = one_way_instance(k, seed + static_cast<std::uint64_t>(k));
      auto [f1, f2] = factorize_one_way(phi, first, second, tol());
      double r = max_abs_diff(phi, recompose_one_way(f1, f2));
      r = std::max({r, is_causal(f1, tol()).residual, is_causal(f2, tol()).residual});
      worst = std::max(worst, r);
    }
    std::ostringstream ok;
    ok << "reconstruction residual " << worst;
    return result(Axiom::C4p, worst, ok.str(), ok.str());
  }

  AxiomResult c5p() const {
    if (b == Backend::Rel) {
      Process w = rel_c5_witness();
      // Normalized on every total relation A -> B ...
      bool normalizes = true;
      for (unsigned code = 1; code < 16; ++code) {
        std::vector<Complex> d(4);
        for (int bit = 0; bit < 4; ++bit) d[static_cast<std::size_t>(bit)] = (code >> bit) & 1u ? 1.0 : 0.0;
        Process f(Backend::Rel, {{"B", 2}}, {{"A", 2}}, d);
        if (!is_causal(f).verdict) continue;
        std::vector<Link> links{{WireRef{"A", Role::Out}, WireRef{"A", Role::In}},
                                {WireRef{"B", Role::In}, WireRef{"B", Role::Out}}};
        if (plug(w, f, links).scalar_value() != Complex{1.0}) normalizes = false;
      }
      // ... yet not of the form rho (x) discard.
      const std::string in_label = "B";
      double split = marginal_residual(w, std::span(&in_label, 1));
      AxiomResult r;
      r.axiom = Axiom::C5p;
      r.backend = b;
      r.residual = split;
      r.verdict = normalizes && split > 0.0 ? AxiomVerdict::Refuted : AxiomVerdict::Holds;
      r.witness = normalizes && split > 0.0
                      ? "w(i,j) = not(i and j) normalizes every causal relation but does not split"
                      : "the not(i and j) witness failed";
      return r;
    }
    double worst = 0.0;
    std::string shape;
    for (int da = 1; da <= cfg.max_dim(b); ++da)
      for (int db = 1; db <= cfg.max_dim(b); ++db) {
        SplitSolve s = solve_second_order_effects(b, {"A", da}, {"B", db});
        worst = std::max({worst, s.split_residual, s.solve_residual});
        std::size_t expect_null = wire_extent(b, da) - 1;
        if (s.nullity != expect_null) {
          worst = std::max(worst, 1.0);
          shape = "solution space of dimension " + std::to_string(s.nullity) + " for |A|=" + std::to_string(da);
        }
      }
    return result(Axiom::C5p, worst, "every normalizing w splits as rho (x) discard",
                  shape.empty() ? "a normalizing w does not split" : shape);
  }
};

}  // namespace

AxiomResult run_axiom(Axiom axiom, Backend backend, const AxiomConfig& config) {
  Runner r{backend, config, config.seed + static_cast<std::uint64_t>(backend) * 1000003u};
  switch (axiom) {
    case Axiom::C1: return r.c1();
    case Axiom::C2: return r.c2();
    case Axiom::C3: return r.c3();
    case Axiom::C4p: return r.c4p();
    case Axiom::C5p: return r.c5p();
  }
  return {};
}

std::vector<AxiomResult> run_all(Backend backend, const AxiomConfig& config) {
  std::vector<AxiomResult> out;
  for (Axiom a : {Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C4p, Axiom::C5p}) out.push_back(run_axiom(a, backend, config));
  return out;
}

}  // namespace causkit
