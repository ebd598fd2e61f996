#include "causkit/backend.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "causkit/error.hpp"
#include "tensor_kernel.hpp"

namespace causkit {

void merge_into(CheckReport& acc, const CheckReport& next) {
  if (!next.verdict && acc.verdict) acc.witness = next.witness;
  acc.verdict = acc.verdict && next.verdict;
  acc.residual = std::max(acc.residual, next.residual);
  acc.tolerance = std::max(acc.tolerance, next.tolerance);
}

BackendProfile profile(Backend b) {
  switch (b) {
    case Backend::MatR: return {b, true, ScalarKind::NonnegReal};
    case Backend::Cpm: return {b, false, ScalarKind::NonnegReal};
    case Backend::Rel: return {b, true, ScalarKind::Boolean};
  }
  return {b, false, ScalarKind::NonnegReal};
}

Process discard(Backend b, const System& s) {
  auto d = static_cast<std::size_t>(s.dim);
  std::vector<Complex> v;
  if (b == Backend::Cpm) {
    v.assign(d * d, Complex{});
    for (std::size_t r = 0; r < d; ++r) v[r * d + r] = 1.0;
  } else {
    v.assign(d, Complex{1.0});
  }
  return Process(b, {}, {s}, std::move(v));
}

Process discard(Backend b, std::span<const System> systems) {
  Process acc = Process::scalar(b, 1.0);
  for (const auto& s : systems) acc = tensor_par(acc, discard(b, s));
  return acc;
}

namespace {

double tol_for(Backend b, Tolerance tol) { return b == Backend::Rel ? 0.0 : tol.eps; }

std::string index_string(std::size_t flat, const std::vector<System>& wires, Backend b) {
  std::vector<std::size_t> ext;
  for (const auto& w : wires) ext.push_back(wire_extent(b, w.dim));
  std::vector<std::size_t> idx(ext.size(), 0);
  for (std::size_t k = ext.size(); k-- > 0;) {
    idx[k] = flat % ext[k];
    flat /= ext[k];
  }
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < wires.size(); ++k) {
    if (k) os << ",";
    os << wires[k].label << "=" << idx[k];
  }
  os << ")";
  return os.str();
}

}  // namespace

CheckReport is_causal(const Process& f, Tolerance tol) {
  Process lhs = discard_all_outputs(f);
  Process rhs = discard(f.backend(), std::span<const System>(f.ins()));
  Process aligned = align_to(lhs, rhs);
  double worst = 0.0;
  std::size_t worst_at = 0;
  for (std::size_t k = 0; k < rhs.data().size(); ++k) {
    double d = std::abs(aligned.data()[k] - rhs.data()[k]);
    if (d > worst) {
      worst = d;
      worst_at = k;
    }
  }
  CheckReport rep;
  rep.residual = worst;
  rep.tolerance = tol_for(f.backend(), tol);
  rep.verdict = worst <= rep.tolerance;
  if (!rep.verdict) {
    rep.witness = f.ins().empty()
                      ? std::string("discarded scalar differs from 1")
                      : "worst input block " + index_string(worst_at, f.ins(), f.backend());
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct ChoiIndex {
  std::vector<std::size_t> row_off;  // packed offset contribution of the row flat
  std::vector<std::size_t> col_off;
};

ChoiIndex choi_index(const std::vector<System>& wires) {
  // Wires in storage order; packed axis extent d*d with index r*d + c.
  std::vector<std::size_t> ext;
  for (const auto& w : wires) {
    auto d = static_cast<std::size_t>(w.dim);
    ext.push_back(d * d);
  }
  auto stride = detail::strides_of(ext);
  ChoiIndex ix{{0}, {0}};
  for (std::size_t k = 0; k < wires.size(); ++k) {
    auto d = static_cast<std::size_t>(wires[k].dim);
    std::vector<std::size_t> nr, nc;
    for (auto base : ix.row_off)
      for (std::size_t r = 0; r < d; ++r) nr.push_back(base + r * d * stride[k]);
    for (auto base : ix.col_off)
      for (std::size_t c = 0; c < d; ++c) nc.push_back(base + c * stride[k]);
    ix.row_off = std::move(nr);
    ix.col_off = std::move(nc);
  }
  return ix;
}

std::vector<System> all_wires(const Process& f) {
  std::vector<System> w = f.outs();
  w.insert(w.end(), f.ins().begin(), f.ins().end());
  return w;
}

}  // namespace

Eigen::MatrixXcd choi_matrix(const Process& f) {
  if (f.backend() != Backend::Cpm)
    throw CausError(ErrorKind::UnsupportedBackend, "Choi matrices exist for cpm only");
  auto ix = choi_index(all_wires(f));
  auto n = static_cast<Eigen::Index>(ix.row_off.size());
  Eigen::MatrixXcd J(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      J(r, c) = f.data()[ix.row_off[static_cast<std::size_t>(r)] +
                         ix.col_off[static_cast<std::size_t>(c)]];
  return J;
}

Process from_choi(std::vector<System> outs, std::vector<System> ins,
                  const Eigen::MatrixXcd& choi) {
  std::vector<System> wires = outs;
  wires.insert(wires.end(), ins.begin(), ins.end());
  auto ix = choi_index(wires);
  auto n = ix.row_off.size();
  if (static_cast<std::size_t>(choi.rows()) != n || static_cast<std::size_t>(choi.cols()) != n)
    throw CausError(ErrorKind::ShapeMismatch, "Choi matrix size does not match wires");
  std::vector<Complex> data(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      data[ix.row_off[r] + ix.col_off[c]] =
          choi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return Process(Backend::Cpm, std::move(outs), std::move(ins), std::move(data));
}

CheckReport is_positive(const Process& f, Tolerance tol) {
  CheckReport rep;
  rep.tolerance = tol_for(f.backend(), tol);
  switch (f.backend()) {
    case Backend::Rel:
      return rep;
    case Backend::MatR: {
      double worst = 0.0;
      for (const auto& x : f.data()) worst = std::max({worst, -x.real(), std::abs(x.imag())});
      rep.residual = worst;
      rep.verdict = worst <= rep.tolerance;
      if (!rep.verdict) rep.witness = "negative or complex entry";
      return rep;
    }
    case Backend::Cpm: {
      Eigen::MatrixXcd J = choi_matrix(f);
      double herm = (J - J.adjoint()).cwiseAbs().maxCoeff();
      Eigen::MatrixXcd H = 0.5 * (J + J.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();
      double norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
      rep.tolerance = tol.eps * std::max(1.0, norm);
      rep.residual = std::max(herm, std::max(0.0, -ev.minCoeff()));
      rep.verdict = rep.residual <= rep.tolerance;
      if (!rep.verdict) {
        std::ostringstream os;
        os << (herm > rep.tolerance ? "Choi not Hermitian" : "Choi eigenvalue ")
           << ev.minCoeff();
        rep.witness = os.str();
      }
      return rep;
    }
  }
  return rep;
}

std::vector<Process> causal_basis(Backend b, const System& s) {
  auto d = static_cast<std::size_t>(s.dim);
  std::vector<Process> basis;
  if (b != Backend::Cpm) {
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<Complex> v(d, Complex{});
      v[k] = 1.0;
      basis.emplace_back(b, std::vector<System>{s}, std::vector<System>{}, std::move(v));
    }
    return basis;
  }
  auto density = [&](const Eigen::VectorXcd& psi) {
    Eigen::MatrixXcd rho = psi * psi.adjoint();
    return from_choi({s}, {}, rho);
  };
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1.0;
    basis.push_back(density(e));
  }
  const double h = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(n), plus_i = Eigen::VectorXcd::Zero(n);
      plus(j) = h;
      plus(k) = h;
      plus_i(j) = h;
      plus_i(k) = Complex{0.0, h};
      basis.push_back(density(plus));
      basis.push_back(density(plus_i));
    }
  }
  return basis;
}

Process random_causal(Backend b, std::vector<System> ins, std::vector<System> outs,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t din = 1, dout = 1;
  for (const auto& w : ins) din *= static_cast<std::size_t>(w.dim);
  for (const auto& w : outs) dout *= static_cast<std::size_t>(w.dim);

  if (b == Backend::MatR) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // data layout [out flat][in flat]
    std::vector<Complex> data(dout * din);
    for (std::size_t i = 0; i < din; ++i) {
      double sum = 0.0;
      std::vector<double> col(dout);
      for (auto& x : col) {
        x = u(rng);
        x = x * x * x;  // skew towards sparse-looking columns
        sum += x;
      }
      for (std::size_t o = 0; o < dout; ++o) data[o * din + i] = col[o] / sum;
    }
    return Process(b, std::move(outs), std::move(ins), std::move(data));
  }
  if (b == Backend::Rel) {
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> pick(0, dout - 1);
    std::vector<Complex> data(dout * din, Complex{});
    for (std::size_t i = 0; i < din; ++i) {
      bool any = false;
      for (std::size_t o = 0; o < dout; ++o)
        if (coin(rng)) {
          data[o * din + i] = 1.0;
          any = true;
        }
      if (!any) data[pick(rng) * din + i] = 1.0;
    }
    return Process(b, std::move(outs), std::move(ins), std::move(data));
  }

  // cpm: Stinespring isometry V : C^din -> C^dout (x) C^env from the QR of a
  // complex Gaussian matrix. Kraus K_e[o, i] = V[o * env + e, i].
  std::normal_distribution<double> g(0.0, 1.0);
  std::size_t env = std::max<std::size_t>(1, (din + dout - 1) / dout);
  env = std::max(env, std::uniform_int_distribution<std::size_t>(1, din * dout)(rng));
  const auto rows = static_cast<Eigen::Index>(dout * env);
  const auto cols = static_cast<Eigen::Index>(din);
  Eigen::MatrixXcd G(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) G(r, c) = Complex{g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd V = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);

  const auto n = static_cast<Eigen::Index>(dout * din);
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t e = 0; e < env; ++e) {
    Eigen::VectorXcd k(n);
    for (std::size_t o = 0; o < dout; ++o)
      for (std::size_t i = 0; i < din; ++i)
        k(static_cast<Eigen::Index>(o * din + i)) =
            V(static_cast<Eigen::Index>(o * env + e), static_cast<Eigen::Index>(i));
    J += k * k.adjoint();
  }
  return from_choi(std::move(outs), std::move(ins), J);
}

// ---------------------------------------------------------------------------

Process plug_uniform(const Process& r, std::span<const std::string> inputs) {
  Process cur = r;
  for (const auto& label : inputs) {
    auto k = cur.find_in(label);
    if (!k) throw CausError(ErrorKind::NoSuchWire, "no input '" + label + "'");
    System s = cur.ins()[*k];
    Process u = uniform_state(cur.backend(), s);
    Link link{WireRef{label, Role::In}, WireRef{s.label, Role::Out}};
    cur = plug(cur, u, std::span(&link, 1));
  }
  return cur;
}

double marginal_residual(const Process& r, std::span<const std::string> inputs) {
  if (inputs.empty()) return 0.0;
  Process reduced = plug_uniform(r, inputs);
  std::vector<System> systems;
  for (const auto& label : inputs) systems.push_back(r.system({label, Role::In}));
  Process rebuilt = tensor_par(reduced, discard(r.backend(), std::span<const System>(systems)));
  return max_abs_diff(r, rebuilt);
}

namespace {

std::vector<std::size_t> positions(const std::vector<System>& wires,
                                   const std::vector<std::string>& labels, const char* what) {
  std::vector<std::size_t> pos;
  for (const auto& l : labels) {
    auto it = std::find_if(wires.begin(), wires.end(), [&](const System& s) { return s.label == l; });
    if (it == wires.end())
      throw CausError(ErrorKind::BadPartition, std::string("event names unknown ") + what + " '" + l + "'");
    pos.push_back(static_cast<std::size_t>(it - wires.begin()));
  }
  return pos;
}

std::size_t product_dim(const std::vector<System>& wires, const std::vector<std::size_t>& pos) {
  std::size_t p = 1;
  for (auto k : pos) p *= static_cast<std::size_t>(wires[k].dim);
  return p;
}

}  // namespace

std::pair<Process, Process> factorize_one_way(const Process& phi, const Event& first,
                                              const Event& second, Tolerance tol) {
  if (!profile(phi.backend()).supports_factorization)
    throw CausError(ErrorKind::UnsupportedBackend,
                    "one-way factorization is only constructed for matr+ and rel");
  auto p_in1 = positions(phi.ins(), first.ins, "input");
  auto p_in2 = positions(phi.ins(), second.ins, "input");
  auto p_out1 = positions(phi.outs(), first.outs, "output");
  auto p_out2 = positions(phi.outs(), second.outs, "output");
  if (p_in1.size() + p_in2.size() != phi.ins().size() ||
      p_out1.size() + p_out2.size() != phi.outs().size())
    throw CausError(ErrorKind::BadPartition, "events do not cover every wire");

  if (!is_causal(phi, tol).verdict) throw CausError(ErrorKind::NotOneWay, "process is not causal");
  double marg = marginal_residual(discard_outputs(phi, second.outs), second.ins);
  if (marg > (phi.backend() == Backend::Rel ? 0.0 : tol.eps))
    throw CausError(ErrorKind::NotOneWay, "second event signals to the first");

  std::vector<std::size_t> op = p_out1, ip = p_in1;
  op.insert(op.end(), p_out2.begin(), p_out2.end());
  ip.insert(ip.end(), p_in2.begin(), p_in2.end());
  Process t = permute(phi, ip, op);

  const std::size_t K = product_dim(phi.outs(), p_out1), L = product_dim(phi.outs(), p_out2);
  const std::size_t I = product_dim(phi.ins(), p_in1), J = product_dim(phi.ins(), p_in2);
  const std::size_t M = I * K;
  auto T = [&](std::size_t k, std::size_t l, std::size_t i, std::size_t j) {
    return t.data()[((k * L + l) * I + i) * J + j].real();
  };
  std::vector<double> marginal(K * I, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < I; ++i) {
      double s = 0.0;
      for (std::size_t l = 0; l < L; ++l) s += T(k, l, i, 0);
      marginal[k * I + i] = phi.backend() == Backend::Rel ? (s > 0.0 ? 1.0 : 0.0) : s;
    }

  std::vector<System> outs1, ins1, outs2, ins2;
  for (auto k : p_out1) outs1.push_back(phi.outs()[k]);
  outs1.push_back(System{kMemoryLabel, static_cast<int>(M)});
  for (auto k : p_in1) ins1.push_back(phi.ins()[k]);
  for (auto k : p_out2) outs2.push_back(phi.outs()[k]);
  ins2.push_back(System{kMemoryLabel, static_cast<int>(M)});
  for (auto k : p_in2) ins2.push_back(phi.ins()[k]);

  std::vector<Complex> d1(K * M * I, Complex{});
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < I; ++i) d1[(k * M + (i * K + k)) * I + i] = marginal[k * I + i];

  std::vector<Complex> d2(L * M * J, Complex{});
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      std::size_t m = i * K + k;
      double p = marginal[k * I + i];
      for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t l = 0; l < L; ++l) {
          double v;
          if (p == 0.0)
            v = (l == 0) ? 1.0 : 0.0;
          else if (phi.backend() == Backend::Rel)
            v = T(k, l, i, j);
          else
            v = T(k, l, i, j) / p;
          d2[(l * M + m) * J + j] = v;
        }
      }
    }
  return {Process(phi.backend(), std::move(outs1), std::move(ins1), std::move(d1)),
          Process(phi.backend(), std::move(outs2), std::move(ins2), std::move(d2))};
}

Process recompose_one_way(const Process& phi1, const Process& phi2) {
  Link link{WireRef{kMemoryLabel, Role::Out}, WireRef{kMemoryLabel, Role::In}};
  return plug(phi1, phi2, std::span(&link, 1));
}

// ---------------------------------------------------------------------------
// Spanning families of causal channels

namespace {

std::size_t product(const std::vector<System>& s) {
  std::size_t p = 1;
  for (const auto& x : s) p *= static_cast<std::size_t>(x.dim);
  return p;
}

}  // namespace

std::size_t spanning_family_size(Backend b, std::size_t din, std::size_t dout) {
  if (b == Backend::Cpm) return din * din * (dout * dout - 1) + 1;
  std::size_t n = 1;
  for (std::size_t k = 0; k < din; ++k) {
    if (n > (std::size_t{1} << 40) / std::max<std::size_t>(dout, 1)) return std::size_t{1} << 40;
    n *= dout;
  }
  return n;
}

namespace {

// Hermitian basis of d x d matrices; the first d - 1 entries after the
// off-diagonals are traceless diagonals when `traceless`.
std::vector<Eigen::MatrixXcd> hermitian_basis(std::size_t d, bool traceless) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Eigen::MatrixXcd> out;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(n, n), im = Eigen::MatrixXcd::Zero(n, n);
      re(j, k) = re(k, j) = 1.0;
      im(j, k) = Complex{0.0, -1.0};
      im(k, j) = Complex{0.0, 1.0};
      out.push_back(re);
      out.push_back(im);
    }
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    if (traceless) {
      if (j + 1 == n) break;
      e(j, j) = 1.0;
      e(j + 1, j + 1) = -1.0;
    } else {
      e(j, j) = 1.0;
    }
    out.push_back(e);
  }
  return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

std::vector<Process> spanning_channels(Backend b, const std::vector<System>& ins,
                                       const std::vector<System>& outs) {
  const std::size_t din = product(ins), dout = product(outs);
  std::vector<Process> fam;
  if (b != Backend::Cpm) {
    const std::size_t count = spanning_family_size(b, din, dout);
    for (std::size_t f = 0; f < count; ++f) {
      std::vector<Complex> data(dout * din, Complex{});
      std::size_t code = f;
      for (std::size_t i = 0; i < din; ++i) {
        data[(code % dout) * din + i] = 1.0;
        code /= dout;
      }
      fam.emplace_back(b, outs, ins, std::move(data));
    }
    return fam;
  }
  const auto n = static_cast<Eigen::Index>(din * dout);
  Eigen::MatrixXcd anchor = Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(dout);
  fam.push_back(from_choi(outs, ins, anchor));
  auto xs = hermitian_basis(dout, true);
  auto ys = hermitian_basis(din, false);
  for (const auto& x : xs)
    for (const auto& y : ys) fam.push_back(from_choi(outs, ins, anchor + kron(x, y)));
  return fam;
}


}  // namespace causkit
