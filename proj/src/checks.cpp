#include "causkit/checks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "causkit/backend.hpp"
#include "causkit/error.hpp"

namespace causkit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Posets

EventPoset::EventPoset(std::vector<Event> events,
                       const std::vector<std::pair<std::string, std::string>>& order)
    : events_(std::move(events)) {
  const std::size_t n = events_.size();
  std::set<std::string> names;
  for (const auto& e : events_)
    if (!names.insert(e.name).second)
      throw CausError(ErrorKind::BadPartition, "duplicate event name '" + e.name + "'");
  below_.assign(n, std::vector<bool>(n, false));
  for (const auto& [lo, hi] : order) below_[index(lo)][index(hi)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (below_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (below_[k][j]) below_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (below_[i][i]) throw CausError(ErrorKind::BadPartition, "order has a cycle through '" + events_[i].name + "'");
}

EventPoset EventPoset::chain(std::vector<Event> events) {
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t k = 1; k < events.size(); ++k) order.emplace_back(events[k - 1].name, events[k].name);
  return EventPoset(std::move(events), order);
}

std::size_t EventPoset::index(const std::string& name) const {
  for (std::size_t k = 0; k < events_.size(); ++k)
    if (events_[k].name == name) return k;
  throw CausError(ErrorKind::UnknownEvent, "no event '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> EventPoset::relation() const {
  std::vector<std::pair<std::string, std::string>> r;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (below_[i][j]) r.emplace_back(events_[i].name, events_[j].name);
  return r;
}

std::vector<std::string> past(const EventPoset& poset, const std::vector<std::string>& names) {
  std::vector<bool> in(poset.size(), false);
  for (const auto& n : names) {
    std::size_t k = poset.index(n);
    in[k] = true;
    for (std::size_t j = 0; j < poset.size(); ++j)
      if (poset.below(j, k)) in[j] = true;
  }
  std::vector<std::string> out;
  for (std::size_t k = 0; k < poset.size(); ++k)
    if (in[k]) out.push_back(poset.events()[k].name);
  return out;
}

namespace {

std::vector<std::string> wire_list(const json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) return {v.get<std::string>()};
  return v.get<std::vector<std::string>>();
}

json wire_json(const std::vector<std::string>& w) {
  if (w.empty()) return nullptr;
  if (w.size() == 1) return w[0];
  return w;
}

}  // namespace

EventPoset poset_from_json(const json& j) {
  try {
    std::vector<Event> events;
    for (const auto& e : j.at("events")) {
      Event ev;
      ev.name = e.at("name").get<std::string>();
      if (e.contains("in")) ev.ins = wire_list(e["in"]);
      if (e.contains("out")) ev.outs = wire_list(e["out"]);
      events.push_back(std::move(ev));
    }
    std::vector<std::pair<std::string, std::string>> order;
    if (j.contains("order"))
      for (const auto& p : j["order"]) order.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    return EventPoset(std::move(events), order);
  } catch (const json::exception& e) {
    throw CausError(ErrorKind::InvalidData, e.what());
  }
}

json poset_to_json(const EventPoset& p) {
  json events = json::array();
  for (const auto& e : p.events())
    events.push_back({{"name", e.name}, {"in", wire_json(e.ins)}, {"out", wire_json(e.outs)}});
  json order = json::array();
  for (const auto& [a, b] : p.relation()) order.push_back({a, b});
  return {{"events", events}, {"order", order}};
}

// ---------------------------------------------------------------------------
// Checks

namespace {

double tol_for(const Process& f, Tolerance tol) { return f.backend() == Backend::Rel ? 0.0 : tol.eps; }

std::string event_names(const std::vector<Event>& evs) {
  std::string s = "{";
  for (std::size_t k = 0; k < evs.size(); ++k) s += (k ? "," : "") + evs[k].name;
  return s + "}";
}

// Every wire of phi in exactly one event, on the right side.
void require_partition(const Process& phi, const std::vector<Event>& events) {
  std::set<std::string> ins, outs;
  for (const auto& e : events) {
    for (const auto& l : e.ins) {
      if (!phi.find_in(l)) throw CausError(ErrorKind::BadPartition, "event '" + e.name + "' names unknown input '" + l + "'");
      if (!ins.insert(l).second) throw CausError(ErrorKind::BadPartition, "input '" + l + "' used by two events");
    }
    for (const auto& l : e.outs) {
      if (!phi.find_out(l)) throw CausError(ErrorKind::BadPartition, "event '" + e.name + "' names unknown output '" + l + "'");
      if (!outs.insert(l).second) throw CausError(ErrorKind::BadPartition, "output '" + l + "' used by two events");
    }
  }
  if (ins.size() != phi.ins().size() || outs.size() != phi.outs().size())
    throw CausError(ErrorKind::BadPartition, "events do not cover every wire");
}

std::vector<std::string> all_ins(const std::vector<Event>& evs) {
  std::vector<std::string> v;
  for (const auto& e : evs) v.insert(v.end(), e.ins.begin(), e.ins.end());
  return v;
}

std::vector<std::string> all_outs(const std::vector<Event>& evs) {
  std::vector<std::string> v;
  for (const auto& e : evs) v.insert(v.end(), e.outs.begin(), e.outs.end());
  return v;
}

CheckReport independence(const Process& r, const std::vector<std::string>& inputs, Tolerance tol,
                         const std::string& witness) {
  CheckReport rep;
  rep.tolerance = tol_for(r, tol);
  rep.residual = marginal_residual(r, inputs);
  rep.verdict = rep.residual <= rep.tolerance;
  if (!rep.verdict) rep.witness = witness;
  return rep;
}

}  // namespace

CheckReport check_one_way(const Process& phi, const std::vector<Event>& first,
                          const std::vector<Event>& second, Tolerance tol) {
  std::vector<Event> all = first;
  all.insert(all.end(), second.begin(), second.end());
  require_partition(phi, all);
  CheckReport rep = is_causal(phi, tol);
  Process r = discard_outputs(phi, all_outs(second));
  merge_into(rep, independence(r, all_ins(second), tol,
                               event_names(first) + " depends on inputs of " + event_names(second)));
  return rep;
}

CheckReport check_nonsignalling(const Process& phi, const std::vector<Event>& events, Tolerance tol) {
  require_partition(phi, events);
  CheckReport rep = is_causal(phi, tol);
  for (const auto& e : events) {
    if (e.ins.empty()) continue;
    Process r = discard_outputs(phi, e.outs);
    merge_into(rep, independence(r, e.ins, tol, "event '" + e.name + "' signals to the others"));
  }
  return rep;
}

CheckReport check_comb(const Process& phi, const std::vector<Event>& order, Tolerance tol) {
  require_partition(phi, order);
  CheckReport rep;
  rep.tolerance = tol_for(phi, tol);
  Process cur = phi;
  for (std::size_t k = order.size(); k-- > 1;) {
    const Event& last = order[k];
    Process r = discard_outputs(cur, last.outs);
    merge_into(rep, independence(r, last.ins, tol,
                                 "earlier events depend on the input of '" + last.name + "'"));
    cur = plug_uniform(r, last.ins);
  }
  CheckReport base = is_causal(cur, tol);
  if (!base.verdict && !order.empty()) base.witness = "first event '" + order[0].name + "' is not causal";
  merge_into(rep, base);
  return rep;
}

CheckReport check_order_consistency(const Process& phi, const EventPoset& poset, Tolerance tol) {
  const std::size_t n = poset.size();
  if (n > 12) throw CausError(ErrorKind::TooManyEvents, std::to_string(n) + " events (limit 12)");
  require_partition(phi, poset.events());
  CheckReport rep = is_causal(phi, tol);
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if (mask & (1u << i))
        for (std::size_t j = 0; j < n; ++j)
          if (poset.below(j, i) && !(mask & (1u << j))) {
            closed = false;
            break;
          }
    if (!closed) continue;
    std::vector<Event> in_e, out_e;
    for (std::size_t i = 0; i < n; ++i) (mask & (1u << i) ? in_e : out_e).push_back(poset.events()[i]);
    Process r = discard_outputs(phi, all_outs(out_e));
    merge_into(rep, independence(r, all_ins(out_e), tol,
                                 "E=" + event_names(in_e) + " depends on inputs outside its past"));
  }
  return rep;
}

std::vector<EventPoset> totalisations(const EventPoset& poset) {
  const std::size_t n = poset.size();
  if (n > 8) throw CausError(ErrorKind::TooManyEvents, std::to_string(n) + " events (limit 8)");
  std::vector<EventPoset> out;
  std::vector<std::size_t> seq;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&]() {
    if (seq.size() == n) {
      std::vector<Event> evs;
      for (auto k : seq) evs.push_back(poset.events()[k]);
      out.push_back(EventPoset::chain(std::move(evs)));
      return;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      bool ready = true;
      for (std::size_t j = 0; j < n; ++j)
        if (poset.below(j, k) && !used[j]) ready = false;
      if (!ready) continue;
      used[k] = true;
      seq.push_back(k);
      rec();
      seq.pop_back();
      used[k] = false;
    }
  };
  rec();
  return out;
}

CheckReport check_via_totalisations(const Process& phi, const EventPoset& poset, Tolerance tol) {
  if (poset.size() > 12) throw CausError(ErrorKind::TooManyEvents, std::to_string(poset.size()) + " events (limit 12)");
  require_partition(phi, poset.events());
  CheckReport rep;
  rep.tolerance = tol_for(phi, tol);
  for (const auto& chain : totalisations(poset)) {
    CheckReport r = check_comb(phi, chain.events(), tol);
    if (!r.verdict) r.witness = "order " + event_names(chain.events()) + ": " + r.witness;
    merge_into(rep, r);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Second-order causality

namespace {

std::vector<System> systems_of(const Process& w, const std::vector<std::string>& labels, Role role) {
  std::vector<System> out;
  for (const auto& l : labels) out.push_back(w.system({l, role}));
  return out;
}

std::size_t product(const std::vector<System>& s) {
  std::size_t p = 1;
  for (const auto& x : s) p *= static_cast<std::size_t>(x.dim);
  return p;
}

}  // namespace

CheckReport check_soc(const Process& w, const std::vector<Event>& party_events, const Event& out_event,
                      Tolerance tol, std::size_t budget) {
  // Relative to w, a party's ins are outputs and its outs are inputs.
  std::vector<Event> as_w;
  for (const auto& p : party_events) as_w.push_back(Event{p.name, p.outs, p.ins});
  as_w.push_back(out_event);
  require_partition(w, as_w);

  const Backend b = w.backend();
  std::vector<std::vector<Process>> families;
  double tuples = 1.0;
  for (const auto& p : party_events) {
    auto ins = systems_of(w, p.ins, Role::Out);
    auto outs = systems_of(w, p.outs, Role::In);
    std::size_t fs = spanning_family_size(b, product(ins), product(outs));
    tuples *= static_cast<double>(fs);
    if (tuples > static_cast<double>(budget))
      throw CausError(ErrorKind::CombinatorialBlowup,
                      "spanning family tuples exceed budget " + std::to_string(budget) +
                          " (at least " + std::to_string(static_cast<unsigned long long>(tuples)) + ")");
    families.push_back(spanning_channels(b, ins, outs));
  }

  CheckReport rep;
  rep.tolerance = tol_for(w, tol);
  std::vector<std::size_t> choice;
  std::function<bool(const Process&, std::size_t)> rec = [&](const Process& cur, std::size_t i) {
    if (i == party_events.size()) {
      CheckReport r = is_causal(cur, tol);
      if (!r.verdict) {
        std::string which = "channel tuple (";
        for (std::size_t k = 0; k < choice.size(); ++k) which += (k ? "," : "") + std::to_string(choice[k]);
        r.witness = which + ") gives a non-causal " + event_names({out_event}) + " process";
      }
      merge_into(rep, r);
      return r.verdict;
    }
    const Event& p = party_events[i];
    std::vector<Link> links;
    for (const auto& l : p.ins) links.push_back({WireRef{l, Role::Out}, WireRef{l, Role::In}});
    for (const auto& l : p.outs) links.push_back({WireRef{l, Role::In}, WireRef{l, Role::Out}});
    for (std::size_t k = 0; k < families[i].size(); ++k) {
      choice.push_back(k);
      bool ok = rec(plug(cur, families[i][k], links), i + 1);
      choice.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  rec(w, 0);
  return rep;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

struct Group {
  std::vector<std::string> neg, pos;
};

std::optional<Group> as_group(const CausalType& t) {
  Group g;
  auto add = [&](const CausalType& a) {
    if (a.kind == TypeKind::Atom) {
      g.pos.push_back(a.name);
      return true;
    }
    if (a.kind == TypeKind::Dual && a.kids[0].kind == TypeKind::Atom) {
      g.neg.push_back(a.kids[0].name);
      return true;
    }
    return false;
  };
  if (t.kind == TypeKind::Unit) return g;
  if (t.kind == TypeKind::Par) {
    for (const auto& k : t.kids)
      if (!add(k)) return std::nullopt;
    return g;
  }
  if (add(t)) return g;
  return std::nullopt;
}

CausalType dual_normal(const CausalType& t) { return normal_tree(dual(t)); }

void split_par(const CausalType& t, Group& atoms, std::vector<CausalType>& higher) {
  for (const auto& k : t.kids) {
    if (auto g = as_group(k)) {
      atoms.neg.insert(atoms.neg.end(), g->neg.begin(), g->neg.end());
      atoms.pos.insert(atoms.pos.end(), g->pos.begin(), g->pos.end());
    } else {
      higher.push_back(k);
    }
  }
}

// Groups x1..x2n of a normal comb type, in the polarity of t.
std::optional<std::vector<std::vector<std::string>>> comb_sequence(const CausalType& t) {
  if (auto g = as_group(t)) return std::vector<std::vector<std::string>>{g->neg, g->pos};
  if (t.kind != TypeKind::Par) return std::nullopt;
  Group atoms;
  std::vector<CausalType> higher;
  split_par(t, atoms, higher);
  if (higher.size() != 1 || higher[0].kind != TypeKind::Tensor) return std::nullopt;
  auto inner = comb_sequence(dual_normal(higher[0]));
  if (!inner) return std::nullopt;
  std::vector<std::vector<std::string>> seq{atoms.neg};
  seq.insert(seq.end(), inner->begin(), inner->end());
  seq.push_back(atoms.pos);
  return seq;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
  return s;
}

Event make_event(std::vector<std::string> ins, std::vector<std::string> outs) {
  std::string name = join(ins) + "->" + join(outs);
  return Event{name, std::move(ins), std::move(outs)};
}

void require_wires(const Process& phi, const std::vector<SignedAtom>& sig) {
  std::set<std::string> ins, outs;
  for (const auto& a : sig) {
    Role role = a.positive ? Role::Out : Role::In;
    auto& seen = a.positive ? outs : ins;
    const char* side = a.positive ? "output" : "input";
    auto at = a.positive ? phi.find_out(a.atom.label) : phi.find_in(a.atom.label);
    if (!at) throw CausError(ErrorKind::ShapeMismatch, std::string("type names ") + side + " '" + a.atom.label + "' missing from the process");
    if (a.atom.dim > 0 && phi.system({a.atom.label, role}).dim != a.atom.dim)
      throw CausError(ErrorKind::ShapeMismatch, "dimension of '" + a.atom.label + "' differs from the type");
    if (!seen.insert(a.atom.label).second)
      throw CausError(ErrorKind::ShapeMismatch, "type uses '" + a.atom.label + "' twice");
  }
  if (ins.size() != phi.ins().size() || outs.size() != phi.outs().size())
    throw CausError(ErrorKind::ShapeMismatch, "process has wires the type does not mention");
}

CheckReport dispatch(const Process& phi, const CausalType& t, Tolerance tol) {
  if (t.kind == TypeKind::Cap) {
    CheckReport rep = dispatch(phi, t.kids[0], tol);
    merge_into(rep, dispatch(phi, t.kids[1], tol));
    return rep;
  }
  if (as_group(t)) return is_causal(phi, tol);

  if (t.kind == TypeKind::Tensor) {
    std::vector<Event> events;
    for (const auto& k : t.kids) {
      auto g = as_group(k);
      if (!g) break;
      events.push_back(make_event(g->neg, g->pos));
    }
    if (events.size() == t.kids.size()) return check_nonsignalling(phi, events, tol);
  }

  if (t.kind == TypeKind::Par || t.kind == TypeKind::Tensor) {
    // A higher-order tensor is read as a par with trivial first-order ends.
    Group atoms;
    std::vector<CausalType> higher;
    if (t.kind == TypeKind::Par) split_par(t, atoms, higher);
    else higher.push_back(t);
    if (higher.size() == 1 && higher[0].kind == TypeKind::Tensor) {
      if (auto inner = comb_sequence(dual_normal(higher[0]))) {
        std::vector<std::vector<std::string>> seq{atoms.neg};
        seq.insert(seq.end(), inner->begin(), inner->end());
        seq.push_back(atoms.pos);
        std::vector<Event> order;
        for (std::size_t k = 0; k + 1 < seq.size(); k += 2) order.push_back(make_event(seq[k], seq[k + 1]));
        return check_comb(phi, order, tol);
      }
    }
    if (higher.size() >= 2) {
      std::vector<Event> parties;
      for (const auto& h : higher) {
        auto g = h.kind == TypeKind::Tensor ? as_group(dual_normal(h)) : std::nullopt;
        if (!g) break;
        parties.push_back(make_event(g->neg, g->pos));
      }
      if (parties.size() == higher.size())
        return check_soc(phi, parties, make_event(atoms.neg, atoms.pos), tol);
    }
  }
  throw CausError(ErrorKind::UnsupportedType, "no decision procedure for " + print_type(t));
}

}  // namespace

CheckReport check_membership(const Process& phi, const CausalType& t, Tolerance tol) {
  Embedding e = fo_embedding(t);  // EmbedMismatch / NotFirstOrderBased
  require_wires(phi, e.signature);
  return dispatch(phi, normal_tree(t), tol);
}

}  // namespace causkit
