#include "causkit/mll.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

#include "causkit/error.hpp"
#include "causkit/types.hpp"

namespace causkit {

namespace {

Formula leaf(FormulaKind k, std::string name = {}) { return Formula{k, std::move(name), {}}; }
Formula binary(FormulaKind k, Formula a, Formula b) { return Formula{k, {}, {std::move(a), std::move(b)}}; }

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Ax: return "Ax";
    case Rule::One: return "One";
    case Rule::Bot: return "Bot";
    case Rule::Par: return "Par";
    case Rule::Tensor: return "Tensor";
    case Rule::Mix: return "Mix";
    case Rule::Mix0: return "Mix0";
  }
  return "?";
}

void print_into(const Formula& f, std::string& out) {
  switch (f.kind) {
    case FormulaKind::Atom: out += f.name; break;
    case FormulaKind::NegAtom: out += "~" + f.name; break;
    case FormulaKind::One: out += "1"; break;
    case FormulaKind::Bot: out += "bot"; break;
    case FormulaKind::Tensor:
    case FormulaKind::Par:
      out += "(";
      print_into(f.kids[0], out);
      out += f.kind == FormulaKind::Tensor ? " (x) " : " (+) ";
      print_into(f.kids[1], out);
      out += ")";
      break;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string s;
  print_into(f, s);
  return s;
}

std::string print_sequent(const Sequent& s) {
  std::string out = "|-";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? ", " : " ") + print_formula(s[k]);
  return out;
}

Formula negate(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom: return leaf(FormulaKind::NegAtom, f.name);
    case FormulaKind::NegAtom: return leaf(FormulaKind::Atom, f.name);
    case FormulaKind::One: return leaf(FormulaKind::Bot);
    case FormulaKind::Bot: return leaf(FormulaKind::One);
    case FormulaKind::Tensor: return binary(FormulaKind::Par, negate(f.kids[0]), negate(f.kids[1]));
    case FormulaKind::Par: return binary(FormulaKind::Tensor, negate(f.kids[0]), negate(f.kids[1]));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Desugaring from the type grammar

namespace {

std::optional<Formula> desugar(const CausalType& t, bool neg);

std::optional<Formula> fold(FormulaKind k, const std::vector<CausalType>& kids, bool neg) {
  std::optional<Formula> acc;
  for (const auto& c : kids) {
    auto f = desugar(c, neg);
    if (!f) continue;
    acc = acc ? binary(k, std::move(*acc), std::move(*f)) : std::move(*f);
  }
  return acc;
}

// nullopt stands for a unit, which vanishes inside (x) and (+).
std::optional<Formula> desugar(const CausalType& t, bool neg) {
  switch (t.kind) {
    case TypeKind::Atom:
      return leaf(neg ? FormulaKind::NegAtom : FormulaKind::Atom, t.name);
    case TypeKind::Unit:
      return std::nullopt;
    case TypeKind::Dual:
      return desugar(t.kids[0], !neg);
    case TypeKind::Tensor:
      return fold(neg ? FormulaKind::Par : FormulaKind::Tensor, t.kids, neg);
    case TypeKind::Par:
      return fold(neg ? FormulaKind::Tensor : FormulaKind::Par, t.kids, neg);
    case TypeKind::Lolli: {
      auto a = desugar(t.kids[0], !neg);
      auto b = desugar(t.kids[1], neg);
      if (!a) return b;
      if (!b) return a;
      return binary(neg ? FormulaKind::Tensor : FormulaKind::Par, std::move(*a), std::move(*b));
    }
    case TypeKind::Cap:
      throw CausError(ErrorKind::UnsupportedConnective, "intersection is outside MLL");
  }
  return std::nullopt;
}

std::vector<std::string> split_top(const std::string& s, std::size_t offset,
                                   std::vector<std::size_t>& starts) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      parts.push_back(s.substr(begin, i - begin));
      starts.push_back(offset + begin);
      begin = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return parts;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

void add_side(const std::string& side, std::size_t offset, bool neg, Sequent& out) {
  if (blank(side)) return;
  std::vector<std::size_t> starts;
  auto parts = split_top(side, offset, starts);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (blank(parts[k]))
      throw CausError(ErrorKind::SyntaxError, "at position " + std::to_string(starts[k]) + ": empty formula");
    CausalType t;
    try {
      t = parse_type(parts[k]);
    } catch (const CausError& e) {
      if (e.kind() != ErrorKind::SyntaxError) throw;
      throw CausError(ErrorKind::SyntaxError,
                      std::string(e.what()).substr(13) + " (formula starting at " + std::to_string(starts[k]) + ")");
    }
    auto f = desugar(t, neg);
    out.push_back(f ? std::move(*f) : leaf(neg ? FormulaKind::Bot : FormulaKind::One));
  }
}

}  // namespace

Sequent parse_sequent(const std::string& text) {
  auto at = text.find("|-");
  if (at == std::string::npos) throw CausError(ErrorKind::SyntaxError, "at position 0: missing '|-'");
  if (text.find("|-", at + 2) != std::string::npos)
    throw CausError(ErrorKind::SyntaxError, "at position " + std::to_string(text.find("|-", at + 2)) + ": second '|-'");
  Sequent s;
  add_side(text.substr(0, at), 0, true, s);
  add_side(text.substr(at + 2), at + 2, false, s);
  return s;
}

// ---------------------------------------------------------------------------
// Search

namespace {

using Keyed = std::vector<std::pair<std::string, Formula>>;

Keyed keyed(const Sequent& s) {
  Keyed k;
  for (const auto& f : s) k.emplace_back(print_formula(f), f);
  std::sort(k.begin(), k.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return k;
}

std::string key_of(const Keyed& k) {
  std::string s;
  for (const auto& [p, f] : k) s += p + ";";
  return s;
}

void count_atoms(const Formula& f, std::map<std::string, int>& bal) {
  if (f.kind == FormulaKind::Atom) ++bal[f.name];
  else if (f.kind == FormulaKind::NegAtom) --bal[f.name];
  for (const auto& k : f.kids) count_atoms(k, bal);
}

bool balanced(const Sequent& s) {
  std::map<std::string, int> bal;
  for (const auto& f : s) count_atoms(f, bal);
  return std::all_of(bal.begin(), bal.end(), [](const auto& kv) { return kv.second == 0; });
}

class Search {
 public:
  explicit Search(std::size_t budget) : budget_(budget) {}

  std::optional<Proof> run(const Sequent& s) {
    if (++explored_ > budget_)
      throw CausError(ErrorKind::BudgetExceeded, "explored " + std::to_string(explored_ - 1) + " nodes");
    Keyed k = keyed(s);
    std::string key = key_of(k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Sequent sorted;
    for (auto& [p, f] : k) sorted.push_back(f);
    auto result = solve(sorted);
    memo_.emplace(key, result);
    return result;
  }

  std::size_t explored() const { return explored_; }

 private:
  std::optional<Proof> solve(const Sequent& s) {
    // Par and Bot are invertible: apply them first.
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].kind != FormulaKind::Par && s[i].kind != FormulaKind::Bot) continue;
      Sequent prem;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i) prem.push_back(s[j]);
      Rule r = Rule::Bot;
      if (s[i].kind == FormulaKind::Par) {
        prem.push_back(s[i].kids[0]);
        prem.push_back(s[i].kids[1]);
        r = Rule::Par;
      }
      auto sub = run(prem);
      if (!sub) return std::nullopt;
      return Proof{r, s, {std::move(*sub)}};
    }
    if (!balanced(s)) return std::nullopt;
    if (s.empty()) return Proof{Rule::Mix0, s, {}};
    if (s.size() == 1 && s[0].kind == FormulaKind::One) return Proof{Rule::One, s, {}};
    if (s.size() == 2 && s[0].kind != FormulaKind::Tensor && s[1] == negate(s[0]) &&
        (s[0].kind == FormulaKind::Atom || s[0].kind == FormulaKind::NegAtom))
      return Proof{Rule::Ax, s, {}};

    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i].kind != FormulaKind::Tensor) continue;
      if (i > 0 && s[i] == s[i - 1]) continue;  // same formula, same splits
      std::vector<Formula> ctx;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) ctx.push_back(s[j]);
      const std::size_t m = ctx.size();
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        if (!skip_duplicate(ctx, mask)) continue;
        Sequent left, right;
        for (std::size_t j = 0; j < m; ++j) ((mask >> j) & 1 ? left : right).push_back(ctx[j]);
        left.push_back(s[i].kids[0]);
        right.push_back(s[i].kids[1]);
        if (!balanced(left) || !balanced(right)) continue;
        auto a = run(left);
        if (!a) continue;
        auto b = run(right);
        if (!b) continue;
        return Proof{Rule::Tensor, s, {std::move(*a), std::move(*b)}};
      }
    }
    // Mix: s[0] always goes left so each split is tried once.
    for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << (n - 1)); ++mask) {
      if (!skip_duplicate_tail(s, mask)) continue;
      Sequent left{s[0]}, right;
      for (std::size_t j = 1; j < n; ++j) ((mask >> (j - 1)) & 1 ? left : right).push_back(s[j]);
      if (right.empty() || !balanced(left) || !balanced(right)) continue;
      auto a = run(left);
      if (!a) continue;
      auto b = run(right);
      if (!b) continue;
      return Proof{Rule::Mix, s, {std::move(*a), std::move(*b)}};
    }
    return std::nullopt;
  }

  // Among equal adjacent formulas only splits taking a prefix to the left
  // are kept (ctx is sorted).
  static bool skip_duplicate(const std::vector<Formula>& ctx, std::uint64_t mask) {
    for (std::size_t j = 1; j < ctx.size(); ++j)
      if (ctx[j] == ctx[j - 1] && ((mask >> j) & 1) && !((mask >> (j - 1)) & 1)) return false;
    return true;
  }

  static bool skip_duplicate_tail(const Sequent& s, std::uint64_t mask) {
    for (std::size_t j = 2; j < s.size(); ++j)
      if (s[j] == s[j - 1] && ((mask >> (j - 1)) & 1) && !((mask >> (j - 2)) & 1)) return false;
    return true;
  }

  std::size_t budget_;
  std::size_t explored_ = 0;
  std::unordered_map<std::string, std::optional<Proof>> memo_;
};

bool same_multiset(Sequent a, Sequent b) {
  if (a.size() != b.size()) return false;
  auto ka = keyed(a), kb = keyed(b);
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (ka[i].first != kb[i].first) return false;
  return true;
}

Sequent concat(const Sequent& a, const Sequent& b) {
  Sequent s = a;
  s.insert(s.end(), b.begin(), b.end());
  return s;
}

}  // namespace

ProveResult prove(const Sequent& s, std::size_t budget) {
  Search search(budget);
  auto proof = search.run(s);
  return ProveResult{std::move(proof), search.explored()};
}

bool verify_proof(const Proof& p) {
  const auto& c = p.conclusion;
  const auto& ps = p.premises;
  for (const auto& q : ps)
    if (!verify_proof(q)) return false;
  switch (p.rule) {
    case Rule::Ax:
      return ps.empty() && c.size() == 2 &&
             (c[0].kind == FormulaKind::Atom || c[0].kind == FormulaKind::NegAtom) && c[1] == negate(c[0]);
    case Rule::One:
      return ps.empty() && c.size() == 1 && c[0].kind == FormulaKind::One;
    case Rule::Mix0:
      return ps.empty() && c.empty();
    case Rule::Mix:
      return ps.size() == 2 && same_multiset(c, concat(ps[0].conclusion, ps[1].conclusion));
    case Rule::Bot:
    case Rule::Par: {
      if (ps.size() != 1) return false;
      const auto kind = p.rule == Rule::Bot ? FormulaKind::Bot : FormulaKind::Par;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].kind != kind) continue;
        Sequent rest;
        for (std::size_t j = 0; j < c.size(); ++j)
          if (j != i) rest.push_back(c[j]);
        if (kind == FormulaKind::Par) {
          rest.push_back(c[i].kids[0]);
          rest.push_back(c[i].kids[1]);
        }
        if (same_multiset(rest, ps[0].conclusion)) return true;
      }
      return false;
    }
    case Rule::Tensor: {
      if (ps.size() != 2 || ps[0].conclusion.empty() || ps[1].conclusion.empty()) return false;
      // The principal formula is built from one formula of each premise.
      for (std::size_t a = 0; a < ps[0].conclusion.size(); ++a)
        for (std::size_t b = 0; b < ps[1].conclusion.size(); ++b) {
          Sequent expect;
          for (std::size_t j = 0; j < ps[0].conclusion.size(); ++j)
            if (j != a) expect.push_back(ps[0].conclusion[j]);
          for (std::size_t j = 0; j < ps[1].conclusion.size(); ++j)
            if (j != b) expect.push_back(ps[1].conclusion[j]);
          expect.push_back(binary(FormulaKind::Tensor, ps[0].conclusion[a], ps[1].conclusion[b]));
          if (same_multiset(expect, c)) return true;
        }
      return false;
    }
  }
  return false;
}

std::size_t proof_size(const Proof& p) {
  std::size_t n = 1;
  for (const auto& q : p.premises) n += proof_size(q);
  return n;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_into(const Proof& p, int depth, std::string& out) {
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
  out += rule_name(p.rule);
  out += " ";
  out += print_sequent(p.conclusion);
  out += "\n";
  for (const auto& q : p.premises) render_into(q, depth + 1, out);
}

class FormulaReader {
 public:
  FormulaReader(const std::string& s, std::size_t line) : s_(s), line_(line) {}

  Sequent sequent() {
    Sequent out;
    skip();
    if (at_ == s_.size()) return out;
    for (;;) {
      out.push_back(formula());
      skip();
      if (at_ == s_.size()) return out;
      expect(',');
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw CausError(ErrorKind::SyntaxError,
                    "proof line " + std::to_string(line_) + " column " + std::to_string(at_) + ": " + msg);
  }
  void skip() {
    while (at_ < s_.size() && s_[at_] == ' ') ++at_;
  }
  void expect(char c) {
    skip();
    if (at_ >= s_.size() || s_[at_] != c) fail(std::string("expected '") + c + "'");
    ++at_;
  }
  std::string ident() {
    std::size_t b = at_;
    while (at_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[at_])) || s_[at_] == '_' || s_[at_] == '\''))
      ++at_;
    if (b == at_) fail("expected a name");
    return s_.substr(b, at_ - b);
  }
  Formula formula() {
    skip();
    if (at_ >= s_.size()) fail("unexpected end of line");
    if (s_[at_] == '~') {
      ++at_;
      return leaf(FormulaKind::NegAtom, ident());
    }
    if (s_[at_] == '1') {
      ++at_;
      return leaf(FormulaKind::One);
    }
    if (s_[at_] == '(') {
      ++at_;
      Formula a = formula();
      skip();
      FormulaKind k;
      if (s_.compare(at_, 3, "(x)") == 0) k = FormulaKind::Tensor;
      else if (s_.compare(at_, 3, "(+)") == 0) k = FormulaKind::Par;
      else fail("expected '(x)' or '(+)'");
      at_ += 3;
      Formula b = formula();
      expect(')');
      return binary(k, std::move(a), std::move(b));
    }
    std::string name = ident();
    if (name == "bot") return leaf(FormulaKind::Bot);
    return leaf(FormulaKind::Atom, name);
  }

  const std::string& s_;
  std::size_t line_;
  std::size_t at_ = 0;
};

}  // namespace

std::string render_proof(const Proof& p) {
  std::string out;
  render_into(p, 0, out);
  return out;
}

Proof parse_proof(const std::string& text) {
  struct Line {
    int depth;
    Proof node;
  };
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (raw.find_first_not_of(' ') == std::string::npos) continue;
    std::size_t indent = raw.find_first_not_of(' ');
    if (indent % 2) throw CausError(ErrorKind::SyntaxError, "proof line " + std::to_string(no) + ": odd indent");
    std::size_t sp = raw.find(' ', indent);
    std::string rule = raw.substr(indent, sp == std::string::npos ? std::string::npos : sp - indent);
    Proof node;
    static const std::map<std::string, Rule> rules{{"Ax", Rule::Ax},   {"One", Rule::One},       {"Bot", Rule::Bot},
                                                    {"Par", Rule::Par}, {"Tensor", Rule::Tensor}, {"Mix", Rule::Mix},
                                                    {"Mix0", Rule::Mix0}};
    auto r = rules.find(rule);
    if (r == rules.end()) throw CausError(ErrorKind::SyntaxError, "proof line " + std::to_string(no) + ": unknown rule '" + rule + "'");
    node.rule = r->second;
    std::size_t turn = raw.find("|-", indent);
    if (turn == std::string::npos) throw CausError(ErrorKind::SyntaxError, "proof line " + std::to_string(no) + ": missing '|-'");
    std::string rest = raw.substr(turn + 2);
    node.conclusion = FormulaReader(rest, no).sequent();
    lines.push_back({static_cast<int>(indent / 2), std::move(node)});
  }
  if (lines.empty()) throw CausError(ErrorKind::SyntaxError, "empty proof");

  std::size_t at = 0;
  auto build = [&](auto&& self, int depth) -> Proof {
    if (at >= lines.size() || lines[at].depth != depth)
      throw CausError(ErrorKind::SyntaxError, "proof indentation is inconsistent");
    Proof p = std::move(lines[at].node);
    ++at;
    while (at < lines.size() && lines[at].depth == depth + 1) p.premises.push_back(self(self, depth + 1));
    return p;
  };
  Proof root = build(build, 0);
  if (at != lines.size()) throw CausError(ErrorKind::SyntaxError, "trailing proof lines");
  return root;
}

}  // namespace causkit
