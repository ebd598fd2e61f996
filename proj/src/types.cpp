#include "causkit/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "causkit/error.hpp"

namespace causkit {

CausalType atom(std::string name, int dim) {
  CausalType t;
  t.kind = TypeKind::Atom;
  t.name = std::move(name);
  t.dim = dim;
  return t;
}

CausalType atom(const System& s) { return atom(s.label, s.dim); }

CausalType unit() { return CausalType{}; }

namespace {

CausalType node(TypeKind k, std::vector<CausalType> kids) {
  CausalType t;
  t.kind = k;
  t.kids = std::move(kids);
  return t;
}

}  // namespace

CausalType dual(CausalType t) { return node(TypeKind::Dual, {std::move(t)}); }
CausalType tensor(std::vector<CausalType> kids) { return node(TypeKind::Tensor, std::move(kids)); }
CausalType par(std::vector<CausalType> kids) { return node(TypeKind::Par, std::move(kids)); }
CausalType lolli(CausalType a, CausalType b) {
  return node(TypeKind::Lolli, {std::move(a), std::move(b)});
}
CausalType cap(CausalType a, CausalType b) { return node(TypeKind::Cap, {std::move(a), std::move(b)}); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, Unit, LBracket, RBracket, Int, LParen, RParen, Tensor, Par, Lolli, Cap, Star, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

[[noreturn]] void syntax(std::size_t pos, const std::string& msg) {
  throw CausError(ErrorKind::SyntaxError, "at position " + std::to_string(pos) + ": " + msg);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (s.compare(i, 3, "(x)") == 0) {
      out.push_back({Tok::Tensor, "(x)", i});
      i += 3;
    } else if (s.compare(i, 3, "(+)") == 0) {
      out.push_back({Tok::Par, "(+)", i});
      i += 3;
    } else if (s.compare(i, 2, "-o") == 0) {
      out.push_back({Tok::Lolli, "-o", i});
      i += 2;
    } else if (s.compare(i, 2, "^*") == 0) {
      out.push_back({Tok::Star, "^*", i});
      i += 2;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
    } else if (c == '[') {
      out.push_back({Tok::LBracket, "[", i++});
    } else if (c == ']') {
      out.push_back({Tok::RBracket, "]", i++});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, s.substr(i, j - i), i});
      i = j;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word = s.substr(i, j - i);
      Tok k = word == "I" ? Tok::Unit : word == "cap" ? Tok::Cap : Tok::Ident;
      out.push_back({k, word, i});
      i = j;
    } else {
      syntax(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  CausalType run() {
    CausalType t = lolli_expr();
    if (peek().kind != Tok::End) syntax(peek().pos, "unexpected '" + peek().text + "'");
    return t;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++at_;
    return true;
  }

  CausalType lolli_expr() {
    CausalType lhs = cap_expr();
    if (accept(Tok::Lolli)) return lolli(std::move(lhs), lolli_expr());
    return lhs;
  }

  CausalType cap_expr() {
    CausalType t = par_expr();
    while (accept(Tok::Cap)) t = cap(std::move(t), par_expr());
    return t;
  }

  CausalType par_expr() {
    CausalType t = tensor_expr();
    while (accept(Tok::Par)) t = par({std::move(t), tensor_expr()});
    return t;
  }

  CausalType tensor_expr() {
    CausalType t = postfix();
    while (accept(Tok::Tensor)) t = tensor({std::move(t), postfix()});
    return t;
  }

  CausalType postfix() {
    CausalType t = primary();
    while (accept(Tok::Star)) t = dual(std::move(t));
    return t;
  }

  CausalType primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Unit:
        return unit();
      case Tok::Ident: {
        int dim = 0;
        if (accept(Tok::LBracket)) {
          const Token& n = next();
          if (n.kind != Tok::Int) syntax(n.pos, "expected a dimension");
          dim = std::stoi(n.text);
          if (dim < 1) syntax(n.pos, "dimension must be positive");
          if (!accept(Tok::RBracket)) syntax(peek().pos, "expected ']'");
        }
        return atom(t.text, dim);
      }
      case Tok::LParen: {
        CausalType inner = lolli_expr();
        if (!accept(Tok::RParen)) syntax(peek().pos, "expected ')'");
        return inner;
      }
      case Tok::End:
        syntax(t.pos, "unexpected end of input");
      default:
        syntax(t.pos, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

int level(const CausalType& t) {
  switch (t.kind) {
    case TypeKind::Lolli: return 0;
    case TypeKind::Cap: return 1;
    case TypeKind::Par: return t.kids.size() == 1 ? level(t.kids[0]) : 2;
    case TypeKind::Tensor: return t.kids.size() == 1 ? level(t.kids[0]) : 3;
    case TypeKind::Dual: return 4;
    default: return 5;
  }
}

void print_into(const CausalType& t, int min_level, std::string& out) {
  const bool wrap = level(t) < min_level;
  if (wrap) out += "(";
  auto infix = [&](const char* op, int first, int rest) {
    if (t.kids.empty()) {
      out += "I";
      return;
    }
    for (std::size_t k = 0; k < t.kids.size(); ++k) {
      if (k) out += op;
      print_into(t.kids[k], k == 0 ? first : rest, out);
    }
  };
  switch (t.kind) {
    case TypeKind::Atom:
      out += t.name;
      if (t.dim > 0) out += "[" + std::to_string(t.dim) + "]";
      break;
    case TypeKind::Unit:
      out += "I";
      break;
    case TypeKind::Dual:
      print_into(t.kids[0], 4, out);
      out += "^*";
      break;
    case TypeKind::Tensor:
      if (t.kids.size() == 1) print_into(t.kids[0], min_level, out);
      else infix(" (x) ", 3, 4);
      break;
    case TypeKind::Par:
      if (t.kids.size() == 1) print_into(t.kids[0], min_level, out);
      else infix(" (+) ", 2, 3);
      break;
    case TypeKind::Cap:
      infix(" cap ", 1, 2);
      break;
    case TypeKind::Lolli:
      print_into(t.kids[0], 1, out);
      out += " -o ";
      print_into(t.kids[1], 0, out);
      break;
  }
  if (wrap) out += ")";
}

}  // namespace

CausalType parse_type(const std::string& text) { return Parser(text).run(); }

std::string print_type(const CausalType& t) {
  std::string out;
  print_into(t, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

CausalType flat(TypeKind k, std::vector<CausalType> kids) {
  std::vector<CausalType> out;
  for (auto& c : kids) {
    if (c.kind == TypeKind::Unit) continue;
    if (c.kind == k) {
      for (auto& g : c.kids) out.push_back(std::move(g));
    } else {
      out.push_back(std::move(c));
    }
  }
  if (out.empty()) return unit();
  if (out.size() == 1) return std::move(out[0]);
  return node(k, std::move(out));
}

CausalType norm(const CausalType& t, bool neg) {
  switch (t.kind) {
    case TypeKind::Atom:
      return neg ? dual(t) : t;
    case TypeKind::Unit:
      return unit();
    case TypeKind::Dual:
      return norm(t.kids[0], !neg);
    case TypeKind::Tensor:
    case TypeKind::Par: {
      std::vector<CausalType> kids;
      for (const auto& c : t.kids) kids.push_back(norm(c, neg));
      bool is_tensor = (t.kind == TypeKind::Tensor) != neg;
      return flat(is_tensor ? TypeKind::Tensor : TypeKind::Par, std::move(kids));
    }
    case TypeKind::Lolli:
      // a -o b is (a (x) b^*)^*, that is a^* (+) b.
      if (neg) return flat(TypeKind::Tensor, {norm(t.kids[0], false), norm(t.kids[1], true)});
      return flat(TypeKind::Par, {norm(t.kids[0], true), norm(t.kids[1], false)});
    case TypeKind::Cap:
      if (neg)
        throw CausError(ErrorKind::UnsupportedIso, "the dual of an intersection has no normal form here");
      return node(TypeKind::Cap, {norm(t.kids[0], false), norm(t.kids[1], false)});
  }
  return t;
}

void collect(const CausalType& t, std::vector<SignedAtom>& out) {
  switch (t.kind) {
    case TypeKind::Atom:
      out.push_back({System{t.name, t.dim}, true});
      break;
    case TypeKind::Dual:
      out.push_back({System{t.kids[0].name, t.kids[0].dim}, false});
      break;
    case TypeKind::Cap:
      collect(t.kids[0], out);
      break;
    default:
      for (const auto& c : t.kids) collect(c, out);
  }
}

using AtomKey = std::tuple<std::string, int, bool>;

std::vector<AtomKey> keys(const std::vector<SignedAtom>& sig) {
  std::vector<AtomKey> k;
  for (const auto& a : sig) k.emplace_back(a.atom.label, a.atom.dim, a.positive);
  std::sort(k.begin(), k.end());
  return k;
}

void check_caps(const CausalType& t) {
  if (t.kind == TypeKind::Cap) {
    std::vector<SignedAtom> a, b;
    collect(t.kids[0], a);
    collect(t.kids[1], b);
    if (keys(a) != keys(b))
      throw CausError(ErrorKind::EmbedMismatch, "intersection operands have different ambient types");
  }
  for (const auto& c : t.kids) check_caps(c);
}

CausalType tensor_or_single(std::vector<CausalType> kids) {
  if (kids.empty()) return unit();
  if (kids.size() == 1) return std::move(kids[0]);
  return tensor(std::move(kids));
}

}  // namespace

CausalType normal_tree(const CausalType& t) { return norm(t, false); }

std::vector<SignedAtom> signature_of(const CausalType& normal) {
  std::vector<SignedAtom> sig;
  collect(normal, sig);
  return sig;
}

NormalForm normalize(const CausalType& t) {
  NormalForm nf{normal_tree(t), {}};
  nf.signature = signature_of(nf.tree);
  return nf;
}

Embedding fo_embedding(const CausalType& t) {
  NormalForm nf = normalize(t);
  check_caps(nf.tree);
  std::set<std::pair<std::string, bool>> seen;
  for (const auto& a : nf.signature)
    if (!seen.insert({a.atom.label, a.positive}).second)
      throw CausError(ErrorKind::NotFirstOrderBased,
                      "atom '" + a.atom.label + "' occurs twice with the same polarity");

  Embedding e;
  e.source = t;
  e.signature = nf.signature;
  std::vector<CausalType> negs, poss;
  for (std::size_t k = 0; k < nf.signature.size(); ++k)
    if (!nf.signature[k].positive) {
      e.perm.push_back(k);
      negs.push_back(atom(nf.signature[k].atom));
    }
  for (std::size_t k = 0; k < nf.signature.size(); ++k)
    if (nf.signature[k].positive) {
      e.perm.push_back(k);
      poss.push_back(atom(nf.signature[k].atom));
    }
  e.ambient = lolli(tensor_or_single(std::move(negs)), tensor_or_single(std::move(poss)));
  return e;
}

CausalType intersect(const CausalType& a, const CausalType& b) {
  Embedding ea = fo_embedding(a), eb = fo_embedding(b);
  if (keys(ea.signature) != keys(eb.signature))
    throw CausError(ErrorKind::EmbedMismatch,
                    print_type(ea.ambient) + " differs from " + print_type(eb.ambient));
  return cap(a, b);
}

namespace {

CausalType group(const std::vector<System>& g) {
  std::vector<CausalType> kids;
  for (const auto& s : g) kids.push_back(atom(s));
  return tensor_or_single(std::move(kids));
}

CausalType comb_range(const std::vector<std::vector<System>>& seq, std::size_t lo, std::size_t hi) {
  // seq[lo..hi) with an even number of entries
  if (hi - lo == 2) return lolli(group(seq[lo]), group(seq[lo + 1]));
  return lolli(group(seq[lo]), lolli(comb_range(seq, lo + 1, hi - 1), group(seq[hi - 1])));
}

}  // namespace

CausalType comb_type(const std::vector<std::vector<System>>& sequence) {
  if (sequence.empty()) return unit();
  if (sequence.size() % 2 != 0)
    throw CausError(ErrorKind::BadPartition, "a comb sequence needs an even number of groups");
  return comb_range(sequence, 0, sequence.size());
}

CausalType soc_type(const std::vector<std::pair<std::vector<System>, std::vector<System>>>& parties,
                    const std::vector<System>& c_in, const std::vector<System>& c_out) {
  std::vector<CausalType> arrows;
  for (const auto& [a, b] : parties) arrows.push_back(lolli(group(a), group(b)));
  CausalType lhs = tensor_or_single(std::move(arrows));
  return lolli(lhs, lolli(group(c_in), group(c_out)));
}

}  // namespace causkit
