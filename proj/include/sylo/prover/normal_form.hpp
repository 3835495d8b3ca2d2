#pragma once

// Depth-one normal form for monadic sentences.
//
// Every monadic sentence is equivalent to a boolean combination of
// sentences Qx.M(x) where M is a propositional matrix over unary atoms of x.
// normalize() reaches that form by miniscoping: a quantifier body is brought
// into DNF (for exists) or CNF (for forall) and the conjuncts / disjuncts
// that do not mention the bound variable are pulled out of its scope.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/formula.hpp"

namespace sylo::prover {

/// Propositional formula over unary predicate names (the bound variable is implicit).
struct Matrix {
  enum class Op { Atom, Not, And, Or, Implies, Iff, True, False };

  Op op = Op::True;
  std::string name;
  std::vector<Matrix> kids;

  static Matrix atom(std::string n) { return Matrix{Op::Atom, std::move(n), {}}; }
  static Matrix truth(bool v) { return Matrix{v ? Op::True : Op::False, {}, {}}; }
  static Matrix negate(Matrix m) { return Matrix{Op::Not, {}, {std::move(m)}}; }
  static Matrix binary(Op op, Matrix a, Matrix b) {
    return Matrix{op, {}, {std::move(a), std::move(b)}};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  /// Truth value under an assignment of predicate names.
  template <class Pred>
  bool eval(const Pred& holds) const {
    switch (op) {
      case Op::Atom: return holds(name);
      case Op::Not: return !kids[0].eval(holds);
      case Op::And: {
        for (const auto& k : kids)
          if (!k.eval(holds)) return false;
        return true;
      }
      case Op::Or: {
        for (const auto& k : kids)
          if (k.eval(holds)) return true;
        return false;
      }
      case Op::Implies: return !kids[0].eval(holds) || kids[1].eval(holds);
      case Op::Iff: return kids[0].eval(holds) == kids[1].eval(holds);
      case Op::True: return true;
      case Op::False: return false;
    }
    return false;
  }

  void collect_atoms(std::vector<std::string>& out) const {
    if (op == Op::Atom) {
      for (const auto& o : out)
        if (o == name) return;
      out.push_back(name);
    }
    for (const auto& k : kids) k.collect_atoms(out);
  }

  std::string to_string() const {
    switch (op) {
      case Op::Atom: return name;
      case Op::Not: return "~" + wrap(kids[0]);
      case Op::True: return "T";
      case Op::False: return "F";
      default: break;
    }
    const char* sym = op == Op::And ? " & " : op == Op::Or ? " | " : op == Op::Implies ? " -> " : " <-> ";
    std::string out;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += sym;
      out += wrap(kids[i]);
    }
    return out;
  }

 private:
  static std::string wrap(const Matrix& m) {
    if (m.op == Op::Atom || m.op == Op::Not || m.op == Op::True || m.op == Op::False)
      return m.to_string();
    return "(" + m.to_string() + ")";
  }
};

/// Negation pushed to the atoms; implications and equivalences are expanded.
inline Matrix negation_normal(const Matrix& m, bool negated) {
  using Op = Matrix::Op;
  switch (m.op) {
    case Op::Atom: return negated ? Matrix::negate(m) : m;
    case Op::True:
    case Op::False: return Matrix::truth((m.op == Op::True) != negated);
    case Op::Not: return negation_normal(m.kids[0], !negated);
    case Op::And:
    case Op::Or: {
      Op out = (m.op == Op::And) != negated ? Op::And : Op::Or;
      Matrix r{out, {}, {}};
      for (const auto& k : m.kids) r.kids.push_back(negation_normal(k, negated));
      return r;
    }
    case Op::Implies: {
      if (!negated)
        return Matrix::binary(Op::Or, negation_normal(m.kids[0], true), negation_normal(m.kids[1], false));
      return Matrix::binary(Op::And, negation_normal(m.kids[0], false), negation_normal(m.kids[1], true));
    }
    case Op::Iff: {
      // a <-> b == (a & b) | (~a & ~b); its negation swaps one side.
      Matrix a = negation_normal(m.kids[0], false), na = negation_normal(m.kids[0], true);
      Matrix b = negation_normal(m.kids[1], negated), nb = negation_normal(m.kids[1], !negated);
      return Matrix::binary(Op::Or, Matrix::binary(Op::And, a, b), Matrix::binary(Op::And, na, nb));
    }
  }
  return m;
}

/// Boolean combination of depth-one quantified sentences.
struct NormalSentence {
  enum class Kind { Universal, Existential, And, Or, True, False };

  Kind kind = Kind::True;
  Matrix matrix;
  std::vector<NormalSentence> children;

  static NormalSentence universal(Matrix m) { return {Kind::Universal, std::move(m), {}}; }
  static NormalSentence existential(Matrix m) { return {Kind::Existential, std::move(m), {}}; }
  static NormalSentence truth(bool v) { return {v ? Kind::True : Kind::False, {}, {}}; }
  static NormalSentence combine(Kind k, std::vector<NormalSentence> kids) {
    return {k, {}, std::move(kids)};
  }

  friend bool operator==(const NormalSentence&, const NormalSentence&) = default;

  /// Quantifier duality: the negation stays in normal form.
  NormalSentence negated() const {
    switch (kind) {
      case Kind::Universal: return existential(negation_normal(matrix, true));
      case Kind::Existential: return universal(negation_normal(matrix, true));
      case Kind::True: return truth(false);
      case Kind::False: return truth(true);
      case Kind::And:
      case Kind::Or: {
        std::vector<NormalSentence> kids;
        for (const auto& c : children) kids.push_back(c.negated());
        return combine(kind == Kind::And ? Kind::Or : Kind::And, std::move(kids));
      }
    }
    return *this;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Universal: return "all(" + matrix.to_string() + ")";
      case Kind::Existential: return "some(" + matrix.to_string() + ")";
      case Kind::True: return "T";
      case Kind::False: return "F";
      default: break;
    }
    std::string out = kind == Kind::And ? "and[" : "or[";
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i) out += ", ";
      out += children[i].to_string();
    }
    return out + "]";
  }
};

namespace detail {

// Intermediate form during miniscoping: a propositional formula whose atoms
// are unary atoms of a still-free variable or already-closed normal sentences.
struct Prop {
  enum class Op { VarAtom, Closed, Not, And, Or };
  Op op;
  std::string pred;
  std::string var;
  std::vector<NormalSentence> closed;  // exactly one element when op == Closed
  std::vector<Prop> kids;

  static Prop var_atom(std::string p, std::string v) { return {Op::VarAtom, std::move(p), std::move(v), {}, {}}; }
  static Prop of(NormalSentence s) { return {Op::Closed, {}, {}, {std::move(s)}, {}}; }
  static Prop make(Op op, std::vector<Prop> kids) { return {op, {}, {}, {}, std::move(kids)}; }
};

inline bool mentions(const Prop& p, const std::string& v) {
  if (p.op == Prop::Op::VarAtom) return p.var == v;
  for (const auto& k : p.kids)
    if (mentions(k, v)) return true;
  return false;
}

inline bool mentions_any_var(const Prop& p) {
  if (p.op == Prop::Op::VarAtom) return true;
  for (const auto& k : p.kids)
    if (mentions_any_var(k)) return true;
  return false;
}

// Negation pushed down to VarAtom / Closed leaves; Closed leaves absorb it.
inline Prop prop_nnf(const Prop& p, bool negated) {
  switch (p.op) {
    case Prop::Op::VarAtom: return negated ? Prop::make(Prop::Op::Not, {p}) : p;
    case Prop::Op::Closed: return negated ? Prop::of(p.closed[0].negated()) : p;
    case Prop::Op::Not: return prop_nnf(p.kids[0], !negated);
    case Prop::Op::And:
    case Prop::Op::Or: {
      Prop::Op op = (p.op == Prop::Op::And) != negated ? Prop::Op::And : Prop::Op::Or;
      std::vector<Prop> kids;
      for (const auto& k : p.kids) kids.push_back(prop_nnf(k, negated));
      return Prop::make(op, std::move(kids));
    }
  }
  return p;
}

inline constexpr std::size_t kMaxClauses = 4096;

// Identity of an NNF literal, used to deduplicate groups.
inline std::string literal_key(const Prop& lit) {
  switch (lit.op) {
    case Prop::Op::VarAtom: return "+" + lit.var + ":" + lit.pred;
    case Prop::Op::Not: return "-" + lit.kids[0].var + ":" + lit.kids[0].pred;
    case Prop::Op::Closed: return "=" + lit.closed[0].to_string();
    default: break;
  }
  throw std::logic_error("literal_key on a non-literal");
}

inline std::string complement_key(const Prop& lit) {
  switch (lit.op) {
    case Prop::Op::VarAtom: return "-" + lit.var + ":" + lit.pred;
    case Prop::Op::Not: return "+" + lit.kids[0].var + ":" + lit.kids[0].pred;
    default: return "=" + lit.closed[0].negated().to_string();
  }
}

// A group holding a literal and its complement is a true clause or a false
// term; either way it drops out of the outer combination.
struct Group {
  std::map<std::string, Prop> lits;
  bool degenerate = false;

  void add(const Prop& lit) {
    if (degenerate) return;
    if (lits.count(complement_key(lit))) {
      degenerate = true;
      return;
    }
    lits.emplace(literal_key(lit), lit);
  }
  std::string key() const {
    std::string out;
    for (const auto& [k, _] : lits) out += k + "\n";
    return out;
  }
};

class GroupSet {
 public:
  void add(Group g) {
    if (g.degenerate) return;
    auto k = g.key();
    if (!seen_.insert(k).second) return;
    groups_.push_back(std::move(g));
    if (groups_.size() > kMaxClauses) throw Error(Errc::Unsupported, "normal form too large");
  }
  std::vector<Group>& groups() { return groups_; }

 private:
  std::vector<Group> groups_;
  std::set<std::string> seen_;
};

// Normal form over literals of an NNF Prop: `outer` is the connective joining
// groups, each group is joined by the dual connective.
inline std::vector<Group> clause_groups(const Prop& p, Prop::Op outer) {
  GroupSet out;
  if (p.op == outer) {
    for (const auto& k : p.kids)
      for (auto& g : clause_groups(k, outer)) out.add(std::move(g));
    return std::move(out.groups());
  }
  Prop::Op inner = outer == Prop::Op::And ? Prop::Op::Or : Prop::Op::And;
  if (p.op == inner) {
    std::vector<Group> acc{Group{}};
    for (const auto& k : p.kids) {
      auto sub = clause_groups(k, outer);
      GroupSet next;
      for (const auto& a : acc)
        for (const auto& b : sub) {
          Group merged = a;
          for (const auto& [_, lit] : b.lits) merged.add(lit);
          next.add(std::move(merged));
        }
      acc = std::move(next.groups());
    }
    return acc;
  }
  Group g;
  g.add(p);
  out.add(std::move(g));
  return std::move(out.groups());
}

inline std::vector<std::vector<Prop>> clause_form(const Prop& p, Prop::Op outer) {
  std::vector<std::vector<Prop>> out;
  for (auto& g : clause_groups(p, outer)) {
    std::vector<Prop> lits;
    for (auto& [_, lit] : g.lits) lits.push_back(std::move(lit));
    out.push_back(std::move(lits));
  }
  return out;
}

inline Matrix literal_matrix(const Prop& lit) {
  if (lit.op == Prop::Op::VarAtom) return Matrix::atom(lit.pred);
  return Matrix::negate(Matrix::atom(lit.kids[0].pred));
}

inline Prop join(Prop::Op op, std::vector<Prop> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  if (parts.empty())
    return Prop::of(NormalSentence::truth(op == Prop::Op::And));
  return Prop::make(op, std::move(parts));
}

// Matrix straight from a quantifier-free body over a single variable.
inline bool direct_matrix(const fol::Formula& f, const std::string& v, Matrix& out) {
  using namespace fol;
  if (auto* p = f.as<Predicate>()) {
    if (p->args.size() != 1 || p->args[0].name != v) return false;
    out = Matrix::atom(p->name);
    return true;
  }
  if (auto* n = f.as<Negation>()) {
    Matrix inner;
    if (!direct_matrix(n->inner, v, inner)) return false;
    out = Matrix::negate(std::move(inner));
    return true;
  }
  if (auto* b = f.as<Binary>()) {
    Matrix l, r;
    if (!direct_matrix(b->left, v, l) || !direct_matrix(b->right, v, r)) return false;
    Matrix::Op op = b->op == Connective::And       ? Matrix::Op::And
                    : b->op == Connective::Or      ? Matrix::Op::Or
                    : b->op == Connective::Implies ? Matrix::Op::Implies
                                                   : Matrix::Op::Iff;
    out = Matrix::binary(op, std::move(l), std::move(r));
    return true;
  }
  return false;
}

inline Prop miniscope(const fol::Formula& f) {
  using namespace fol;
  if (auto* p = f.as<Predicate>()) {
    if (p->args.size() != 1)
      throw Error(Errc::Unsupported, "predicate '" + p->name + "' has arity " +
                                         std::to_string(p->args.size()) + ", expected 1");
    return Prop::var_atom(p->name, p->args[0].name);
  }
  if (auto* n = f.as<Negation>()) return Prop::make(Prop::Op::Not, {miniscope(n->inner)});
  if (auto* b = f.as<Binary>()) {
    Prop l = miniscope(b->left), r = miniscope(b->right);
    switch (b->op) {
      case Connective::And: return Prop::make(Prop::Op::And, {l, r});
      case Connective::Or: return Prop::make(Prop::Op::Or, {l, r});
      case Connective::Implies:
        return Prop::make(Prop::Op::Or, {Prop::make(Prop::Op::Not, {l}), r});
      case Connective::Iff:
        return Prop::make(Prop::Op::Or,
                          {Prop::make(Prop::Op::And, {l, r}),
                           Prop::make(Prop::Op::And, {Prop::make(Prop::Op::Not, {l}),
                                                      Prop::make(Prop::Op::Not, {r})})});
    }
  }
  const auto& q = *f.as<Quantified>();
  const std::string& v = q.var.name;
  bool universal = q.q == Quantifier::ForAll;

  Matrix direct;
  if (direct_matrix(q.body, v, direct)) {
    return Prop::of(universal ? NormalSentence::universal(std::move(direct))
                              : NormalSentence::existential(std::move(direct)));
  }

  Prop body = prop_nnf(miniscope(q.body), false);
  if (!mentions(body, v)) return body;  // domains are nonempty

  // forall: CNF, split each clause; exists: DNF, split each term.
  Prop::Op outer = universal ? Prop::Op::And : Prop::Op::Or;
  Prop::Op inner = universal ? Prop::Op::Or : Prop::Op::And;
  Matrix::Op matrix_op = universal ? Matrix::Op::Or : Matrix::Op::And;
  std::vector<Prop> groups;
  for (auto& group : clause_form(body, outer)) {
    std::vector<Matrix> bound;
    std::vector<Prop> rest;
    for (auto& lit : group) {
      bool is_bound_lit = (lit.op == Prop::Op::VarAtom && lit.var == v) ||
                          (lit.op == Prop::Op::Not && lit.kids[0].var == v);
      if (is_bound_lit) {
        bound.push_back(literal_matrix(lit));
      } else {
        rest.push_back(std::move(lit));
      }
    }
    if (!bound.empty()) {
      Matrix m = bound.size() == 1 ? std::move(bound.front()) : Matrix{matrix_op, {}, std::move(bound)};
      rest.insert(rest.begin(), Prop::of(universal ? NormalSentence::universal(std::move(m))
                                                   : NormalSentence::existential(std::move(m))));
    }
    groups.push_back(join(inner, std::move(rest)));
  }
  return join(outer, std::move(groups));
}

inline NormalSentence to_normal(const Prop& p) {
  switch (p.op) {
    case Prop::Op::Closed: return p.closed[0];
    case Prop::Op::Not: return to_normal(p.kids[0]).negated();
    case Prop::Op::And:
    case Prop::Op::Or: {
      std::vector<NormalSentence> kids;
      for (const auto& k : p.kids) kids.push_back(to_normal(k));
      return NormalSentence::combine(
          p.op == Prop::Op::And ? NormalSentence::Kind::And : NormalSentence::Kind::Or,
          std::move(kids));
    }
    case Prop::Op::VarAtom: break;
  }
  throw Error(Errc::Unsupported, "free variable '" + p.var + "' survived normalization");
}

}  // namespace detail

/// Equivalent depth-one form. Throws Unsupported for non-unary predicates.
inline NormalSentence normalize(const fol::Sentence& s) {
  return detail::to_normal(detail::miniscope(s.formula()));
}

}  // namespace sylo::prover
