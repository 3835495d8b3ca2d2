#pragma once

// First-order formula AST with unary-or-wider predicates over variables only.
// Nodes are immutable and shared, so copying a Formula is cheap.

#include <memory>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sylo/error.hpp"

namespace sylo::fol {

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

enum class Connective { And, Or, Implies, Iff };
enum class Quantifier { ForAll, Exists };

class Formula;

struct Predicate {
  std::string name;
  std::vector<Variable> args;
};

struct Negation;
struct Binary;
struct Quantified;

class Formula {
 public:
  using Node = std::variant<Predicate, Negation, Binary, Quantified>;

  // Member bodies are defined below, once the node types are complete.
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, Formula>)
  explicit Formula(T node);

  const Node& node() const noexcept;

  template <class T>
  const T* as() const noexcept;
  template <class T>
  bool is() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  std::shared_ptr<const Node> node_;
};

struct Negation {
  Formula inner;
};

struct Binary {
  Connective op;
  Formula left;
  Formula right;
};

struct Quantified {
  Quantifier q;
  Variable var;
  Formula body;
};

template <class T>
  requires(!std::is_same_v<std::remove_cvref_t<T>, Formula>)
Formula::Formula(T node) : node_(std::make_shared<const Node>(std::move(node))) {}

inline const Formula::Node& Formula::node() const noexcept { return *node_; }

template <class T>
const T* Formula::as() const noexcept {
  return std::get_if<T>(node_.get());
}

template <class T>
bool Formula::is() const noexcept {
  return std::holds_alternative<T>(*node_);
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& na = *a.node_;
  const auto& nb = *b.node_;
  if (na.index() != nb.index()) return false;
  if (auto* p = std::get_if<Predicate>(&na)) {
    auto* o = std::get_if<Predicate>(&nb);
    return p->name == o->name && p->args == o->args;
  }
  if (auto* n = std::get_if<Negation>(&na)) return n->inner == std::get<Negation>(nb).inner;
  if (auto* bi = std::get_if<Binary>(&na)) {
    const auto& o = std::get<Binary>(nb);
    return bi->op == o.op && bi->left == o.left && bi->right == o.right;
  }
  const auto& q = std::get<Quantified>(na);
  const auto& o = std::get<Quantified>(nb);
  return q.q == o.q && q.var == o.var && q.body == o.body;
}

// Construction helpers.

inline Formula atom(std::string name, std::vector<std::string> vars) {
  std::vector<Variable> args;
  args.reserve(vars.size());
  for (auto& v : vars) args.push_back(Variable{std::move(v)});
  return Formula(Predicate{std::move(name), std::move(args)});
}
inline Formula atom(std::string name, std::string var) {
  return atom(std::move(name), std::vector<std::string>{std::move(var)});
}
inline Formula neg(Formula f) { return Formula(Negation{std::move(f)}); }
inline Formula conj(Formula l, Formula r) {
  return Formula(Binary{Connective::And, std::move(l), std::move(r)});
}
inline Formula disj(Formula l, Formula r) {
  return Formula(Binary{Connective::Or, std::move(l), std::move(r)});
}
inline Formula implies(Formula l, Formula r) {
  return Formula(Binary{Connective::Implies, std::move(l), std::move(r)});
}
inline Formula iff(Formula l, Formula r) {
  return Formula(Binary{Connective::Iff, std::move(l), std::move(r)});
}
inline Formula forall(std::string v, Formula body) {
  return Formula(Quantified{Quantifier::ForAll, Variable{std::move(v)}, std::move(body)});
}
inline Formula exists(std::string v, Formula body) {
  return Formula(Quantified{Quantifier::Exists, Variable{std::move(v)}, std::move(body)});
}

namespace detail {

inline void free_vars(const Formula& f, std::vector<std::string>& bound,
                      std::vector<std::string>& out) {
  if (auto* p = f.as<Predicate>()) {
    for (const auto& a : p->args) {
      bool is_bound = false;
      for (const auto& b : bound) is_bound = is_bound || b == a.name;
      bool seen = false;
      for (const auto& o : out) seen = seen || o == a.name;
      if (!is_bound && !seen) out.push_back(a.name);
    }
  } else if (auto* n = f.as<Negation>()) {
    free_vars(n->inner, bound, out);
  } else if (auto* b = f.as<Binary>()) {
    free_vars(b->left, bound, out);
    free_vars(b->right, bound, out);
  } else {
    const auto& q = *f.as<Quantified>();
    bound.push_back(q.var.name);
    free_vars(q.body, bound, out);
    bound.pop_back();
  }
}

inline void bound_names(const Formula& f, std::set<std::string>& out) {
  if (auto* n = f.as<Negation>()) {
    bound_names(n->inner, out);
  } else if (auto* b = f.as<Binary>()) {
    bound_names(b->left, out);
    bound_names(b->right, out);
  } else if (auto* q = f.as<Quantified>()) {
    out.insert(q->var.name);
    bound_names(q->body, out);
  }
}

}  // namespace detail

/// Free variables in first-occurrence order.
inline std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  detail::free_vars(f, bound, out);
  return out;
}

/// Predicate names in first-occurrence order, deduplicated.
inline std::vector<std::string> collect_predicates(const Formula& f) {
  std::vector<std::string> out;
  auto visit = [&](auto&& self, const Formula& g) -> void {
    if (auto* p = g.as<Predicate>()) {
      for (const auto& o : out)
        if (o == p->name) return;
      out.push_back(p->name);
    } else if (auto* n = g.as<Negation>()) {
      self(self, n->inner);
    } else if (auto* b = g.as<Binary>()) {
      self(self, b->left);
      self(self, b->right);
    } else {
      self(self, g.as<Quantified>()->body);
    }
  };
  visit(visit, f);
  return out;
}

/// A closed formula. Construction from an open formula throws UnboundVariable.
class Sentence {
 public:
  explicit Sentence(Formula f) : formula_(std::move(f)) {
    auto fv = free_variables(formula_);
    if (!fv.empty()) throw Error(Errc::UnboundVariable, "variable '" + fv.front() + "' is not bound");
    std::set<std::string> bound;
    detail::bound_names(formula_, bound);
    for (const auto& p : fol::collect_predicates(formula_))
      if (bound.count(p))
        throw Error(Errc::NameClash, "predicate '" + p + "' shares its name with a bound variable");
  }

  const Formula& formula() const noexcept { return formula_; }

  friend bool operator==(const Sentence& a, const Sentence& b) { return a.formula_ == b.formula_; }

 private:
  Formula formula_;
};

inline std::vector<std::string> collect_predicates(const Sentence& s) {
  return collect_predicates(s.formula());
}

/// Largest predicate arity in the formula.
inline std::size_t max_arity(const Formula& f) {
  if (auto* p = f.as<Predicate>()) return p->args.size();
  if (auto* n = f.as<Negation>()) return max_arity(n->inner);
  if (auto* b = f.as<Binary>()) return std::max(max_arity(b->left), max_arity(b->right));
  return max_arity(f.as<Quantified>()->body);
}

/// Throws Unsupported unless every predicate is unary.
inline void require_monadic(const Formula& f) {
  auto check = [](auto&& self, const Formula& g) -> void {
    if (auto* p = g.as<Predicate>()) {
      if (p->args.size() != 1)
        throw Error(Errc::Unsupported, "predicate '" + p->name + "' has arity " +
                                           std::to_string(p->args.size()) + ", expected 1");
    } else if (auto* n = g.as<Negation>()) {
      self(self, n->inner);
    } else if (auto* b = g.as<Binary>()) {
      self(self, b->left);
      self(self, b->right);
    } else {
      self(self, g.as<Quantified>()->body);
    }
  };
  check(check, f);
}

/// Ordered (proposition text, sentence) pairs for one syllogism.
class PredicateMapping {
 public:
  struct Entry {
    std::string text;
    Sentence sentence;
    int attempts = 1;
  };

  /// A text may repeat (the same proposition stated twice) but must always
  /// map to the same sentence.
  void add(std::string text, Sentence s, int attempts = 1) {
    if (const Entry* e = find(text); e && !(e->sentence.formula() == s.formula()))
      throw Error(Errc::InvalidInput, "proposition text mapped to two formulas: " + text);
    entries_.push_back(Entry{std::move(text), std::move(s), attempts});
  }

  const Entry* find(std::string_view text) const noexcept {
    for (const auto& e : entries_)
      if (e.text == text) return &e;
    return nullptr;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Entry& operator[](std::size_t i) const { return entries_.at(i); }

 private:
  std::vector<Entry> entries_;
};

}  // namespace sylo::fol
