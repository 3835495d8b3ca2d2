#pragma once

// Finite interpretations for monadic sentences and a direct evaluator that
// works on the formula AST (independent of the normal form).

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sylo/fol/formula.hpp"

namespace sylo::prover {

/// Predicate name <-> bit position for type profiles.
class PredicateIndex {
 public:
  PredicateIndex() = default;
  explicit PredicateIndex(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) pos_[names_[i]] = static_cast<int>(i);
  }

  static PredicateIndex of(const std::vector<fol::Sentence>& sentences) {
    std::vector<std::string> names;
    for (const auto& s : sentences)
      for (auto& p : fol::collect_predicates(s))
        if (std::find(names.begin(), names.end(), p) == names.end()) names.push_back(p);
    return PredicateIndex(std::move(names));
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Bit for `name`, or -1 when the predicate is not indexed.
  int bit(const std::string& name) const {
    auto it = pos_.find(name);
    return it == pos_.end() ? -1 : it->second;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> pos_;
};

/// Element types over a predicate index; elements may share a type.
struct Interpretation {
  PredicateIndex predicates;
  std::vector<std::uint32_t> elements;
};

/// A monadic model given by the set of realized type profiles.
class Model {
 public:
  Model(PredicateIndex predicates, std::vector<std::uint32_t> types)
      : predicates_(std::move(predicates)), types_(std::move(types)) {
    std::sort(types_.begin(), types_.end());
    types_.erase(std::unique(types_.begin(), types_.end()), types_.end());
    if (types_.empty()) throw std::invalid_argument("a model needs at least one element");
    std::uint32_t limit = predicates_.size() >= 32 ? ~0u : (1u << predicates_.size());
    for (auto t : types_)
      if (predicates_.size() < 32 && t >= limit)
        throw std::invalid_argument("type profile mentions an unknown predicate");
  }

  const PredicateIndex& predicates() const noexcept { return predicates_; }
  const std::vector<std::uint32_t>& types() const noexcept { return types_; }

  /// Type profiles as predicate-name sets.
  std::vector<std::vector<std::string>> profiles() const {
    std::vector<std::vector<std::string>> out;
    for (auto t : types_) {
      std::vector<std::string> prof;
      for (std::size_t i = 0; i < predicates_.size(); ++i)
        if (t & (1u << i)) prof.push_back(predicates_.names()[i]);
      out.push_back(std::move(prof));
    }
    return out;
  }

  /// e.g. "{q} {p, q} {}".
  std::string to_string() const {
    std::string out;
    for (const auto& prof : profiles()) {
      if (!out.empty()) out += ' ';
      out += '{';
      for (std::size_t i = 0; i < prof.size(); ++i) {
        if (i) out += ", ";
        out += prof[i];
      }
      out += '}';
    }
    return out;
  }

  Interpretation interpretation() const { return Interpretation{predicates_, types_}; }

 private:
  PredicateIndex predicates_;
  std::vector<std::uint32_t> types_;
};

namespace detail {

struct Binding {
  const std::string* var;
  std::uint32_t type;
};

inline bool holds_rec(const fol::Formula& f, const Interpretation& in, std::vector<Binding>& env) {
  using namespace fol;
  if (auto* p = f.as<Predicate>()) {
    if (p->args.size() != 1) throw std::invalid_argument("monadic evaluator given arity != 1");
    const std::string& v = p->args[0].name;
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (*it->var == v) {
        int bit = in.predicates.bit(p->name);
        return bit >= 0 && (it->type & (1u << bit)) != 0;
      }
    }
    throw std::invalid_argument("unbound variable '" + v + "' during evaluation");
  }
  if (auto* n = f.as<Negation>()) return !holds_rec(n->inner, in, env);
  if (auto* b = f.as<Binary>()) {
    bool l = holds_rec(b->left, in, env);
    switch (b->op) {
      case Connective::And: return l && holds_rec(b->right, in, env);
      case Connective::Or: return l || holds_rec(b->right, in, env);
      case Connective::Implies: return !l || holds_rec(b->right, in, env);
      case Connective::Iff: return l == holds_rec(b->right, in, env);
    }
  }
  const auto& q = *f.as<Quantified>();
  bool universal = q.q == Quantifier::ForAll;
  for (auto t : in.elements) {
    env.push_back(Binding{&q.var.name, t});
    bool r = holds_rec(q.body, in, env);
    env.pop_back();
    if (universal && !r) return false;
    if (!universal && r) return true;
  }
  return universal;
}

}  // namespace detail

/// Truth of a monadic sentence in a finite interpretation, by direct recursion.
inline bool holds(const fol::Sentence& s, const Interpretation& in) {
  std::vector<detail::Binding> env;
  return detail::holds_rec(s.formula(), in, env);
}

inline bool holds(const fol::Sentence& s, const Model& m) { return holds(s, m.interpretation()); }

}  // namespace sylo::prover
