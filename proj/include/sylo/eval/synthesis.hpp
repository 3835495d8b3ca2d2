#pragma once

// Builds a relevance-labelled validation set by padding base syllogisms with
// distractor premises taken from topically related pool samples.

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/pipeline/types.hpp"

namespace sylo::eval {

inline const std::set<std::string>& stop_words() {
  static const std::set<std::string> kWords = {
      "a",       "all",  "an",    "and",  "any",  "are",   "as",   "at",      "be",    "because", "but",
      "by",      "can",  "do",    "does", "every", "for",  "from", "have",    "if",    "in",      "is",
      "it",      "its",  "least", "no",   "none", "not",   "of",   "on",      "one",   "or",      "some",
      "that",    "the",  "then",  "there", "these", "they", "thing", "things", "this", "those",   "thus",
      "to",      "was",  "were",  "which", "who",  "whom",  "with", "without", "therefore", "hence", "so",
      "follows", "each", "nothing", "something", "everything", "anything", "also", "certain", "only", "them",
      "their",   "has",  "been",  "being", "many", "few",   "most", "such",    "than",  "what",    "whatever"};
  return kWords;
}

/// Lowercase alphanumeric tokens minus stop words.
inline std::set<std::string> content_tokens(std::string_view text) {
  std::set<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stop_words().count(cur)) out.insert(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

/// Tokens occurring in at least two propositions of `s`: the recurring terms.
inline std::set<std::string> topic_tokens(const pipeline::Syllogism& s) {
  std::map<std::string, int> freq;
  auto count = [&](const std::string& text) {
    for (const auto& t : content_tokens(text)) ++freq[t];
  };
  for (const auto& p : s.premises) count(p);
  count(s.conclusion);
  std::set<std::string> out;
  for (const auto& [t, n] : freq)
    if (n >= 2) out.insert(t);
  return out;
}

struct SynthesisOptions {
  int k_min = 3;
  int k_max = 5;
  std::uint64_t seed = 0;
};

/// Each base sample gains k in [k_min, k_max] distractor premises drawn from
/// pool samples sharing a topic token; plausible bases draw only from
/// plausible pool samples. Premises are deduplicated and shuffled, and
/// gold_relevant lists where the original premises landed (empty for invalid
/// bases, absent when validity is unlabelled).
inline std::vector<pipeline::Syllogism> synthesize_subtask2(const std::vector<pipeline::Syllogism>& base,
                                                            const std::vector<pipeline::Syllogism>& pool,
                                                            const SynthesisOptions& opt = {}) {
  if (opt.k_min < 1 || opt.k_max < opt.k_min) throw Error(Errc::InvalidInput, "need 1 <= k_min <= k_max");
  std::set<std::string> base_ids;
  for (const auto& b : base) base_ids.insert(b.id);
  for (const auto& p : pool)
    if (base_ids.count(p.id)) throw Error(Errc::InvalidInput, "pool sample " + p.id + " also appears in the base");

  std::vector<std::set<std::string>> pool_tokens;
  for (const auto& p : pool) {
    std::set<std::string> toks;
    for (const auto& x : p.premises) toks.merge(content_tokens(x));
    toks.merge(content_tokens(p.conclusion));
    pool_tokens.push_back(std::move(toks));
  }

  std::mt19937_64 rng(opt.seed);
  std::vector<pipeline::Syllogism> out;
  out.reserve(base.size());
  for (const auto& b : base) {
    auto topics = topic_tokens(b);
    std::set<std::string> own(b.premises.begin(), b.premises.end());
    own.insert(b.conclusion);
    std::vector<std::string> candidates;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto& p = pool[i];
      if (b.label_plausible.value_or(false) && !p.label_plausible.value_or(false)) continue;
      bool related = std::any_of(topics.begin(), topics.end(), [&](const auto& t) { return pool_tokens[i].count(t); });
      if (!related) continue;
      for (const auto& premise : p.premises)
        if (!own.count(premise) && seen.insert(premise).second) candidates.push_back(premise);
    }
    if (static_cast<int>(candidates.size()) < opt.k_min)
      throw Error(Errc::InsufficientPool, "only " + std::to_string(candidates.size()) +
                                              " related distractor premises for sample " + b.id);
    std::uniform_int_distribution<int> pick_k(opt.k_min, opt.k_max);
    int k = std::min(pick_k(rng), static_cast<int>(candidates.size()));
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(static_cast<std::size_t>(k));

    // Deduplicate originals, remembering which slots are original.
    std::vector<std::pair<std::string, bool>> merged;
    std::set<std::string> placed;
    for (const auto& p : b.premises)
      if (placed.insert(p).second) merged.emplace_back(p, true);
    for (auto& d : candidates) merged.emplace_back(std::move(d), false);
    std::shuffle(merged.begin(), merged.end(), rng);

    pipeline::Syllogism s = b;
    s.premises.clear();
    std::vector<int> relevant;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      s.premises.push_back(merged[i].first);
      if (merged[i].second) relevant.push_back(static_cast<int>(i));
    }
    if (b.label_valid)
      s.gold_relevant = *b.label_valid ? relevant : std::vector<int>{};
    else
      s.gold_relevant.reset();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sylo::eval
