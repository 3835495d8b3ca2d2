#pragma once

// Accuracy, premise F1, content effect and combined score. All percentages
// are in [0, 100]; the content effect enters the combined score in
// percentage points.

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/pipeline/types.hpp"

namespace sylo::eval {

using pipeline::Prediction;
using pipeline::Syllogism;

struct GroupAccuracies {
  double a_vp = 0;    // valid, plausible
  double a_vnp = 0;   // valid, implausible
  double a_nvp = 0;   // invalid, plausible
  double a_nvnp = 0;  // invalid, implausible
};

struct GroupCounts {
  int vp = 0, vnp = 0, nvp = 0, nvnp = 0;
};

struct ContentEffect {
  double c_intra = 0;
  double c_inter = 0;
  double ce = 0;
};

inline ContentEffect content_effect(const GroupAccuracies& g) {
  ContentEffect out;
  out.c_intra = (std::abs(g.a_vp - g.a_vnp) + std::abs(g.a_nvp - g.a_nvnp)) / 2.0;
  out.c_inter = (std::abs(g.a_vp - g.a_nvp) + std::abs(g.a_vnp - g.a_nvnp)) / 2.0;
  out.ce = (out.c_intra + out.c_inter) / 2.0;
  return out;
}

inline double combined_score(double accuracy, double ce) {
  if (!(accuracy >= 0 && accuracy <= 100)) throw Error(Errc::InvalidInput, "accuracy must lie in [0, 100]");
  if (!(ce >= 0)) throw Error(Errc::InvalidInput, "content effect must be non-negative");
  return accuracy / (1.0 + std::log(1.0 + ce));
}

/// Pairs each gold sample with its prediction by id. Throws IdMismatch
/// unless the id sets coincide one to one.
inline std::vector<const Prediction*> align(const std::vector<Prediction>& preds, const std::vector<Syllogism>& gold) {
  if (preds.size() != gold.size())
    throw Error(Errc::IdMismatch, std::to_string(preds.size()) + " predictions for " + std::to_string(gold.size()) +
                                      " gold samples");
  std::map<std::string, const Prediction*> by_id;
  for (const auto& p : preds)
    if (!by_id.emplace(p.id, &p).second) throw Error(Errc::IdMismatch, "duplicate prediction id " + p.id);
  std::vector<const Prediction*> out;
  out.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw Error(Errc::IdMismatch, "no prediction for id " + g.id);
    out.push_back(it->second);
  }
  return out;
}

inline bool gold_valid(const Syllogism& g) {
  if (!g.label_valid) throw Error(Errc::MissingLabels, "sample " + g.id + " has no validity label");
  return *g.label_valid;
}

inline double accuracy(const std::vector<Prediction>& preds, const std::vector<Syllogism>& gold) {
  auto aligned = align(preds, gold);
  if (gold.empty()) throw Error(Errc::EmptyGroup, "accuracy of an empty dataset");
  int correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += aligned[i]->valid == gold_valid(gold[i]);
  return 100.0 * correct / static_cast<double>(gold.size());
}

inline GroupCounts group_counts(const std::vector<Syllogism>& gold) {
  GroupCounts c;
  for (const auto& g : gold) {
    if (!g.label_plausible) throw Error(Errc::MissingLabels, "sample " + g.id + " has no plausibility label");
    bool v = gold_valid(g), p = *g.label_plausible;
    (v ? (p ? c.vp : c.vnp) : (p ? c.nvp : c.nvnp))++;
  }
  return c;
}

inline GroupAccuracies group_accuracies(const std::vector<Prediction>& preds, const std::vector<Syllogism>& gold) {
  auto aligned = align(preds, gold);
  int total[4] = {0, 0, 0, 0}, correct[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    if (!g.label_plausible) throw Error(Errc::MissingLabels, "sample " + g.id + " has no plausibility label");
    bool v = gold_valid(g), p = *g.label_plausible;
    int cell = (v ? 0 : 2) + (p ? 0 : 1);
    ++total[cell];
    correct[cell] += aligned[i]->valid == v;
  }
  static constexpr const char* kNames[4] = {"valid/plausible", "valid/implausible", "invalid/plausible",
                                            "invalid/implausible"};
  double acc[4];
  for (int c = 0; c < 4; ++c) {
    if (total[c] == 0) throw Error(Errc::EmptyGroup, std::string("no samples in group ") + kNames[c]);
    acc[c] = 100.0 * correct[c] / total[c];
  }
  return GroupAccuracies{acc[0], acc[1], acc[2], acc[3]};
}

/// Micro-averaged F1 over all (sample, premise index) relevance decisions.
/// A dataset with no relevant premises anywhere, predicted or gold, scores 100.
inline double premise_f1(const std::vector<Prediction>& preds, const std::vector<Syllogism>& gold) {
  auto aligned = align(preds, gold);
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].gold_relevant) throw Error(Errc::MissingLabels, "sample " + gold[i].id + " has no gold_relevant");
    std::set<int> g(gold[i].gold_relevant->begin(), gold[i].gold_relevant->end());
    std::set<int> p(aligned[i]->relevant.begin(), aligned[i]->relevant.end());
    for (int x : p) (g.count(x) ? tp : fp)++;
    for (int x : g) fn += !p.count(x);
  }
  if (tp + fp + fn == 0) return 100.0;
  return 100.0 * 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
}

inline bool has_plausibility_labels(const std::vector<Syllogism>& gold) {
  for (const auto& g : gold)
    if (!g.label_plausible) return false;
  return !gold.empty();
}

inline bool has_relevance_labels(const std::vector<Syllogism>& gold) {
  for (const auto& g : gold)
    if (!g.gold_relevant) return false;
  return !gold.empty();
}

}  // namespace sylo::eval
