#pragma once

// Aggregate metric report and its JSON encoding.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sylo/error.hpp"
#include "sylo/eval/bootstrap.hpp"
#include "sylo/eval/metrics.hpp"

namespace sylo::eval {

struct MetricReport {
  int samples = 0;
  int failed = 0;
  double accuracy = 0;
  std::optional<double> premise_f1;
  // Present only when every gold sample carries a plausibility label.
  std::optional<double> c_intra, c_inter, content_effect, combined_score;
  std::optional<GroupAccuracies> groups;
  std::map<std::string, std::pair<double, double>> ci;
  std::map<std::string, int> group_counts;
};

struct ReportOptions {
  int bootstrap = 0;  // resamples; 0 disables intervals
  std::uint64_t seed = 0;
};

namespace detail {

inline std::optional<double> cs_metric(const std::vector<Prediction>& p, const std::vector<Syllogism>& g) {
  return combined_score(accuracy(p, g), eval::content_effect(group_accuracies(p, g)).ce);
}

}  // namespace detail

inline MetricReport compute_report(const std::vector<Prediction>& preds, const std::vector<Syllogism>& gold,
                                   const ReportOptions& opt = {}) {
  MetricReport r;
  r.samples = static_cast<int>(gold.size());
  for (const auto& p : preds) r.failed += p.diagnostics.failed;
  r.accuracy = accuracy(preds, gold);
  const bool relevance = has_relevance_labels(gold);
  const bool content = has_plausibility_labels(gold);
  if (relevance) r.premise_f1 = premise_f1(preds, gold);
  if (content) {
    auto g = group_accuracies(preds, gold);
    auto ce = eval::content_effect(g);
    r.groups = g;
    r.c_intra = ce.c_intra;
    r.c_inter = ce.c_inter;
    r.content_effect = ce.ce;
    r.combined_score = eval::combined_score(r.accuracy, ce.ce);
    auto counts = group_counts(gold);
    r.group_counts = {{"valid_plausible", counts.vp},
                      {"valid_implausible", counts.vnp},
                      {"invalid_plausible", counts.nvp},
                      {"invalid_implausible", counts.nvnp}};
  }
  if (opt.bootstrap > 0) {
    r.ci["accuracy"] = bootstrap_ci([](const auto& p, const auto& g) { return std::optional<double>(accuracy(p, g)); },
                                    preds, gold, opt.bootstrap, opt.seed);
    if (relevance)
      r.ci["premise_f1"] = bootstrap_ci(
          [](const auto& p, const auto& g) { return std::optional<double>(premise_f1(p, g)); }, preds, gold,
          opt.bootstrap, opt.seed + 1);
    if (content) {
      r.ci["content_effect"] = bootstrap_ci(
          [](const auto& p, const auto& g) {
            return std::optional<double>(eval::content_effect(group_accuracies(p, g)).ce);
          },
          preds, gold, opt.bootstrap, opt.seed + 2);
      r.ci["combined_score"] = bootstrap_ci(detail::cs_metric, preds, gold, opt.bootstrap, opt.seed + 3);
    }
  }
  return r;
}

inline nlohmann::json to_json(const MetricReport& r) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j = {{"samples", r.samples},
            {"failed", r.failed},
            {"accuracy", r.accuracy},
            {"premise_f1", opt(r.premise_f1)},
            {"c_intra", opt(r.c_intra)},
            {"c_inter", opt(r.c_inter)},
            {"content_effect", opt(r.content_effect)},
            {"combined_score", opt(r.combined_score)}};
  if (r.groups)
    j["group_accuracies"] = {{"valid_plausible", r.groups->a_vp},
                             {"valid_implausible", r.groups->a_vnp},
                             {"invalid_plausible", r.groups->a_nvp},
                             {"invalid_implausible", r.groups->a_nvnp}};
  else
    j["group_accuracies"] = nullptr;
  j["group_counts"] = r.group_counts;
  json ci = json::object();
  for (const auto& [k, v] : r.ci) ci[k] = {v.first, v.second};
  j["ci"] = std::move(ci);
  return j;
}

/// One-line summary: acc=... f1=... ce=... cs=...
inline std::string summary_line(const MetricReport& r) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << *v;
    return s.str();
  };
  return "acc=" + fmt(r.accuracy) + " f1=" + fmt(r.premise_f1) + " ce=" + fmt(r.content_effect) +
         " cs=" + fmt(r.combined_score);
}

inline void emit_report(const std::filesystem::path& path, const MetricReport& r) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write report " + path.string());
  out << to_json(r).dump(2) << "\n";
}

}  // namespace sylo::eval
