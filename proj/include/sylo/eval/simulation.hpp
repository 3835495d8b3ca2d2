#pragma once

// Sampling behaviour of the content effect for a model whose accuracy is the
// same in all four validity/plausibility groups, and the sensitivity of the
// combined score to single prediction flips.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/eval/bootstrap.hpp"
#include "sylo/eval/metrics.hpp"

namespace sylo::eval {

/// Large-N approximation of the expected content effect (percentage points)
/// for an unbiased model of accuracy `a` with `n` samples per group.
inline double expected_ce_closed_form(double a, int n) {
  if (!(a >= 0 && a <= 1)) throw Error(Errc::InvalidInput, "accuracy must lie in [0, 1]");
  if (n < 1) throw Error(Errc::InvalidInput, "n must be at least 1");
  return 200.0 * std::sqrt(a * (1.0 - a) / (std::numbers::pi * n));
}

/// Mean of |X| for X ~ Normal(mu, sigma^2).
inline double folded_normal_mean(double mu, double sigma) {
  if (sigma <= 0) return std::abs(mu);
  double phi = 0.5 * std::erfc(mu / sigma / std::numbers::sqrt2);  // P(X < 0) = Phi(-mu/sigma)
  return sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-mu * mu / (2.0 * sigma * sigma)) +
         mu * (1.0 - 2.0 * phi);
}

struct UnbiasedModelSpec {
  double accuracy_a = 0.9;
  int n_per_group = 48;
  int trials = 10000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(accuracy_a >= 0 && accuracy_a <= 1)) throw Error(Errc::InvalidInput, "accuracy_a must lie in [0, 1]");
    if (n_per_group < 1) throw Error(Errc::InvalidInput, "n_per_group must be at least 1");
    if (trials < 1) throw Error(Errc::InvalidInput, "trials must be at least 1");
  }
};

struct SimulatedTrial {
  double accuracy;  // percent
  double ce;        // percentage points
};

namespace detail {

inline constexpr int kTrialBlock = 1024;

// Runs fn(block_index, begin, end) over fixed-size blocks on all cores.
template <class Fn>
void for_each_block(int total, Fn fn) {
  int blocks = (total + kTrialBlock - 1) / kTrialBlock;
  int t = std::min<int>(blocks, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(std::max(t, 1)));
  auto work = [&](int w) {
    try {
      for (int b = next++; b < blocks; b = next++)
        fn(b, b * kTrialBlock, std::min(total, (b + 1) * kTrialBlock));
    } catch (...) {
      failures[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < t; ++w) pool.emplace_back(work, w);
    work(0);
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace detail

/// One (accuracy, CE) pair per trial; four independent binomial draws each.
inline std::vector<SimulatedTrial> simulate_unbiased_ce(const UnbiasedModelSpec& spec) {
  spec.validate();
  std::vector<SimulatedTrial> out(static_cast<std::size_t>(spec.trials));
  const double n = spec.n_per_group;
  detail::for_each_block(spec.trials, [&](int block, int begin, int end) {
    auto rng = substream(spec.seed, static_cast<std::uint64_t>(block));
    std::binomial_distribution<int> draw(spec.n_per_group, spec.accuracy_a);
    for (int i = begin; i < end; ++i) {
      int k[4];
      for (int& c : k) c = draw(rng);
      GroupAccuracies g{100.0 * k[0] / n, 100.0 * k[1] / n, 100.0 * k[2] / n, 100.0 * k[3] / n};
      out[static_cast<std::size_t>(i)] = {100.0 * (k[0] + k[1] + k[2] + k[3]) / (4.0 * n), content_effect(g).ce};
    }
  });
  return out;
}

inline double mean_ce(const std::vector<SimulatedTrial>& trials) {
  double s = 0;
  for (const auto& t : trials) s += t.ce;
  return trials.empty() ? 0.0 : s / static_cast<double>(trials.size());
}

struct ThresholdRow {
  double accuracy_a;
  double ce_threshold;
  double ce_mean;
  double ce_closed_form;
};

/// Empirical `quantile` of the simulated CE at each accuracy value.
inline std::vector<ThresholdRow> ce_significance_threshold(int n_per_group, const std::vector<double>& accuracy_grid,
                                                           int trials, std::uint64_t seed, double q = 0.95) {
  if (!(q >= 0 && q <= 1)) throw Error(Errc::InvalidInput, "quantile must lie in [0, 1]");
  std::vector<ThresholdRow> rows;
  for (std::size_t i = 0; i < accuracy_grid.size(); ++i) {
    double a = accuracy_grid[i];
    auto sims = simulate_unbiased_ce({a, n_per_group, trials, seed + i});
    std::vector<double> ces;
    ces.reserve(sims.size());
    for (const auto& s : sims) ces.push_back(s.ce);
    rows.push_back({a, quantile(ces, q), mean_ce(sims), expected_ce_closed_form(a, n_per_group)});
  }
  return rows;
}

struct FlipSensitivity {
  double cs_before;
  double cs_after;
  double drop;
  double accuracy_after;
  double ce_after;
};

/// A model correct on all `n_total` samples (split evenly over the four
/// groups) loses one correct prediction in one group.
inline FlipSensitivity cs_single_flip(int n_total) {
  if (n_total < 4 || n_total % 4 != 0) throw Error(Errc::InvalidInput, "n_total must be a positive multiple of 4");
  double per_group = n_total / 4.0;
  GroupAccuracies g{100.0 * (per_group - 1) / per_group, 100.0, 100.0, 100.0};
  double acc = 100.0 * (n_total - 1) / n_total;
  double ce = content_effect(g).ce;
  double before = combined_score(100.0, 0.0);
  double after = combined_score(acc, ce);
  return {before, after, before - after, acc, ce};
}

/// Combined score along a CE grid, one curve per accuracy level.
struct SensitivityPoint {
  double accuracy;
  double ce;
  double cs;
};

inline std::vector<SensitivityPoint> sensitivity_curves(const std::vector<double>& accuracies, double ce_max,
                                                        double ce_step) {
  if (!(ce_step > 0)) throw Error(Errc::InvalidInput, "ce_step must be positive");
  std::vector<SensitivityPoint> out;
  for (double acc : accuracies) {
    int steps = static_cast<int>(std::floor(ce_max / ce_step + 1e-9));
    for (int i = 0; i <= steps; ++i) {
      double ce = i * ce_step;
      out.push_back({acc, ce, combined_score(acc, ce)});
    }
  }
  return out;
}

// CSV writers.

inline void write_trials_csv(std::ostream& out, double a, const std::vector<SimulatedTrial>& trials) {
  for (const auto& t : trials) out << a << "," << t.accuracy << "," << t.ce << "\n";
}

inline void write_thresholds_csv(std::ostream& out, const std::vector<ThresholdRow>& rows) {
  out << "a,ce_threshold,ce_mean,ce_closed_form\n";
  for (const auto& r : rows)
    out << r.accuracy_a << "," << r.ce_threshold << "," << r.ce_mean << "," << r.ce_closed_form << "\n";
}

inline void write_flip_csv(std::ostream& out, const std::vector<int>& n_totals) {
  out << "n_total,accuracy_after,ce_after,cs_before,cs_after,drop\n";
  for (int n : n_totals) {
    auto f = cs_single_flip(n);
    out << n << "," << f.accuracy_after << "," << f.ce_after << "," << f.cs_before << "," << f.cs_after << ","
        << f.drop << "\n";
  }
}

inline void write_curves_csv(std::ostream& out, const std::vector<SensitivityPoint>& pts) {
  out << "accuracy,ce,cs\n";
  for (const auto& p : pts) out << p.accuracy << "," << p.ce << "," << p.cs << "\n";
}

}  // namespace sylo::eval
