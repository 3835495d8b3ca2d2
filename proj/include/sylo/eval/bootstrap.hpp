#pragma once

// Percentile bootstrap over samples. Each resample draws from its own
// generator seeded by (seed, resample index), so results do not depend on
// how resamples are spread over threads.

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/eval/metrics.hpp"

namespace sylo::eval {

/// A metric over an aligned (prediction, gold) dataset; nullopt when the
/// metric is undefined on that resample (for example an empty group).
using MetricFn = std::function<std::optional<double>(const std::vector<Prediction>&, const std::vector<Syllogism>&)>;

inline constexpr int kDefaultBootstrapResamples = 10000;

/// Linear-interpolation quantile of `values` (sorted in place), q in [0, 1].
inline double quantile(std::vector<double>& values, double q) {
  if (values.empty()) throw Error(Errc::EmptyGroup, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  auto hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline std::pair<double, double> bootstrap_ci(const MetricFn& metric, const std::vector<Prediction>& preds,
                                              const std::vector<Syllogism>& gold, int b, std::uint64_t seed,
                                              int threads = 0) {
  if (b < 100) throw Error(Errc::InvalidInput, "bootstrap needs at least 100 resamples");
  auto aligned = align(preds, gold);
  std::vector<Prediction> ordered;
  ordered.reserve(aligned.size());
  for (auto* p : aligned) ordered.push_back(*p);
  const std::size_t n = gold.size();
  if (n == 0) throw Error(Errc::EmptyGroup, "bootstrap over an empty dataset");

  std::vector<std::optional<double>> stats(static_cast<std::size_t>(b));
  auto run = [&](int begin, int end) {
    std::vector<Prediction> rp(n);
    std::vector<Syllogism> rg(n);
    for (int r = begin; r < end; ++r) {
      auto rng = substream(seed, static_cast<std::uint64_t>(r));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        auto j = pick(rng);
        rp[i] = ordered[j];
        rg[i] = gold[j];
        // Resampled copies of one sample need distinct ids to stay aligned.
        rp[i].id = rg[i].id = std::to_string(i);
      }
      try {
        stats[static_cast<std::size_t>(r)] = metric(rp, rg);
      } catch (const Error& e) {
        if (e.code() != Errc::EmptyGroup) throw;
      }
    }
  };
  int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  t = std::min(t, b);
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(t));
  auto guarded = [&](int w, int begin, int end) {
    try {
      run(begin, end);
    } catch (...) {
      failures[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    int chunk = (b + t - 1) / t;
    for (int w = 1; w < t; ++w) pool.emplace_back(guarded, w, std::min(b, w * chunk), std::min(b, (w + 1) * chunk));
    guarded(0, 0, std::min(b, chunk));
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  std::vector<double> values;
  for (const auto& s : stats)
    if (s) values.push_back(*s);
  if (values.empty()) throw Error(Errc::EmptyGroup, "metric undefined on every resample");
  double lo = quantile(values, 0.025);
  double hi = quantile(values, 0.975);
  return {lo, hi};
}

}  // namespace sylo::eval
