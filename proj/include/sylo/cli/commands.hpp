#pragma once

// The `sylo` command-line interface. Exit codes: 0 success, 1 fatal error,
// 2 some samples failed, 3 not entailed (prove), 64 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sylo/aristotle/import.hpp"
#include "sylo/error.hpp"
#include "sylo/eval/report.hpp"
#include "sylo/eval/simulation.hpp"
#include "sylo/eval/synthesis.hpp"
#include "sylo/fol/latex.hpp"
#include "sylo/fol/prover9.hpp"
#include "sylo/llm/gateway.hpp"
#include "sylo/llm/http_backend.hpp"
#include "sylo/llm/stub_backend.hpp"
#include "sylo/pipeline/pipeline.hpp"
#include "sylo/prover/prover.hpp"

namespace sylo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitNotEntailed = 3;
inline constexpr int kExitUsage = 64;

/// Settings resolved as: flag, then environment, then config file, then default.
struct Settings {
  std::string base_url;
  std::string api_key;
  std::string model;
  std::string prover9_path;
};

namespace detail {

inline std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v && *v) return std::string(v);
  return std::nullopt;
}

inline nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config file " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::SchemaMismatch, "config file is not a JSON object: " + path);
  return j;
}

inline std::string resolve(const std::string& flag, const char* env_name, const nlohmann::json& config,
                           const char* key, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (env_name)
    if (auto v = env(env_name)) return *v;
  if (config.contains(key) && config[key].is_string()) return config[key].get<std::string>();
  return fallback;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline fol::Sentence parse_formula(const std::string& text, const std::string& mode) {
  if (mode == "latex") return fol::parse_latex_formula(text);
  if (mode == "prover9") return fol::parse_prover9_formula(fol::cleanup_prover9(text));
  throw Error(Errc::InvalidInput, "unknown formula mode '" + mode + "'");
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neuro-symbolic syllogistic reasoning: parsing, proving, retrieval and evaluation."};
  app.name("sylo");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (base_url, api_key, model, prover9_path)");

  // run
  auto* run = app.add_subcommand("run", "Classify a dataset and write predictions");
  int subtask = 1;
  std::string data_path, out_path, strategy = "multistep", engine = "typespace", stub_path, record_path;
  std::string base_url, api_key, model, prompts_dir, prover9_path;
  bool translate = false, import = true;
  int workers = 4, max_attempts = 3, concurrency = llm::BoundedBackend::kDefaultLimit, prover_timeout_ms = 10000;
  double retry_temperature = 0.6;
  run->add_option("--subtask", subtask, "Subtask 1-4")->required()->check(CLI::Range(1, 4));
  run->add_option("--data", data_path, "Input dataset (JSON lines)")->required();
  run->add_option("--out", out_path, "Output predictions (JSON lines)")->required();
  run->add_option("--strategy", strategy,
                  "multistep | singlestep | direct-prover9 | end-to-end | llm-prover | llm-retrieval")
      ->capture_default_str();
  run->add_option("--engine", engine, "typespace | enumeration | prover9")->capture_default_str();
  run->add_flag("--translate", translate, "Translate non-English samples first (subtasks 3 and 4)");
  run->add_flag("--import,!--no-import", import, "Add existential import for every premise term")
      ->capture_default_str();
  run->add_option("--workers", workers, "Samples processed concurrently")->check(CLI::PositiveNumber);
  run->add_option("--stub", stub_path, "Replay model responses from a fixture file instead of calling an endpoint");
  run->add_option("--record", record_path, "Record live model responses into a fixture file");
  run->add_option("--base-url", base_url, "Chat-completions base URL (env LLM_BASE_URL)");
  run->add_option("--api-key", api_key, "Bearer token (env LLM_API_KEY)");
  run->add_option("--model", model, "Model name sent with every request");
  run->add_option("--prompts", prompts_dir, "Directory of prompt template overrides");
  run->add_option("--max-attempts", max_attempts, "Parse attempts per proposition")->check(CLI::PositiveNumber);
  run->add_option("--retry-temperature", retry_temperature, "Sampling temperature for retries")
      ->check(CLI::Range(0.0, 2.0));
  run->add_option("--concurrency", concurrency, "Requests in flight")->check(CLI::PositiveNumber);
  run->add_option("--prover9", prover9_path, "Prover9 binary (env PROVER9_PATH)");
  run->add_option("--prover-timeout-ms", prover_timeout_ms, "External prover timeout")->check(CLI::PositiveNumber);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  std::string pred_path, gold_path, report_path;
  int bootstrap = eval::kDefaultBootstrapResamples;
  std::uint64_t seed = 0;
  evaluate->add_option("--pred", pred_path, "Predictions (JSON lines)")->required();
  evaluate->add_option("--gold", gold_path, "Gold dataset (JSON lines)")->required();
  evaluate->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 disables intervals)")->capture_default_str();
  evaluate->add_option("--seed", seed, "Bootstrap seed");
  evaluate->add_option("--out", report_path, "Write the report JSON here");

  // prove
  auto* prove = app.add_subcommand("prove", "Decide entailment between formulas");
  std::vector<std::string> premises;
  std::string conclusion, formula_mode = "latex";
  bool prove_import = false;
  prove->add_option("--premises,-p", premises, "Premise formulas")->required();
  prove->add_option("--conclusion,-c", conclusion, "Conclusion formula")->required();
  prove->add_flag("--import", prove_import, "Add existential import for every premise term");
  prove->add_option("--engine", engine, "typespace | enumeration | prover9")->capture_default_str();
  prove->add_option("--mode", formula_mode, "Formula syntax: latex | prover9")->capture_default_str();
  prove->add_option("--prover9", prover9_path, "Prover9 binary (env PROVER9_PATH)");

  // parse
  auto* parse = app.add_subcommand("parse", "Parse a formula and print canonical renderings");
  std::string text, parse_mode = "latex";
  parse->add_option("--text", text, "Formula text")->required();
  parse->add_option("--mode", parse_mode, "Input syntax: latex | prover9")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Content effect of an unbiased model under sampling noise");
  int n_per_group = 48, trials = 10000;
  std::string grid = "0.5,0.6,0.7,0.8,0.9,0.95,0.98,1", scatter_path;
  double q = 0.95;
  simulate->add_option("--n-per-group", n_per_group, "Samples per validity/plausibility group")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--trials", trials, "Trials per accuracy value")->check(CLI::PositiveNumber);
  simulate->add_option("--grid", grid, "Comma-separated accuracies in [0,1]")->capture_default_str();
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--quantile", q, "Threshold quantile")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--out", out_path, "Threshold table CSV")->required();
  simulate->add_option("--scatter", scatter_path, "Per-trial (a, accuracy, ce) CSV");

  // sensitivity
  auto* sensitivity = app.add_subcommand("sensitivity", "Combined-score drop after one flipped prediction");
  std::string n_totals = "100,200,400,1000,4000", curves_path;
  sensitivity->add_option("--n-total", n_totals, "Comma-separated dataset sizes (multiples of 4)")
      ->capture_default_str();
  sensitivity->add_option("--out", out_path, "Flip table CSV")->required();
  sensitivity->add_option("--curves", curves_path, "Combined score over a CE grid per accuracy level (CSV)");

  // synthesize
  auto* synthesize = app.add_subcommand("synthesize", "Pad syllogisms with distractor premises");
  std::string base_path, pool_path;
  int k_min = 3, k_max = 5;
  synthesize->add_option("--base", base_path, "Base dataset")->required();
  synthesize->add_option("--pool", pool_path, "Distractor pool dataset")->required();
  synthesize->add_option("--seed", seed, "Random seed");
  synthesize->add_option("--k-min", k_min, "Fewest distractors")->check(CLI::PositiveNumber);
  synthesize->add_option("--k-max", k_max, "Most distractors")->check(CLI::PositiveNumber);
  synthesize->add_option("--out", out_path, "Output dataset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto config = detail::load_config(config_path);
    prover::ProverConfig prover_cfg;
    prover_cfg.engine = prover::parse_engine(engine);
    prover_cfg.external.binary = detail::resolve(prover9_path, "PROVER9_PATH", config, "prover9_path", "prover9");

    if (*run) {
      pipeline::PipelineConfig cfg;
      cfg.strategy = pipeline::parse_strategy(strategy);
      cfg.translate_first = translate;
      cfg.augment_import = import;
      cfg.prover = prover_cfg;
      cfg.prover.external.timeout = std::chrono::milliseconds(prover_timeout_ms);
      cfg.retry = {max_attempts, retry_temperature};
      cfg.worker_limit = workers;

      auto dataset = pipeline::load_dataset(data_path);
      std::shared_ptr<llm::ChatBackend> backend;
      std::shared_ptr<llm::RecordingBackend> recorder;
      if (!stub_path.empty()) {
        backend = llm::StubBackend::load(stub_path);
      } else {
        llm::HttpConfig http;
        http.base_url = detail::resolve(base_url, "LLM_BASE_URL", config, "base_url", "");
        http.api_key = detail::resolve(api_key, "LLM_API_KEY", config, "api_key", "");
        if (!http.base_url.empty()) backend = std::make_shared<llm::HttpChatBackend>(http);
      }
      if (backend && !record_path.empty()) {
        recorder = std::make_shared<llm::RecordingBackend>(backend);
        backend = recorder;
      }
      std::shared_ptr<llm::Gateway> gateway;
      if (backend) {
        llm::GatewayConfig gcfg;
        gcfg.parser_model = gcfg.translator_model = gcfg.reasoner_model =
            detail::resolve(model, nullptr, config, "model", "default");
        gcfg.retry = cfg.retry;
        gcfg.concurrency = concurrency;
        auto templates = prompts_dir.empty() ? llm::TemplateLibrary::builtin()
                                             : llm::TemplateLibrary::with_overrides(prompts_dir);
        gateway = std::make_shared<llm::Gateway>(backend, gcfg, std::move(templates));
      } else {
        throw Error(Errc::InvalidInput, "no model endpoint: pass --stub, --base-url, or set LLM_BASE_URL");
      }

      pipeline::Pipeline pipe(gateway, cfg);
      auto preds = pipe.run_subtask(dataset, subtask);
      pipeline::save_predictions(out_path, preds);
      if (recorder) recorder->recorded()->save(record_path);
      int failed = 0;
      for (const auto& p : preds) failed += p.diagnostics.failed;
      out << "wrote " << preds.size() << " predictions to " << out_path << " (" << failed << " failed)\n";
      return failed ? kExitPartial : kExitOk;
    }

    if (*evaluate) {
      auto preds = pipeline::load_predictions(pred_path);
      auto gold = pipeline::load_dataset(gold_path);
      auto report = eval::compute_report(preds, gold, {bootstrap, seed});
      if (!report_path.empty()) eval::emit_report(report_path, report);
      out << eval::summary_line(report) << "\n";
      return kExitOk;
    }

    if (*prove) {
      std::vector<fol::Sentence> ps;
      for (const auto& p : premises) ps.push_back(detail::parse_formula(p, formula_mode));
      auto c = detail::parse_formula(conclusion, formula_mode);
      prover::ProverProblem problem{prove_import ? aristotle::augment_existential_import(ps) : ps, c};
      auto verdict = prover::decide(problem, prover_cfg);
      switch (verdict.status()) {
        case prover::Status::Entailed:
          out << "ENTAILED\n";
          return kExitOk;
        case prover::Status::NotEntailed:
          out << "NOT ENTAILED\n";
          if (verdict.countermodel()) out << "countermodel: " << verdict.countermodel()->to_string() << "\n";
          return kExitNotEntailed;
        case prover::Status::Unsupported:
          err << "error: unsupported problem: " << verdict.detail() << "\n";
          return kExitFatal;
      }
    }

    if (*parse) {
      auto s = detail::parse_formula(text, parse_mode);
      out << "latex: " << fol::render_latex(s) << "\n";
      out << "prover9: " << fol::render_prover9(s) << "\n";
      return kExitOk;
    }

    if (*simulate) {
      std::vector<double> as;
      for (const auto& a : detail::split_list(grid)) as.push_back(std::stod(a));
      auto rows = eval::ce_significance_threshold(n_per_group, as, trials, seed, q);
      std::ofstream csv(out_path);
      if (!csv) throw Error(Errc::Io, "cannot write " + out_path);
      eval::write_thresholds_csv(csv, rows);
      if (!scatter_path.empty()) {
        std::ofstream sc(scatter_path);
        if (!sc) throw Error(Errc::Io, "cannot write " + scatter_path);
        sc << "a,accuracy,ce\n";
        for (std::size_t i = 0; i < as.size(); ++i)
          eval::write_trials_csv(sc, as[i], eval::simulate_unbiased_ce({as[i], n_per_group, trials, seed + i}));
      }
      out << "wrote " << rows.size() << " threshold rows to " << out_path << "\n";
      return kExitOk;
    }

    if (*sensitivity) {
      std::vector<int> ns;
      for (const auto& n : detail::split_list(n_totals)) ns.push_back(std::stoi(n));
      std::ofstream csv(out_path);
      if (!csv) throw Error(Errc::Io, "cannot write " + out_path);
      eval::write_flip_csv(csv, ns);
      if (!curves_path.empty()) {
        std::ofstream cv(curves_path);
        if (!cv) throw Error(Errc::Io, "cannot write " + curves_path);
        eval::write_curves_csv(cv, eval::sensitivity_curves({50, 60, 70, 80, 90, 100}, 20.0, 0.5));
      }
      out << "wrote " << ns.size() << " sensitivity rows to " << out_path << "\n";
      return kExitOk;
    }

    if (*synthesize) {
      auto base = pipeline::load_dataset(base_path);
      auto pool = pipeline::load_dataset(pool_path);
      auto synth = eval::synthesize_subtask2(base, pool, {k_min, k_max, seed});
      pipeline::save_dataset(out_path, synth);
      out << "wrote " << synth.size() << " samples to " << out_path << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace sylo::cli
