#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/corpus.hpp"
#include "support/gold_backend.hpp"
#include "sylo/cli/commands.hpp"

using namespace sylo;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result sylo_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sylo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "sylo-cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kMajor = "\\forall x (m(x) \\rightarrow p(x))";
const std::string kMinor = "\\forall x (s(x) \\rightarrow m(x))";
const std::string kConclusion = "\\forall x (s(x) \\rightarrow p(x))";

}  // namespace

TEST_CASE("prove reports entailment through the exit code", "[cli][prove]") {
  auto ok = sylo_cli({"prove", "-p", kMajor, "-p", kMinor, "-c", kConclusion});
  CHECK(ok.code == cli::kExitOk);
  CHECK(ok.out == "ENTAILED\n");

  auto missing = sylo_cli({"prove", "-p", kMajor, "-c", kConclusion});
  CHECK(missing.code == cli::kExitNotEntailed);
  CHECK(missing.out.rfind("NOT ENTAILED\ncountermodel: ", 0) == 0);

  auto enumerated = sylo_cli({"prove", "-p", kMajor, "-p", kMinor, "-c", kConclusion, "--engine", "enumeration"});
  CHECK(enumerated.code == cli::kExitOk);

  auto p9 = sylo_cli({"prove", "--mode", "prover9", "-p", "all x (m(x) -> p(x))", "-p", "all x (s(x) -> m(x))", "-c",
                      "all x (s(x) -> p(x))"});
  CHECK(p9.code == cli::kExitOk);
}

TEST_CASE("prove honours existential import", "[cli][prove]") {
  // Darapti: valid only when the middle term is non-empty.
  std::vector<std::string> args = {"prove", "-p", "\\forall x (m(x) \\rightarrow p(x))", "-p",
                                   "\\forall x (m(x) \\rightarrow s(x))", "-c", "\\exists x (s(x) \\land p(x))"};
  CHECK(sylo_cli(args).code == cli::kExitNotEntailed);
  args.push_back("--import");
  CHECK(sylo_cli(args).code == cli::kExitOk);
}

TEST_CASE("prove errors", "[cli][prove]") {
  auto bad = sylo_cli({"prove", "-p", "\\forall x (m(x)", "-c", kConclusion});
  CHECK(bad.code == cli::kExitFatal);
  CHECK(bad.err.rfind("error: ", 0) == 0);

  auto relational = sylo_cli({"prove", "-p", "\\forall x (\\exists y (loves(x, y)))", "-c", kConclusion});
  CHECK(relational.code == cli::kExitFatal);
  CHECK(relational.err.find("unsupported") != std::string::npos);

  CHECK(sylo_cli({"prove", "-p", kMajor}).code == cli::kExitUsage);
  CHECK(sylo_cli({"prove", "-p", kMajor, "-c", kConclusion, "--engine", "vampire"}).code == cli::kExitFatal);
  CHECK(sylo_cli({}).code == cli::kExitUsage);
  CHECK(sylo_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(sylo_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("parse prints both renderings", "[cli][parse]") {
  auto r = sylo_cli({"parse", "--text", "\\boxed{\\forall x (p(x) \\rightarrow q(x))}"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == "latex: \\forall x (p(x) \\rightarrow q(x))\nprover9: all x (p_pred(x) -> q_pred(x)).\n");
  auto back = sylo_cli({"parse", "--mode", "prover9", "--text", "all x (p_pred(x) -> q_pred(x))."});
  CHECK(back.code == cli::kExitOk);
  CHECK(back.out.rfind("latex: \\forall x (p_pred(x) \\rightarrow q_pred(x))\n", 0) == 0);
}

TEST_CASE("run, evaluate and replay with a stub fixture", "[cli][run]") {
  auto dir = scratch();
  auto corpus = testing::syllogism_corpus(96, 17);
  pipeline::save_dataset(dir / "data.jsonl", corpus.samples);

  auto rec = std::make_shared<llm::RecordingBackend>(std::make_shared<testing::GoldFolBackend>(corpus.gold_latex));
  pipeline::Pipeline(std::make_shared<llm::Gateway>(rec), {}).run_subtask(corpus.samples, 1);
  rec->recorded()->save(dir / "stub.json");

  auto run = sylo_cli({"run", "--subtask", "1", "--data", (dir / "data.jsonl").string(), "--out",
                       (dir / "pred.jsonl").string(), "--stub", (dir / "stub.json").string(), "--workers", "4"});
  INFO(run.err);
  REQUIRE(run.code == cli::kExitOk);
  CHECK(run.out.find("wrote 96 predictions") != std::string::npos);
  CHECK(pipeline::load_predictions(dir / "pred.jsonl").size() == 96);

  auto eval = sylo_cli({"evaluate", "--pred", (dir / "pred.jsonl").string(), "--gold", (dir / "data.jsonl").string(),
                        "--bootstrap", "200", "--out", (dir / "report.json").string()});
  INFO(eval.err);
  REQUIRE(eval.code == cli::kExitOk);
  CHECK(eval.out.rfind("acc=100.00 ", 0) == 0);
  CHECK(eval.out.find("ce=0.00 cs=100.00") != std::string::npos);
  auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["accuracy"] == 100.0);
  CHECK(report["ci"]["accuracy"].size() == 2);

  // A second run over the same fixture writes identical predictions.
  auto again = sylo_cli({"run", "--subtask", "1", "--data", (dir / "data.jsonl").string(), "--out",
                         (dir / "pred2.jsonl").string(), "--stub", (dir / "stub.json").string(), "--workers", "1"});
  CHECK(again.code == cli::kExitOk);
  CHECK(slurp(dir / "pred.jsonl") == slurp(dir / "pred2.jsonl"));
}

TEST_CASE("run exit codes", "[cli][run]") {
  auto dir = scratch();
  auto corpus = testing::syllogism_corpus(8, 41);
  pipeline::save_dataset(dir / "small.jsonl", corpus.samples);

  // No endpoint at all.
  auto none = sylo_cli({"run", "--subtask", "1", "--data", (dir / "small.jsonl").string(), "--out",
                        (dir / "none.jsonl").string(), "--base-url", ""});
  if (!std::getenv("LLM_BASE_URL")) {
    CHECK(none.code == cli::kExitFatal);
    CHECK(none.err.find("no model endpoint") != std::string::npos);
  }

  // A fixture that only covers the first half of the samples.
  std::vector<pipeline::Syllogism> half(corpus.samples.begin(), corpus.samples.begin() + 4);
  auto rec = std::make_shared<llm::RecordingBackend>(std::make_shared<testing::GoldFolBackend>(corpus.gold_latex));
  pipeline::Pipeline(std::make_shared<llm::Gateway>(rec), {}).run_subtask(half, 1);
  rec->recorded()->save(dir / "half.json");
  auto partial = sylo_cli({"run", "--subtask", "1", "--data", (dir / "small.jsonl").string(), "--out",
                           (dir / "partial.jsonl").string(), "--stub", (dir / "half.json").string()});
  CHECK(partial.code == cli::kExitPartial);
  auto preds = pipeline::load_predictions(dir / "partial.jsonl");
  REQUIRE(preds.size() == 8);
  int failed = 0;
  for (const auto& p : preds) failed += p.diagnostics.failed;
  CHECK(failed >= 1);
  CHECK(failed <= 4);

  CHECK(sylo_cli({"run", "--subtask", "5", "--data", "x", "--out", "y"}).code == cli::kExitUsage);
  CHECK(sylo_cli({"run", "--subtask", "1", "--data", (dir / "missing.jsonl").string(), "--out", "y", "--stub",
                  (dir / "half.json").string()})
            .code == cli::kExitFatal);
}

TEST_CASE("simulate, sensitivity and synthesize write their outputs", "[cli][tools]") {
  auto dir = scratch();
  auto sim = sylo_cli({"simulate", "--trials", "2000", "--grid", "0.9,1.0", "--out", (dir / "thr.csv").string(),
                       "--scatter", (dir / "scatter.csv").string()});
  INFO(sim.err);
  REQUIRE(sim.code == cli::kExitOk);
  auto thr = slurp(dir / "thr.csv");
  CHECK(thr.rfind("a,ce_threshold,ce_mean,ce_closed_form\n0.9,", 0) == 0);
  CHECK(thr.find("\n1,0,0,0\n") != std::string::npos);
  CHECK(slurp(dir / "scatter.csv").rfind("a,accuracy,ce\n", 0) == 0);

  auto sens = sylo_cli({"sensitivity", "--n-total", "4,1000", "--out", (dir / "flip.csv").string(), "--curves",
                        (dir / "curves.csv").string()});
  REQUIRE(sens.code == cli::kExitOk);
  auto flip = slurp(dir / "flip.csv");
  CHECK(flip.find("\n1000,99.9,0.2,100,84.49") != std::string::npos);
  CHECK(slurp(dir / "curves.csv").rfind("accuracy,ce,cs\n", 0) == 0);
  CHECK(sylo_cli({"sensitivity", "--n-total", "10", "--out", (dir / "bad.csv").string()}).code == cli::kExitFatal);

  auto base = testing::syllogism_corpus(12, 3);
  pipeline::save_dataset(dir / "base.jsonl", base.samples);
  pipeline::save_dataset(dir / "pool.jsonl", testing::distractor_pool().samples);
  std::vector<std::string> args = {"synthesize", "--base", (dir / "base.jsonl").string(), "--pool",
                                   (dir / "pool.jsonl").string(), "--seed", "5", "--out"};
  auto a = args, b = args;
  a.push_back((dir / "synth_a.jsonl").string());
  b.push_back((dir / "synth_b.jsonl").string());
  REQUIRE(sylo_cli(a).code == cli::kExitOk);
  REQUIRE(sylo_cli(b).code == cli::kExitOk);
  CHECK(slurp(dir / "synth_a.jsonl") == slurp(dir / "synth_b.jsonl"));
  CHECK(pipeline::load_dataset(dir / "synth_a.jsonl").size() == 12);
}
