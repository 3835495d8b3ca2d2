#include <catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "support/gold_backend.hpp"
#include "sylo/llm/gateway.hpp"
#include "sylo/llm/http_backend.hpp"
#include "sylo/llm/stub_backend.hpp"

using namespace sylo;
using namespace sylo::llm;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

/// Answers every call on one template from a fixed list, recording temperatures.
class SequenceBackend final : public ChatBackend {
 public:
  explicit SequenceBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const ChatRequest& r) override {
    std::lock_guard lock(mu_);
    temperatures.push_back(r.temperature);
    attempts.push_back(r.attempt);
    prompts.push_back(r.prompt_text());
    names.push_back(r.template_name);
    auto i = std::min(next_++, replies_.size() - 1);
    return replies_[i];
  }
  std::vector<double> temperatures;
  std::vector<int> attempts;
  std::vector<std::string> prompts;
  std::vector<std::string> names;

 private:
  std::mutex mu_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

const std::vector<std::string> kBirds = {"All birds are animals.", "No fish are birds.", "No fish are animals."};

std::map<std::string, std::string> bird_gold() {
  return {{kBirds[0], "\\forall x (bird(x) \\rightarrow animal(x))"},
          {kBirds[1], "\\neg \\exists x (fish(x) \\land bird(x))"},
          {kBirds[2], "\\neg \\exists x (fish(x) \\land animal(x))"}};
}

}  // namespace

TEST_CASE("builtin templates match the golden renderings", "[llm][templates][golden]") {
  const std::filesystem::path dir = std::filesystem::path(SYLO_TEST_DATA) / "golden" / "prompts";
  auto slots_json = json::parse(read_file(dir / "slots.json"));
  std::map<std::string, std::string> slots;
  for (auto& [k, v] : slots_json.items()) slots[k] = v.get<std::string>();

  auto lib = TemplateLibrary::builtin();
  int checked = 0;
  for (const auto& name : lib.names()) {
    INFO(name);
    auto golden = dir / (name + ".txt");
    REQUIRE(std::filesystem::exists(golden));
    CHECK(lib.render(name, slots) == read_file(golden));
    ++checked;
  }
  CHECK(checked == 12);
}

TEST_CASE("template rendering substitutes each slot once", "[llm][templates]") {
  PromptTemplate t("t", "A {a} and {b} and {c}", {"a", "b"});
  CHECK(t.render({{"a", "{b}"}, {"b", "x"}}) == "A {b} and x and {c}");
  CHECK(code_of([] { PromptTemplate("t", "no slots", {"a"}); }) == Errc::MissingSlot);
  CHECK(code_of([] { TemplateLibrary::builtin().get("nope"); }) == Errc::MissingSlot);
}

TEST_CASE("template overrides replace builtin bodies", "[llm][templates]") {
  auto dir = std::filesystem::temp_directory_path() / "sylo-prompt-overrides";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "end_to_end.txt") << "Judge:\n{syllogism}\n";
  auto lib = TemplateLibrary::with_overrides(dir);
  CHECK(lib.render(templates::kEndToEnd, {{"syllogism", "X"}}) == "Judge:\nX");
  std::ofstream(dir / "end_to_end.txt") << "no slot here";
  CHECK(code_of([&] { TemplateLibrary::with_overrides(dir); }) == Errc::MissingSlot);
  std::filesystem::remove_all(dir);
}

TEST_CASE("boxed and json extraction", "[llm][extract]") {
  CHECK(extract_boxed("so \\boxed{a} and \\boxed{\\forall x (p(x))}") == "\\forall x (p(x))");
  CHECK(extract_boxed("\\boxed{ {nested} }") == " {nested} ");
  CHECK(code_of([] { extract_boxed("no box"); }) == Errc::NoBoxedContent);

  CHECK(extract_json_object("Answer: ```json\n{\"valid\": true}\n```") == json{{"valid", true}});
  CHECK(extract_json_object("x [1, 2] y {\"a\": \"}\"}") == json{{"a", "}"}});
  CHECK(extract_json_object("[{\"k\": [1]}]") == json::parse("[{\"k\": [1]}]"));
  CHECK(code_of([] { extract_json_object("nothing {here"); }) == Errc::NoJsonFound);

  CHECK(code_of([] { require_fields(json{{"a", 1}}, {"a", "b"}); }) == Errc::SchemaMismatch);
  CHECK(json_boolean(json("true"), "f"));
  CHECK_FALSE(json_boolean(json(false), "f"));
  CHECK(code_of([] { json_boolean(json(1), "f"); }) == Errc::SchemaMismatch);
}

TEST_CASE("request wire format carries model, messages and temperature", "[llm][chat]") {
  auto r = user_request("m", "hello", 0.6, "parse_initial", 2);
  auto wire = r.to_wire();
  CHECK(wire == json{{"model", "m"},
                     {"messages", json::array({{{"role", "user"}, {"content", "hello"}}})},
                     {"temperature", 0.6}});
  r.temperature = 3.0;
  CHECK(code_of([&] { r.validate(); }) == Errc::InvalidInput);
}

TEST_CASE("multistep parsing retries with sampling temperature", "[llm][gateway][retry]") {
  auto seq = std::make_shared<SequenceBackend>(std::vector<std::string>{
      "garbage", "\\boxed{\\forall x (}", "\\boxed{\\forall x (bird(x) \\rightarrow animal(x))}"});
  Gateway gw(seq);
  auto mapping = gw.parse_syllogism_multistep({kBirds[0]});
  REQUIRE(mapping.size() == 1);
  CHECK(mapping[0].attempts == 3);
  CHECK(seq->temperatures == std::vector<double>{0.0, 0.6, 0.6});
  CHECK(seq->attempts == std::vector<int>{1, 2, 3});
}

TEST_CASE("multistep parsing gives up after the attempt budget", "[llm][gateway][retry]") {
  auto seq = std::make_shared<SequenceBackend>(std::vector<std::string>{"still garbage"});
  Gateway gw(seq);
  try {
    gw.parse_syllogism_multistep(kBirds);
    FAIL("expected ParseExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseExhausted);
    CHECK(std::string(e.what()).find("proposition 0") != std::string::npos);
  }
  CHECK(seq->temperatures.size() == 3);
}

TEST_CASE("multistep parsing threads history through later prompts", "[llm][gateway]") {
  auto gold = std::make_shared<testing::GoldFolBackend>(bird_gold());
  auto rec = std::make_shared<RecordingBackend>(gold);
  Gateway gw(rec);
  auto m = gw.parse_syllogism_multistep({kBirds[0], kBirds[1], kBirds[0], kBirds[2]});
  REQUIRE(m.size() == 4);
  CHECK(m[2].attempts == 0);
  CHECK(m[2].sentence == m[0].sentence);
  CHECK(gold->calls(std::string(templates::kParseInitial)) == 1);
  CHECK(gold->calls(std::string(templates::kParseDefault)) == 2);

  // Replaying the recording reproduces the mapping without the gold model.
  Gateway replay(rec->recorded());
  auto again = replay.parse_syllogism_multistep({kBirds[0], kBirds[1], kBirds[0], kBirds[2]});
  for (std::size_t i = 0; i < 4; ++i) CHECK(again[i].sentence == m[i].sentence);
}

TEST_CASE("prover9 strategy parses prover9 syntax", "[llm][gateway]") {
  Gateway gw(std::make_shared<testing::GoldFolBackend>(bird_gold()));
  auto m = gw.parse_syllogism_prover9(kBirds);
  REQUIRE(m.size() == 3);
  CHECK(m[1].sentence == fol::parse_latex_formula(bird_gold().at(kBirds[1])));
}

TEST_CASE("single-step parsing", "[llm][gateway]") {
  auto text = format_syllogism({kBirds[0], kBirds[1]}, kBirds[2]);
  Gateway gold(std::make_shared<testing::GoldFolBackend>(bird_gold()));
  auto m = gold.parse_syllogism_singlestep(text, 2);
  REQUIRE(m.size() == 3);
  CHECK(m[2].text == kBirds[2]);

  auto short_reply = std::make_shared<SequenceBackend>(
      std::vector<std::string>{R"J([{"proposition": "a", "fol_formula": "\\exists x (p(x))"}])J"});
  Gateway bad(short_reply);
  CHECK(code_of([&] { bad.parse_syllogism_singlestep(text, 2); }) == Errc::SchemaMismatch);
  CHECK(short_reply->temperatures.size() == 3);

  Gateway prose(std::make_shared<SequenceBackend>(std::vector<std::string>{"I cannot"}));
  CHECK(code_of([&] { prose.parse_syllogism_singlestep(text, 2); }) == Errc::ParseExhausted);
}

TEST_CASE("translation with and without correction", "[llm][gateway][translate]") {
  auto ok = std::make_shared<SequenceBackend>(
      std::vector<std::string>{"All birds are animals.", "{\"feedback\": \"fine\", \"correct\": true}"});
  auto out = Gateway(ok).translate_syllogism("Alle Vögel sind Tiere.");
  CHECK(out.translation == "All birds are animals.");
  CHECK_FALSE(out.corrected);
  CHECK(ok->names == std::vector<std::string>{"translate", "translate_evaluate"});

  auto fix = std::make_shared<SequenceBackend>(std::vector<std::string>{
      "All bird is animal.", "{\"feedback\": \"use plural\", \"correct\": \"false\"}", "All birds are animals."});
  auto fixed = Gateway(fix).translate_syllogism("Alle Vögel sind Tiere.");
  CHECK(fixed.corrected);
  CHECK_FALSE(fixed.self_eval_correct);
  CHECK(fixed.translation == "All birds are animals.");
  CHECK(fix->prompts[2].find("use plural") != std::string::npos);

  auto silent = std::make_shared<SequenceBackend>(std::vector<std::string>{"x", "no verdict"});
  CHECK(code_of([&] { Gateway(silent).translate_syllogism("y"); }) == Errc::NoJsonFound);
}

TEST_CASE("end-to-end classification", "[llm][gateway]") {
  auto text = format_syllogism({kBirds[0], kBirds[1]}, kBirds[2]);
  auto yes = std::make_shared<SequenceBackend>(
      std::vector<std::string>{"{\"valid\": true, \"relevant_premises\": [1, 0, 1]}"});
  auto r = Gateway(yes).end_to_end_classify(text, true, 2);
  CHECK(r.valid);
  CHECK(r.relevant == std::vector<int>{0, 1});

  auto no = std::make_shared<SequenceBackend>(std::vector<std::string>{"{\"valid\": false}"});
  auto n = Gateway(no).end_to_end_classify(text, true, 2);
  CHECK_FALSE(n.valid);
  CHECK(n.relevant == std::vector<int>{});
  CHECK_FALSE(Gateway(no).end_to_end_classify(text, false).relevant);

  auto oob = std::make_shared<SequenceBackend>(std::vector<std::string>{"{\"valid\": true, \"relevant_premises\": [5]}"});
  CHECK(code_of([&] { Gateway(oob).end_to_end_classify(text, true, 2); }) == Errc::IndexOutOfRange);
}

TEST_CASE("model-as-prover answers", "[llm][gateway]") {
  auto ask = [](const std::string& reply) {
    Gateway gw(std::make_shared<SequenceBackend>(std::vector<std::string>{reply}));
    return gw.llm_prove({"\\forall x (p(x))"}, "\\exists x (p(x))");
  };
  CHECK(ask("\\boxed{True}"));
  CHECK_FALSE(ask("reasoning... \\boxed{\\text{false}}"));
  CHECK(code_of([&] { ask("\\boxed{maybe}"); }) == Errc::NotABoolean);
  CHECK(code_of([&] { ask("true"); }) == Errc::NoBoxedContent);
}

TEST_CASE("model-as-retriever answers", "[llm][gateway]") {
  auto ask = [](const std::string& reply) {
    Gateway gw(std::make_shared<SequenceBackend>(std::vector<std::string>{reply}));
    return gw.llm_retrieve_relevant({"a", "b", "c"}, "d");
  };
  CHECK(ask("[2, 0]") == std::vector<int>{0, 2});
  CHECK(code_of([&] { ask("[3]"); }) == Errc::IndexOutOfRange);
  CHECK(code_of([&] { ask("{\"a\": 1}"); }) == Errc::SchemaMismatch);
}

TEST_CASE("stub fixtures round-trip and index responses by attempt", "[llm][stub]") {
  StubBackend stub;
  auto r1 = user_request("m", "prompt", 0.0, "parse_initial", 1);
  auto r2 = user_request("m", "prompt", 0.6, "parse_initial", 2);
  stub.record(r1, "first");
  stub.record(r2, "second");
  auto copy = StubBackend::from_json(stub.to_json());
  CHECK(copy.complete(r1) == "first");
  CHECK(copy.complete(r2) == "second");
  auto r5 = user_request("m", "prompt", 0.6, "parse_initial", 5);
  CHECK(copy.complete(r5) == "second");
  CHECK(copy.calls("parse_initial") == 3);
  CHECK(code_of([&] { copy.complete(user_request("m", "other", 0.0, "parse_initial")); }) == Errc::StubMiss);

  // Entries may carry the raw prompt instead of its hash.
  auto doc = json::parse(R"({"entries": [{"template": "llm_prover", "prompt": "q", "responses": ["\\boxed{true}"]}]})");
  auto from_prompt = StubBackend::from_json(doc);
  CHECK(from_prompt.complete(user_request("m", "q", 0.0, "llm_prover")) == "\\boxed{true}");

  auto path = std::filesystem::temp_directory_path() / "sylo-stub.json";
  stub.save(path);
  CHECK(StubBackend::load(path)->complete(r2) == "second");
  std::filesystem::remove(path);
}

TEST_CASE("bounded backend caps concurrent calls", "[llm][concurrency]") {
  struct Probe final : ChatBackend {
    std::atomic<int> in_flight{0}, peak{0};
    std::string complete(const ChatRequest&) override {
      int now = ++in_flight;
      int seen = peak.load();
      while (now > seen && !peak.compare_exchange_weak(seen, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      --in_flight;
      return "ok";
    }
  };
  auto probe = std::make_shared<Probe>();
  BoundedBackend bounded(probe, 3);
  std::vector<std::jthread> threads;
  for (int i = 0; i < 16; ++i)
    threads.emplace_back([&] {
      for (int k = 0; k < 4; ++k) bounded.complete(user_request("m", "p", 0.0));
    });
  threads.clear();
  CHECK(probe->peak.load() <= 3);
  CHECK(probe->peak.load() >= 2);
}

TEST_CASE("http backend against a local endpoint", "[llm][http]") {
  httplib::Server server;
  std::atomic<int> mode{0};
  json last_body;
  std::string last_auth;
  std::mutex mu;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard lock(mu);
      last_body = json::parse(req.body);
      last_auth = req.get_header_value("Authorization");
    }
    switch (mode.load()) {
      case 0:
        res.set_content(R"({"choices": [{"message": {"role": "assistant", "content": "\\boxed{true}"}}]})",
                        "application/json");
        break;
      case 1:
        res.status = 500;
        res.set_content("boom", "text/plain");
        break;
      case 2: res.set_content("{\"choices\": []}", "application/json"); break;
      default: res.set_content("not json", "text/plain"); break;
    }
  });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::jthread serve([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.api_key = "secret";
  HttpChatBackend backend(cfg);
  auto req = user_request("gpt-test", "hello", 0.0, "llm_prover");

  CHECK(backend.complete(req) == "\\boxed{true}");
  {
    std::lock_guard lock(mu);
    CHECK(last_body == req.to_wire());
    CHECK(last_auth == "Bearer secret");
  }
  mode = 1;
  CHECK(code_of([&] { backend.complete(req); }) == Errc::HttpStatusError);
  mode = 2;
  CHECK(code_of([&] { backend.complete(req); }) == Errc::MalformedResponse);
  mode = 3;
  CHECK(code_of([&] { backend.complete(req); }) == Errc::MalformedResponse);
  server.stop();
  serve.join();

  HttpConfig dead;
  dead.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  dead.connect_timeout = std::chrono::milliseconds(500);
  CHECK(code_of([&] { HttpChatBackend(dead).complete(req); }) == Errc::NetworkError);

  HttpConfig tls;
  tls.base_url = "https://api.example.com/v1";
  CHECK(code_of([&] { HttpChatBackend{tls}; }) == Errc::InvalidInput);
}
