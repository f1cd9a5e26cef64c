#include <atomic>
#include <thread>

#include "doctest.h"
#include "helpers.hpp"
#include "httplib.h"
#include "json.hpp"
#include "metarank/errors.hpp"
#include "metarank/judge.hpp"

using namespace metarank;
using testutil::make_article;

namespace {

Claim make_claim(const std::string& claim_id, const std::string& text = "aspirin lowers fever") {
    Claim c;
    c.claim_id = claim_id;
    c.query_id = "Q1";
    c.text = text;
    return c;
}

// One-endpoint judge server scripted per task; counts requests so retry
// behavior is observable.
class ScriptedServer {
public:
    explicit ScriptedServer(std::map<std::string, std::string> replies, int status = 200)
        : replies_(std::move(replies)), status_(status) {
        server_.Post("/judge", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            auto body = nlohmann::json::parse(req.body);
            last_task_ = body["task"].get<std::string>();
            res.status = status_;
            auto it = replies_.find(last_task_);
            const std::string result = it == replies_.end() ? "" : it->second;
            if (raw_body_.empty())
                res.set_content(nlohmann::json{{"result", result}}.dump(), "application/json");
            else
                res.set_content(raw_body_, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~ScriptedServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/judge"; }
    int requests() const { return requests_; }
    void set_raw_body(std::string body) { raw_body_ = std::move(body); }

private:
    std::map<std::string, std::string> replies_;
    std::string raw_body_;
    int status_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> requests_{0};
    std::string last_task_;
};

HttpJudgeConfig client_config(const std::string& url) {
    HttpJudgeConfig cfg;
    cfg.url = url;
    cfg.max_retries = 1;
    cfg.timeout_ms = 2000;
    return cfg;
}

}  // namespace

TEST_CASE("mock judge: table lookups and defaults") {
    MockJudge judge;
    judge.set_stance("A1", "C1", StanceLabel::Support);
    const auto a1 = make_article("A1", "t");
    const auto a9 = make_article("A9", "t");

    CHECK(judge.judge_stance(make_claim("C1"), a1) == StanceLabel::Support);
    CHECK(judge.judge_stance(make_claim("C2"), a1) == StanceLabel::Irrelevant);  // default
    CHECK(judge.judge_stance(make_claim("C1"), a9) == StanceLabel::Irrelevant);

    // methodology default: all true, zero penalties downstream
    CHECK(judge.judge_methodology(a1).failed_count() == 0);

    judge.set_pio("A2", PioScores{0.2, 0.9, 0.5});
    const auto a2 = make_article("A2", "t");
    CHECK(judge.judge_pio("elderly patients", a2) == PioScores{0.2, 0.9, 0.5});
    CHECK(judge.judge_pio("", a2) == PioScores{1.0, 1.0, 1.0});  // empty background

    judge.set_extrapolability("A3", ExtrapolabilityCategory::NoConditions);
    CHECK(judge.judge_extrapolability("b", make_article("A3", "t")) ==
          ExtrapolabilityCategory::NoConditions);
    CHECK(judge.judge_extrapolability("b", a1) == ExtrapolabilityCategory::UnclearConditions);
}

TEST_CASE("mock judge: fixture file round-trip") {
    testutil::TempDir dir("judge");
    const std::string path = dir.file("fixture.json", R"({
        "stance": {"A1|C1": "Support", "A2|C1": "oppose"},
        "methodology": {"A1": "YYNY"},
        "pio": {"A2": [0.2, 0.9, 0.5]},
        "extrapolability": {"A3": "ApplicableConditions"}
    })");
    MockJudge judge = MockJudge::from_file(path);
    CHECK(judge.judge_stance(make_claim("C1"), make_article("A1", "t")) == StanceLabel::Support);
    CHECK(judge.judge_stance(make_claim("C1"), make_article("A2", "t")) == StanceLabel::Oppose);
    CHECK(judge.judge_methodology(make_article("A1", "t")) ==
          MethodologyFlags{true, true, false, true});
    CHECK(judge.judge_extrapolability("b", make_article("A3", "t")) ==
          ExtrapolabilityCategory::ApplicableConditions);
}

TEST_CASE("positional methodology decoding") {
    CHECK(methodology_from_string("YYNY") == MethodologyFlags{true, true, false, true});
    CHECK(methodology_from_string("yynn") == MethodologyFlags{true, true, false, false});
    CHECK(methodology_from_string("NNNN").failed_count() == 4);
    CHECK_THROWS_AS(methodology_from_string("YY"), JudgeError);
    CHECK_THROWS_AS(methodology_from_string("YYXN"), JudgeError);
}

TEST_CASE("stance vocabulary is strict") {
    CHECK(stance_from_string("Oppose") == StanceLabel::Oppose);
    CHECK(stance_from_string(" SUPPORT ") == StanceLabel::Support);
    CHECK_THROWS_AS(stance_from_string("maybe"), JudgeError);
    CHECK_THROWS_AS(stance_from_string(""), JudgeError);
    CHECK_THROWS_AS(extrapolability_from_string("sometimes"), JudgeError);
}

TEST_CASE("http judge: protocol mapping") {
    ScriptedServer server({{"stance", "Oppose"},
                           {"methodology", "yyny"},
                           {"pio", "1.4, 0.9, -0.1"},
                           {"extrapolability", "NoConditions"}});
    HttpJudge judge(client_config(server.url()));
    const auto article = make_article("A1", "title", "abstract");

    CHECK(judge.judge_stance(make_claim("C1"), article) == StanceLabel::Oppose);
    CHECK(judge.judge_methodology(article) == MethodologyFlags{true, true, false, true});
    // out-of-range replies clamp into [0,1]
    CHECK(judge.judge_pio("background", article) == PioScores{1.0, 0.9, 0.0});
    CHECK(judge.judge_extrapolability("background", article) ==
          ExtrapolabilityCategory::NoConditions);
}

TEST_CASE("http judge: fail-open defaults after retries") {
    HttpJudgeConfig cfg = client_config("http://127.0.0.1:9/judge");  // nothing listens
    cfg.max_retries = 1;
    HttpJudge judge(cfg);
    const auto article = make_article("A1", "t");
    CHECK(judge.judge_stance(make_claim("C1"), article) == StanceLabel::Irrelevant);
    CHECK(judge.judge_methodology(article) == MethodologyFlags{});
    CHECK(judge.judge_pio("b", article) == PioScores{0.5, 0.5, 0.5});
    CHECK(judge.judge_extrapolability("b", article) == ExtrapolabilityCategory::UnclearConditions);
}

TEST_CASE("http judge: undecodable stance token falls back, not silently maps") {
    ScriptedServer server(std::map<std::string, std::string>{{"stance", "definitely"}});
    HttpJudge judge(client_config(server.url()));
    CHECK(judge.judge_stance(make_claim("C1"), make_article("A1", "t")) ==
          StanceLabel::Irrelevant);

    HttpJudgeConfig strict = client_config(server.url());
    strict.fail_open = false;
    HttpJudge strict_judge(strict);
    CHECK_THROWS_AS(strict_judge.judge_stance(make_claim("C1"), make_article("A1", "t")),
                    JudgeError);
}

TEST_CASE("http judge: closed endpoint throws when fail_open is off") {
    HttpJudgeConfig cfg = client_config("http://127.0.0.1:9/judge");
    cfg.fail_open = false;
    cfg.max_retries = 0;
    HttpJudge judge(cfg);
    CHECK_THROWS_AS(judge.judge_methodology(make_article("A1", "t")), JudgeError);
}

TEST_CASE("http judge: retries count requests") {
    ScriptedServer server({}, 500);
    HttpJudgeConfig cfg = client_config(server.url());
    cfg.max_retries = 2;
    HttpJudge judge(cfg);
    CHECK(judge.judge_stance(make_claim("C1"), make_article("A1", "t")) ==
          StanceLabel::Irrelevant);
    CHECK(server.requests() == 3);  // initial try + 2 retries
}
