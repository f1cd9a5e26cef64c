#include "metarank/judge.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "metarank/errors.hpp"

namespace metarank {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

StanceLabel stance_from_string(const std::string& s) {
    const std::string t = lower(trim(s));
    if (t == "support") return StanceLabel::Support;
    if (t == "oppose") return StanceLabel::Oppose;
    if (t == "irrelevant") return StanceLabel::Irrelevant;
    throw JudgeError("undecodable stance token: '" + s + "'");
}

std::string to_string(StanceLabel label) {
    switch (label) {
        case StanceLabel::Support: return "Support";
        case StanceLabel::Oppose: return "Oppose";
        default: return "Irrelevant";
    }
}

MethodologyFlags methodology_from_string(const std::string& s) {
    const std::string t = lower(trim(s));
    if (t.size() != 4 || t.find_first_not_of("yn") != std::string::npos)
        throw JudgeError("undecodable methodology reply: '" + s + "'");
    return MethodologyFlags{t[0] == 'y', t[1] == 'y', t[2] == 'y', t[3] == 'y'};
}

ExtrapolabilityCategory extrapolability_from_string(const std::string& s) {
    const std::string t = lower(trim(s));
    if (t == "noconditions") return ExtrapolabilityCategory::NoConditions;
    if (t == "unclearconditions") return ExtrapolabilityCategory::UnclearConditions;
    if (t == "applicableconditions") return ExtrapolabilityCategory::ApplicableConditions;
    throw JudgeError("undecodable extrapolability token: '" + s + "'");
}

std::string to_string(ExtrapolabilityCategory cat) {
    switch (cat) {
        case ExtrapolabilityCategory::NoConditions: return "NoConditions";
        case ExtrapolabilityCategory::ApplicableConditions: return "ApplicableConditions";
        default: return "UnclearConditions";
    }
}

// ---------------------------------------------------------------------------
// MockJudge

MockJudge MockJudge::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open judge fixture: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

MockJudge MockJudge::from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ValidationError("judge fixture is not a JSON object");
    MockJudge judge;
    if (j.contains("stance"))
        for (auto& [key, value] : j["stance"].items())
            judge.stance_[key] = stance_from_string(value.get<std::string>());
    if (j.contains("methodology"))
        for (auto& [key, value] : j["methodology"].items())
            judge.methodology_[key] = methodology_from_string(value.get<std::string>());
    if (j.contains("pio"))
        for (auto& [key, value] : j["pio"].items()) {
            if (!value.is_array() || value.size() != 3)
                throw ValidationError("pio fixture entry for '" + key + "' must be [p, i, o]");
            judge.pio_[key] = PioScores{value[0].get<double>(), value[1].get<double>(),
                                        value[2].get<double>()};
        }
    if (j.contains("extrapolability"))
        for (auto& [key, value] : j["extrapolability"].items())
            judge.extrapolability_[key] = extrapolability_from_string(value.get<std::string>());
    return judge;
}

void MockJudge::set_stance(const std::string& article_id, const std::string& claim_id,
                           StanceLabel label) {
    stance_[article_id + "|" + claim_id] = label;
}
void MockJudge::set_methodology(const std::string& article_id, MethodologyFlags flags) {
    methodology_[article_id] = flags;
}
void MockJudge::set_pio(const std::string& article_id, PioScores scores) {
    pio_[article_id] = scores;
}
void MockJudge::set_extrapolability(const std::string& article_id, ExtrapolabilityCategory cat) {
    extrapolability_[article_id] = cat;
}

StanceLabel MockJudge::judge_stance(const Claim& claim, const ArticleRecord& article) {
    auto it = stance_.find(article.article_id + "|" + claim.claim_id);
    return it == stance_.end() ? StanceLabel::Irrelevant : it->second;
}

MethodologyFlags MockJudge::judge_methodology(const ArticleRecord& article) {
    auto it = methodology_.find(article.article_id);
    return it == methodology_.end() ? MethodologyFlags{} : it->second;
}

PioScores MockJudge::judge_pio(const std::string& background, const ArticleRecord& article) {
    if (background.empty()) return PioScores{1.0, 1.0, 1.0};
    auto it = pio_.find(article.article_id);
    return it == pio_.end() ? PioScores{1.0, 1.0, 1.0} : it->second;
}

ExtrapolabilityCategory MockJudge::judge_extrapolability(const std::string& /*background*/,
                                                         const ArticleRecord& article) {
    auto it = extrapolability_.find(article.article_id);
    return it == extrapolability_.end() ? ExtrapolabilityCategory::UnclearConditions : it->second;
}

// ---------------------------------------------------------------------------
// HttpJudge

namespace {

// Bounded-concurrency gate; C++20 counting_semaphore fixes its ceiling at
// compile time, so a small hand-rolled one is used instead.
class Gate {
public:
    explicit Gate(int slots) : slots_(slots) {}
    void acquire() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return slots_ > 0; });
        --slots_;
    }
    void release() {
        {
            std::lock_guard lock(mu_);
            ++slots_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int slots_;
};

struct GateGuard {
    Gate& gate;
    explicit GateGuard(Gate& g) : gate(g) { gate.acquire(); }
    ~GateGuard() { gate.release(); }
};

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

struct HttpJudge::Impl {
    HttpJudgeConfig cfg;
    std::string host;  // scheme://host:port
    std::string path;
    Gate gate;

    explicit Impl(HttpJudgeConfig c) : cfg(std::move(c)), gate(std::max(1, cfg.max_in_flight)) {
        if (cfg.url.empty())
            if (const char* env = std::getenv("METARANK_JUDGE_URL")) cfg.url = env;
        if (cfg.token.empty())
            if (const char* env = std::getenv("METARANK_JUDGE_TOKEN")) cfg.token = env;
        if (cfg.url.empty())
            throw ConfigError("HTTP judge needs a URL (config or METARANK_JUDGE_URL)");

        // Split scheme://authority from the request path.
        auto scheme_end = cfg.url.find("://");
        auto path_start =
            cfg.url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        if (path_start == std::string::npos) {
            host = cfg.url;
            path = "/";
        } else {
            host = cfg.url.substr(0, path_start);
            path = cfg.url.substr(path_start);
        }
    }
};

HttpJudge::HttpJudge(HttpJudgeConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
HttpJudge::~HttpJudge() = default;

std::optional<std::string> HttpJudge::call(const std::string& task, const std::string* claim_text,
                                           const std::string* background,
                                           const ArticleRecord& article) {
    json body{{"task", task},
              {"article",
               {{"title", article.title},
                {"abstract", article.abstract},
                {"mesh_terms", article.mesh_terms}}}};
    if (claim_text) body["claim"] = *claim_text;
    if (background) body["background"] = *background;
    const std::string payload = body.dump();

    GateGuard guard(impl_->gate);
    std::string last_error;
    for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
        httplib::Client client(impl_->host);
        client.set_connection_timeout(0, impl_->cfg.timeout_ms * 1000);
        client.set_read_timeout(0, impl_->cfg.timeout_ms * 1000);
        if (!impl_->cfg.token.empty()) client.set_bearer_token_auth(impl_->cfg.token);

        auto res = client.Post(impl_->path, payload, "application/json");
        if (!res) {
            last_error = "transport failure";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("result") || !reply["result"].is_string()) {
            last_error = "unparseable reply body";
            continue;
        }
        return reply["result"].get<std::string>();
    }
    if (!impl_->cfg.fail_open)
        throw JudgeError("judge endpoint failed for task '" + task + "': " + last_error);
    std::cerr << "[metarank] judge " << task << " failed (" << last_error
              << "); using neutral default\n";
    return std::nullopt;
}

StanceLabel HttpJudge::judge_stance(const Claim& claim, const ArticleRecord& article) {
    auto reply = call("stance", &claim.text, nullptr, article);
    if (!reply) return StanceLabel::Irrelevant;
    try {
        return stance_from_string(*reply);
    } catch (const JudgeError& e) {
        if (!impl_->cfg.fail_open) throw;
        std::cerr << "[metarank] " << e.what() << "; defaulting to Irrelevant\n";
        return StanceLabel::Irrelevant;
    }
}

MethodologyFlags HttpJudge::judge_methodology(const ArticleRecord& article) {
    auto reply = call("methodology", nullptr, nullptr, article);
    if (!reply) return MethodologyFlags{};
    try {
        return methodology_from_string(*reply);
    } catch (const JudgeError& e) {
        if (!impl_->cfg.fail_open) throw;
        std::cerr << "[metarank] " << e.what() << "; defaulting to all-pass flags\n";
        return MethodologyFlags{};
    }
}

PioScores HttpJudge::judge_pio(const std::string& background, const ArticleRecord& article) {
    auto reply = call("pio", nullptr, &background, article);
    if (!reply) return PioScores{0.5, 0.5, 0.5};
    double p, i, o;
    if (std::sscanf(reply->c_str(), " %lf , %lf , %lf", &p, &i, &o) != 3) {
        if (!impl_->cfg.fail_open)
            throw JudgeError("undecodable pio reply: '" + *reply + "'");
        std::cerr << "[metarank] undecodable pio reply '" << *reply << "'; using neutral 0.5s\n";
        return PioScores{0.5, 0.5, 0.5};
    }
    return PioScores{clamp01(p), clamp01(i), clamp01(o)};
}

ExtrapolabilityCategory HttpJudge::judge_extrapolability(const std::string& background,
                                                         const ArticleRecord& article) {
    auto reply = call("extrapolability", nullptr, &background, article);
    if (!reply) return ExtrapolabilityCategory::UnclearConditions;
    try {
        return extrapolability_from_string(*reply);
    } catch (const JudgeError& e) {
        if (!impl_->cfg.fail_open) throw;
        std::cerr << "[metarank] " << e.what() << "; defaulting to UnclearConditions\n";
        return ExtrapolabilityCategory::UnclearConditions;
    }
}

}  // namespace metarank
