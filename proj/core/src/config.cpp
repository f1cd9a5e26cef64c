#include "metarank/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "metarank/errors.hpp"

namespace metarank {

using nlohmann::json;

void PipelineConfig::validate() const {
    retrieval.validate();
    reliability.validate();
    heterogeneity.validate();
    extrapolation.validate();
    if (evaluation.top_n <= 0) throw ConfigError("evaluation.top_n must be positive");
    if (judge.type != "mock" && judge.type != "http")
        throw ConfigError("judge.type must be 'mock' or 'http'");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false, true);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("config is not a JSON object");

    PipelineConfig cfg;
    try {
        read(j, "seed", cfg.seed);
        read(j, "grade_table", cfg.grade_table);
        if (j.contains("retrieval")) {
            const json& r = j["retrieval"];
            read(r, "per_field_top_k", cfg.retrieval.per_field_top_k);
            read(r, "final_count", cfg.retrieval.final_count);
            if (r.contains("selection_mode"))
                cfg.retrieval.selection_mode =
                    selection_mode_from_string(r["selection_mode"].get<std::string>());
            cfg.retrieval.seed = cfg.seed;
            read(r, "seed", cfg.retrieval.seed);
        } else {
            cfg.retrieval.seed = cfg.seed;
        }
        if (j.contains("reliability")) {
            const json& r = j["reliability"];
            read(r, "penalty", cfg.reliability.penalty);
            read(r, "tier_count", cfg.reliability.tier_count);
        }
        if (j.contains("heterogeneity")) {
            const json& h = j["heterogeneity"];
            read(h, "sigma", cfg.heterogeneity.sigma);
            read(h, "m_threshold", cfg.heterogeneity.m_threshold);
            read(h, "r_cutoff", cfg.heterogeneity.r_cutoff);
            if (h.contains("strategy"))
                cfg.heterogeneity.strategy =
                    heterogeneity_strategy_from_string(h["strategy"].get<std::string>());
        }
        if (j.contains("extrapolation")) {
            const json& e = j["extrapolation"];
            read(e, "alpha", cfg.extrapolation.alpha);
            read(e, "beta", cfg.extrapolation.beta);
            read(e, "gamma", cfg.extrapolation.gamma);
            read(e, "ep_penalty", cfg.extrapolation.ep_penalty);
            read(e, "ep_bonus", cfg.extrapolation.ep_bonus);
            if (e.contains("strategy"))
                cfg.extrapolation.strategy =
                    extrapolation_strategy_from_string(e["strategy"].get<std::string>());
        }
        if (j.contains("evaluation")) read(j["evaluation"], "top_n", cfg.evaluation.top_n);
        if (j.contains("judge")) {
            const json& g = j["judge"];
            read(g, "type", cfg.judge.type);
            read(g, "fixture", cfg.judge.fixture);
            read(g, "url", cfg.judge.http.url);
            read(g, "token", cfg.judge.http.token);
            read(g, "max_retries", cfg.judge.http.max_retries);
            read(g, "timeout_ms", cfg.judge.http.timeout_ms);
            read(g, "max_in_flight", cfg.judge.http.max_in_flight);
            read(g, "fail_open", cfg.judge.http.fail_open);
        }
        if (j.contains("ablation")) {
            const json& a = j["ablation"];
            read(a, "no_reliability", cfg.ablation.no_reliability);
            read(a, "no_heterogeneity", cfg.ablation.no_heterogeneity);
            read(a, "no_extrapolation", cfg.ablation.no_extrapolation);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string PipelineConfig::to_json_text() const {
    json j{
        {"seed", seed},
        {"grade_table", grade_table},
        {"retrieval",
         {{"per_field_top_k", retrieval.per_field_top_k},
          {"final_count", retrieval.final_count},
          {"selection_mode", to_string(retrieval.selection_mode)},
          {"seed", retrieval.seed}}},
        {"reliability",
         {{"penalty", reliability.penalty}, {"tier_count", reliability.tier_count}}},
        {"heterogeneity",
         {{"sigma", heterogeneity.sigma},
          {"m_threshold", heterogeneity.m_threshold},
          {"r_cutoff", heterogeneity.r_cutoff},
          {"strategy", to_string(heterogeneity.strategy)}}},
        {"extrapolation",
         {{"alpha", extrapolation.alpha},
          {"beta", extrapolation.beta},
          {"gamma", extrapolation.gamma},
          {"strategy", to_string(extrapolation.strategy)},
          {"ep_penalty", extrapolation.ep_penalty},
          {"ep_bonus", extrapolation.ep_bonus}}},
        {"evaluation", {{"top_n", evaluation.top_n}}},
        {"judge",
         {{"type", judge.type},
          {"fixture", judge.fixture},
          {"url", judge.http.url},
          {"token", judge.http.token},
          {"max_retries", judge.http.max_retries},
          {"timeout_ms", judge.http.timeout_ms},
          {"max_in_flight", judge.http.max_in_flight},
          {"fail_open", judge.http.fail_open}}},
        {"ablation",
         {{"no_reliability", ablation.no_reliability},
          {"no_heterogeneity", ablation.no_heterogeneity},
          {"no_extrapolation", ablation.no_extrapolation}}},
    };
    return j.dump(2);
}

std::string apply_overrides(const std::string& config_text,
                            const std::vector<std::string>& overrides) {
    json j = json::parse(config_text, nullptr, false, true);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("config is not a JSON object");
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override must be dotted.key=value: " + ov);
        const std::string key = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);

        // Dotted path -> JSON pointer.
        std::string pointer = "/";
        for (char c : key) pointer += (c == '.') ? '/' : c;

        json parsed = json::parse(value, nullptr, false);
        if (parsed.is_discarded()) parsed = value;  // bare strings stay strings
        j[json::json_pointer(pointer)] = std::move(parsed);
    }
    return j.dump();
}

PipelineConfig PipelineConfig::load(const std::string& path,
                                    const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!overrides.empty()) text = apply_overrides(text, overrides);
    return from_json_text(text);
}

}  // namespace metarank
