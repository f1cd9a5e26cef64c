#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metarank/extrapolation.hpp"
#include "metarank/heterogeneity.hpp"
#include "metarank/judge.hpp"
#include "metarank/reliability.hpp"
#include "metarank/retrieval.hpp"

namespace metarank {

struct EvaluationConfig {
    int top_n = 4;
};

struct JudgeConfig {
    std::string type = "mock";  // "mock" or "http"
    std::string fixture;        // mock: path to the judgment table
    HttpJudgeConfig http;
};

/// Stage bypass switches for ablation runs.
struct AblationConfig {
    bool no_reliability = false;     // every r_i forced to 1
    bool no_heterogeneity = false;   // reports computed, nothing dropped
    bool no_extrapolation = false;   // every T forced to 1
};

struct PipelineConfig {
    std::uint64_t seed = 0;
    RetrievalConfig retrieval;
    ReliabilityConfig reliability;
    HeterogeneityConfig heterogeneity;
    ExtrapolationConfig extrapolation;
    EvaluationConfig evaluation;
    JudgeConfig judge;
    AblationConfig ablation;
    std::string grade_table;  // optional path overriding the built-in table

    void validate() const;

    /// Parse / emit round-trips to identity.
    static PipelineConfig from_json_text(const std::string& text);
    static PipelineConfig load(const std::string& path,
                               const std::vector<std::string>& overrides = {});
    std::string to_json_text() const;
};

/// Applies "dotted.key=value" overrides to a config JSON document.
std::string apply_overrides(const std::string& config_text,
                            const std::vector<std::string>& overrides);

}  // namespace metarank
