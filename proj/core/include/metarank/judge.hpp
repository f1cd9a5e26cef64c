#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "metarank/claim.hpp"
#include "metarank/corpus.hpp"

namespace metarank {

enum class StanceLabel { Support, Oppose, Irrelevant };

StanceLabel stance_from_string(const std::string& s);  // strict, case-insensitive
std::string to_string(StanceLabel label);

/// Four independent yes/no methodology checks, in the fixed order
/// randomization, data integrity, freedom from bias, blinding.
struct MethodologyFlags {
    bool randomization_ok = true;
    bool data_integrity_ok = true;
    bool bias_free = true;
    bool blinding_ok = true;

    int failed_count() const {
        return (randomization_ok ? 0 : 1) + (data_integrity_ok ? 0 : 1) +
               (bias_free ? 0 : 1) + (blinding_ok ? 0 : 1);
    }
    bool operator==(const MethodologyFlags&) const = default;
};

/// Decodes a positional four-letter Y/N string, case-insensitive.
MethodologyFlags methodology_from_string(const std::string& s);

struct PioScores {
    double population = 1.0;
    double intervention = 1.0;
    double outcome = 1.0;
    bool operator==(const PioScores&) const = default;
};

enum class ExtrapolabilityCategory { NoConditions, UnclearConditions, ApplicableConditions };

ExtrapolabilityCategory extrapolability_from_string(const std::string& s);
std::string to_string(ExtrapolabilityCategory cat);

/// Every judgment the pipeline delegates to an LLM. Implementations must be
/// total: failures degrade to the documented neutral defaults, never abort.
/// Implementations must tolerate concurrent invocation.
class Judge {
public:
    virtual ~Judge() = default;

    /// Default on failure: Irrelevant.
    virtual StanceLabel judge_stance(const Claim& claim, const ArticleRecord& article) = 0;

    /// Default on failure: all four flags true.
    virtual MethodologyFlags judge_methodology(const ArticleRecord& article) = 0;

    /// Scores clamped into [0,1]; neutral (0.5, 0.5, 0.5) on failure.
    virtual PioScores judge_pio(const std::string& background, const ArticleRecord& article) = 0;

    /// Default on failure: UnclearConditions.
    virtual ExtrapolabilityCategory judge_extrapolability(const std::string& background,
                                                          const ArticleRecord& article) = 0;
};

/// Deterministic table-driven judge. Every judgment a test fixture needs is
/// stated explicitly; lookups that miss fall back to the neutral defaults
/// (Irrelevant / all-true / all-1.0 PIO / UnclearConditions). An empty
/// background always yields PIO (1,1,1): no restriction to compare against.
class MockJudge : public Judge {
public:
    MockJudge() = default;

    /// Fixture file: JSON object mapping task name to {key -> result}.
    /// Stance keys are "article_id|claim_id"; the other tasks key by
    /// article_id alone.
    static MockJudge from_file(const std::string& path);
    static MockJudge from_json_text(const std::string& text);

    void set_stance(const std::string& article_id, const std::string& claim_id, StanceLabel label);
    void set_methodology(const std::string& article_id, MethodologyFlags flags);
    void set_pio(const std::string& article_id, PioScores scores);
    void set_extrapolability(const std::string& article_id, ExtrapolabilityCategory cat);

    StanceLabel judge_stance(const Claim& claim, const ArticleRecord& article) override;
    MethodologyFlags judge_methodology(const ArticleRecord& article) override;
    PioScores judge_pio(const std::string& background, const ArticleRecord& article) override;
    ExtrapolabilityCategory judge_extrapolability(const std::string& background,
                                                  const ArticleRecord& article) override;

private:
    std::map<std::string, StanceLabel> stance_;
    std::map<std::string, MethodologyFlags> methodology_;
    std::map<std::string, PioScores> pio_;
    std::map<std::string, ExtrapolabilityCategory> extrapolability_;
};

struct HttpJudgeConfig {
    std::string url;    // falls back to METARANK_JUDGE_URL
    std::string token;  // falls back to METARANK_JUDGE_TOKEN
    int max_retries = 2;
    int timeout_ms = 10000;
    int max_in_flight = 4;
    bool fail_open = true;  // false: exhausted retries throw JudgeError
};

/// POSTs {task, claim?, background?, article} to an external judge endpoint
/// and decodes {"result": "..."} strictly. Bounded concurrency, per-call
/// timeout, retries, then the fail-open defaults (unless fail_open=false).
class HttpJudge : public Judge {
public:
    explicit HttpJudge(HttpJudgeConfig cfg);
    ~HttpJudge() override;

    StanceLabel judge_stance(const Claim& claim, const ArticleRecord& article) override;
    MethodologyFlags judge_methodology(const ArticleRecord& article) override;
    PioScores judge_pio(const std::string& background, const ArticleRecord& article) override;
    ExtrapolabilityCategory judge_extrapolability(const std::string& background,
                                                  const ArticleRecord& article) override;

private:
    std::optional<std::string> call(const std::string& task, const std::string* claim_text,
                                    const std::string* background, const ArticleRecord& article);

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace metarank
