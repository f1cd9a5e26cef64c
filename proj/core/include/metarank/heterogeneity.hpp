#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metarank/claim.hpp"
#include "metarank/corpus.hpp"
#include "metarank/judge.hpp"
#include "metarank/reliability.hpp"

namespace metarank {

/// One article's contribution to a claim's effect set. y is 1 for Support,
/// 0 for Oppose and absent for Irrelevant; the variance is the shared sigma.
struct StudyEffect {
    std::string article_id;
    std::optional<double> y;
    double variance = 0.1;
};

struct StudyDiagnostics {
    std::string article_id;
    double q_i = 0.0;      // (y_i - theta_RE)^2 / v_i
    double delta_i = 0.0;  // leave-one-out heterogeneity reduction ratio
};

/// DerSimonian-Laird statistics for one claim. Studies with absent y are
/// excluded from every sum and carry zero diagnostics.
struct HeterogeneityReport {
    std::string claim_id;
    int k_effective = 0;
    double theta_fe = 0.0;
    double q_stat = 0.0;
    double tau2 = 0.0;
    double theta_re = 0.0;
    std::vector<StudyDiagnostics> per_study;
    bool degenerate = false;  // fewer than two labeled studies
};

enum class HeterogeneityStrategy { DersimonianLaird, GroupScore };

HeterogeneityStrategy heterogeneity_strategy_from_string(const std::string& s);
std::string to_string(HeterogeneityStrategy strategy);

struct HeterogeneityConfig {
    double sigma = 0.1;        // per-study variance stand-in
    double m_threshold = 0.2;  // max acceptable heterogeneity contribution (M)
    double r_cutoff = 5.0;     // reliability escape threshold (R_c)
    HeterogeneityStrategy strategy = HeterogeneityStrategy::DersimonianLaird;

    void validate() const;  // throws ConfigError
};

/// Maps the judge's stances onto study effects for one claim.
std::vector<StudyEffect> label_effects(const Claim& claim,
                                       std::span<const ArticleRecord* const> candidates,
                                       Judge& judge, double sigma);

/// Fixed-effect estimate, Cochran's Q, the DL tau^2 (clamped at zero), the
/// random-effects estimate, per-study outlier measures and leave-one-out
/// reduction ratios. Conventions: delta_i = 0 whenever tau^2 = 0, and a
/// leave-one-out set with fewer than two labeled studies has tau^2 = 0.
HeterogeneityReport dl_statistics(std::span<const StudyEffect> effects);

struct ScoredArticle {
    const ArticleRecord* article;
    ReliabilityScore reliability;
};

struct DropRecord {
    std::string article_id;
    std::string stage;
    std::string rule;
};

struct FilterResult {
    std::vector<ScoredArticle> kept;  // input order preserved
    std::vector<HeterogeneityReport> reports;
    std::vector<DropRecord> dropped;
    // stance of every (article, claim) pair, for the audit trail
    std::vector<std::vector<StanceLabel>> stances;  // [claim][article]
};

/// Per-claim keep/drop filter: an article survives a claim when its
/// delta_i < M, or when delta_i >= M but its reliability exceeds R_c; it
/// enters the output if any claim keeps it.
FilterResult filter_evidence(const std::vector<Claim>& claims,
                             const std::vector<ScoredArticle>& scored, Judge& judge,
                             const HeterogeneityConfig& cfg);

/// Group-comparison variant: the top-reliability article anchors a claim;
/// supporters (plus the anchor) and opposers form two groups, and the group
/// with the lower reliability sum is removed wholesale. Ties keep both.
FilterResult group_filter(const std::vector<ScoredArticle>& scored, Judge& judge);

}  // namespace metarank
