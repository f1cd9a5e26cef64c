#include "metarank/heterogeneity.hpp"

#include <algorithm>
#include <cmath>

#include "metarank/errors.hpp"

namespace metarank {

HeterogeneityStrategy heterogeneity_strategy_from_string(const std::string& s) {
    if (s == "dersimonian_laird") return HeterogeneityStrategy::DersimonianLaird;
    if (s == "group_score") return HeterogeneityStrategy::GroupScore;
    throw ConfigError("unknown heterogeneity strategy: " + s);
}

std::string to_string(HeterogeneityStrategy strategy) {
    return strategy == HeterogeneityStrategy::DersimonianLaird ? "dersimonian_laird"
                                                               : "group_score";
}

void HeterogeneityConfig::validate() const {
    if (!(sigma > 0.0)) throw ConfigError("heterogeneity.sigma must be positive");
    if (r_cutoff < 0.0) throw ConfigError("heterogeneity.r_cutoff must be non-negative");
}

std::vector<StudyEffect> label_effects(const Claim& claim,
                                       std::span<const ArticleRecord* const> candidates,
                                       Judge& judge, double sigma) {
    std::vector<StudyEffect> effects;
    effects.reserve(candidates.size());
    for (const ArticleRecord* article : candidates) {
        StudyEffect eff;
        eff.article_id = article->article_id;
        eff.variance = sigma;
        switch (judge.judge_stance(claim, *article)) {
            case StanceLabel::Support: eff.y = 1.0; break;
            case StanceLabel::Oppose: eff.y = 0.0; break;
            case StanceLabel::Irrelevant: break;
        }
        effects.push_back(std::move(eff));
    }
    return effects;
}

namespace {

// tau^2_DL over the labeled studies of one subset; zero below two studies.
double dl_tau2(std::span<const StudyEffect> effects, std::size_t skip_index) {
    double sum_w = 0.0, sum_w2 = 0.0, sum_wy = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (i == skip_index || !effects[i].y) continue;
        const double w = 1.0 / effects[i].variance;
        sum_w += w;
        sum_w2 += w * w;
        sum_wy += w * *effects[i].y;
        ++k;
    }
    if (k < 2) return 0.0;
    const double theta_fe = sum_wy / sum_w;
    double q = 0.0;
    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (i == skip_index || !effects[i].y) continue;
        const double w = 1.0 / effects[i].variance;
        const double d = *effects[i].y - theta_fe;
        q += w * d * d;
    }
    const double denom = sum_w - sum_w2 / sum_w;
    return std::max((q - (k - 1)) / denom, 0.0);
}

}  // namespace

HeterogeneityReport dl_statistics(std::span<const StudyEffect> effects) {
    HeterogeneityReport report;
    report.per_study.reserve(effects.size());
    for (const auto& eff : effects) report.per_study.push_back({eff.article_id, 0.0, 0.0});

    double sum_w = 0.0, sum_w2 = 0.0, sum_wy = 0.0;
    std::optional<double> single_y;
    for (const auto& eff : effects) {
        if (!eff.y) continue;
        const double w = 1.0 / eff.variance;
        sum_w += w;
        sum_w2 += w * w;
        sum_wy += w * *eff.y;
        single_y = *eff.y;
        ++report.k_effective;
    }

    if (report.k_effective < 2) {
        report.degenerate = true;
        report.theta_fe = report.theta_re = single_y.value_or(0.0);
        return report;
    }

    report.theta_fe = sum_wy / sum_w;
    for (const auto& eff : effects) {
        if (!eff.y) continue;
        const double d = *eff.y - report.theta_fe;
        report.q_stat += d * d / eff.variance;
    }
    const double denom = sum_w - sum_w2 / sum_w;
    report.tau2 = std::max((report.q_stat - (report.k_effective - 1)) / denom, 0.0);

    double sum_bw = 0.0, sum_bwy = 0.0;  // random-effects weights
    for (const auto& eff : effects) {
        if (!eff.y) continue;
        const double bw = 1.0 / (eff.variance + report.tau2);
        sum_bw += bw;
        sum_bwy += bw * *eff.y;
    }
    report.theta_re = sum_bwy / sum_bw;

    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (!effects[i].y) continue;  // excluded studies keep zero diagnostics
        const double d = *effects[i].y - report.theta_re;
        report.per_study[i].q_i = d * d / effects[i].variance;
        if (report.tau2 > 0.0) {
            const double tau2_loo = dl_tau2(effects, i);
            report.per_study[i].delta_i = (report.tau2 - tau2_loo) / report.tau2;
        }
    }
    return report;
}

FilterResult filter_evidence(const std::vector<Claim>& claims,
                             const std::vector<ScoredArticle>& scored, Judge& judge,
                             const HeterogeneityConfig& cfg) {
    cfg.validate();
    if (claims.empty()) throw ValidationError("filter_evidence: no claims");
    if (scored.empty()) throw ValidationError("filter_evidence: no scored articles");

    std::vector<const ArticleRecord*> articles;
    articles.reserve(scored.size());
    for (const auto& s : scored) articles.push_back(s.article);

    FilterResult result;
    std::vector<bool> kept(scored.size(), false);
    std::vector<std::string> worst_delta_rule(scored.size());

    for (const auto& claim : claims) {
        auto effects = label_effects(claim, articles, judge, cfg.sigma);
        auto& stances = result.stances.emplace_back();
        stances.reserve(effects.size());
        for (const auto& eff : effects)
            stances.push_back(!eff.y            ? StanceLabel::Irrelevant
                              : *eff.y == 1.0   ? StanceLabel::Support
                                                : StanceLabel::Oppose);

        auto report = dl_statistics(effects);
        report.claim_id = claim.claim_id;
        for (std::size_t i = 0; i < scored.size(); ++i) {
            const double delta = report.per_study[i].delta_i;
            if (delta < cfg.m_threshold) {
                kept[i] = true;
            } else if (scored[i].reliability.value > cfg.r_cutoff) {
                kept[i] = true;
            } else if (worst_delta_rule[i].empty()) {
                worst_delta_rule[i] = "delta_i " + std::to_string(delta) + " >= M under claim " +
                                      claim.claim_id + " and r <= R_c";
            }
        }
        result.reports.push_back(std::move(report));
    }

    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (kept[i])
            result.kept.push_back(scored[i]);
        else
            result.dropped.push_back(
                {scored[i].article->article_id, "heterogeneity", worst_delta_rule[i]});
    }
    return result;
}

FilterResult group_filter(const std::vector<ScoredArticle>& scored, Judge& judge) {
    if (scored.empty()) throw ValidationError("group_filter: no scored articles");

    // Anchor: highest reliability, ties by article_id.
    std::size_t base = 0;
    for (std::size_t i = 1; i < scored.size(); ++i) {
        if (scored[i].reliability.value > scored[base].reliability.value ||
            (scored[i].reliability.value == scored[base].reliability.value &&
             scored[i].article->article_id < scored[base].article->article_id))
            base = i;
    }

    Claim anchor;
    anchor.claim_id = "base:" + scored[base].article->article_id;
    anchor.text = scored[base].article->title + " " + scored[base].article->abstract;

    FilterResult result;
    auto& stances = result.stances.emplace_back();
    stances.assign(scored.size(), StanceLabel::Irrelevant);
    stances[base] = StanceLabel::Support;

    double support_sum = scored[base].reliability.value;
    double oppose_sum = 0.0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (i == base) continue;
        stances[i] = judge.judge_stance(anchor, *scored[i].article);
        if (stances[i] == StanceLabel::Support) support_sum += scored[i].reliability.value;
        if (stances[i] == StanceLabel::Oppose) oppose_sum += scored[i].reliability.value;
    }

    // Equal sums keep both groups.
    const bool drop_support = support_sum < oppose_sum;
    const bool drop_oppose = oppose_sum < support_sum;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        const bool drop = (stances[i] == StanceLabel::Support && drop_support) ||
                          (stances[i] == StanceLabel::Oppose && drop_oppose);
        if (!drop) {
            result.kept.push_back(scored[i]);
        } else {
            result.dropped.push_back({scored[i].article->article_id, "heterogeneity",
                                      std::string("group_score: lower-sum ") +
                                          (drop_support ? "support" : "oppose") +
                                          " group removed"});
        }
    }
    return result;
}

}  // namespace metarank
