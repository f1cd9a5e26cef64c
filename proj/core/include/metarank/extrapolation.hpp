#pragma once

#include <map>
#include <string>
#include <vector>

#include "metarank/heterogeneity.hpp"
#include "metarank/judge.hpp"

namespace metarank {

enum class ExtrapolationStrategy { PioWeighted, Categorical };

ExtrapolationStrategy extrapolation_strategy_from_string(const std::string& s);
std::string to_string(ExtrapolationStrategy strategy);

struct ExtrapolationConfig {
    double alpha = 1.0 / 3.0;
    double beta = 1.0 / 3.0;
    double gamma = 1.0 / 3.0;
    ExtrapolationStrategy strategy = ExtrapolationStrategy::PioWeighted;
    double ep_penalty = -0.2;  // categorical: T = 1 + ep_penalty when conditions apply
    double ep_bonus = 0.2;     // categorical: T = 1 + ep_bonus when no conditions

    void validate() const;  // throws ConfigError
};

struct ScoredEvidence {
    std::string article_id;
    double r = 0.0;  // reliability value
    double t = 0.0;  // extrapolation score
    double s = 0.0;  // final ranking score, r^2 * t
    std::map<std::string, StanceLabel> stance_by_claim;
};

struct RankedEvidence {
    std::string query_id;
    std::vector<ScoredEvidence> items;  // s desc, ties by r desc then article_id
    bool empty_input = false;
};

/// Rule-based split: the last '?'-terminated sentence (or, failing that,
/// the last sentence) is the clinical question; everything else is the
/// user background. Single-sentence queries have an empty background.
struct QuerySplit {
    std::string background;
    std::string question;
};
QuerySplit split_query(const std::string& query);

double score_extrapolation(const std::string& background, const ArticleRecord& article,
                           Judge& judge, const ExtrapolationConfig& cfg);

RankedEvidence rank(const std::string& query_id, const std::vector<ScoredArticle>& filtered,
                    const std::string& background, Judge& judge, const ExtrapolationConfig& cfg);

}  // namespace metarank
