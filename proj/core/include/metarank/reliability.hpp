#pragma once

#include <map>
#include <string>

#include "metarank/corpus.hpp"
#include "metarank/judge.hpp"
#include "metarank/retrieval.hpp"

namespace metarank {

struct ReliabilityConfig {
    double penalty = 0.8;  // multiplier per failed methodology flag
    int tier_count = 4;    // recency tiers within a candidate set

    void validate() const;  // throws ConfigError
};

struct ReliabilityScore {
    double value = 0.0;  // (base_level + recency_bonus) * penalty^flags_failed
    int base_level = 1;
    double recency_bonus = 0.0;
    int flags_failed = 0;
};

/// Recency bonus per article, computed within one query's candidate set:
/// sort by pub_date descending (ties by article_id), split into tier_count
/// contiguous tiers as equal as possible (earlier tiers never smaller), and
/// give tier t the bonus (tier_count - t) / tier_count.
std::map<std::string, double> recency_bonus(const CandidateSet& candidates, const Corpus& corpus,
                                            int tier_count);

ReliabilityScore score_reliability(const ArticleRecord& article, double bonus,
                                   const GradeTable& grades, Judge& judge,
                                   const ReliabilityConfig& cfg);

}  // namespace metarank
