#include "metarank/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "metarank/errors.hpp"

namespace metarank {

void ReliabilityConfig::validate() const {
    if (!(penalty > 0.0 && penalty <= 1.0))
        throw ConfigError("reliability.penalty must be in (0, 1]");
    if (tier_count <= 0) throw ConfigError("reliability.tier_count must be positive");
}

std::map<std::string, double> recency_bonus(const CandidateSet& candidates, const Corpus& corpus,
                                            int tier_count) {
    std::vector<const ArticleRecord*> articles;
    articles.reserve(candidates.articles.size());
    for (const auto& c : candidates.articles) articles.push_back(&corpus.at(c.article_id));

    std::sort(articles.begin(), articles.end(), [](const ArticleRecord* a, const ArticleRecord* b) {
        if (a->pub_date != b->pub_date) return a->pub_date > b->pub_date;
        return a->article_id < b->article_id;
    });

    // Contiguous tiers as equal as possible; the first (n mod T) tiers take
    // the extra element.
    const std::size_t n = articles.size();
    const auto tiers = static_cast<std::size_t>(tier_count);
    std::map<std::string, double> bonus;
    std::size_t next = 0;
    for (std::size_t t = 0; t < tiers && next < n; ++t) {
        std::size_t size = n / tiers + (t < n % tiers ? 1 : 0);
        const double b = static_cast<double>(tiers - t) / static_cast<double>(tiers);
        for (std::size_t i = 0; i < size && next < n; ++i, ++next)
            bonus[articles[next]->article_id] = b;
    }
    return bonus;
}

ReliabilityScore score_reliability(const ArticleRecord& article, double bonus,
                                   const GradeTable& grades, Judge& judge,
                                   const ReliabilityConfig& cfg) {
    cfg.validate();
    ReliabilityScore score;
    score.base_level = grades.grade(article.publication_types).level;
    score.recency_bonus = bonus;
    score.flags_failed = judge.judge_methodology(article).failed_count();
    score.value = (score.base_level + bonus) * std::pow(cfg.penalty, score.flags_failed);
    return score;
}

}  // namespace metarank
