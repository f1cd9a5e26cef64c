#include "metarank/extrapolation.hpp"

#include <algorithm>
#include <cmath>

#include "metarank/errors.hpp"

namespace metarank {

ExtrapolationStrategy extrapolation_strategy_from_string(const std::string& s) {
    if (s == "pio_weighted") return ExtrapolationStrategy::PioWeighted;
    if (s == "categorical") return ExtrapolationStrategy::Categorical;
    throw ConfigError("unknown extrapolation strategy: " + s);
}

std::string to_string(ExtrapolationStrategy strategy) {
    return strategy == ExtrapolationStrategy::PioWeighted ? "pio_weighted" : "categorical";
}

void ExtrapolationConfig::validate() const {
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
        throw ConfigError("extrapolation weights must be non-negative");
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
        throw ConfigError("extrapolation weights must sum to 1");
}

QuerySplit split_query(const std::string& query) {
    // Sentence boundaries at '.', '?' or '!' (terminator kept with the
    // sentence).
    std::vector<std::string> sentences;
    std::string cur;
    for (char c : query) {
        cur.push_back(c);
        if (c == '.' || c == '?' || c == '!') {
            sentences.push_back(cur);
            cur.clear();
        }
    }
    if (cur.find_first_not_of(" \t\n") != std::string::npos) sentences.push_back(cur);
    if (sentences.empty()) return {"", query};

    std::size_t question = sentences.size() - 1;
    for (std::size_t i = sentences.size(); i-- > 0;) {
        if (sentences[i].back() == '?') {
            question = i;
            break;
        }
    }

    auto strip = [](std::string s) {
        auto b = s.find_first_not_of(" \t\n");
        auto e = s.find_last_not_of(" \t\n");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };

    QuerySplit split;
    split.question = strip(sentences[question]);
    std::string background;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i == question) continue;
        const std::string s = strip(sentences[i]);
        if (s.empty()) continue;
        if (!background.empty()) background += ' ';
        background += s;
    }
    split.background = background;
    return split;
}

double score_extrapolation(const std::string& background, const ArticleRecord& article,
                           Judge& judge, const ExtrapolationConfig& cfg) {
    cfg.validate();
    if (cfg.strategy == ExtrapolationStrategy::PioWeighted) {
        const PioScores pio = judge.judge_pio(background, article);
        return cfg.alpha * pio.population + cfg.beta * pio.intervention + cfg.gamma * pio.outcome;
    }
    switch (judge.judge_extrapolability(background, article)) {
        case ExtrapolabilityCategory::NoConditions: return 1.0 + cfg.ep_bonus;
        case ExtrapolabilityCategory::ApplicableConditions: return 1.0 + cfg.ep_penalty;
        default: return 1.0;
    }
}

RankedEvidence rank(const std::string& query_id, const std::vector<ScoredArticle>& filtered,
                    const std::string& background, Judge& judge,
                    const ExtrapolationConfig& cfg) {
    RankedEvidence ranked;
    ranked.query_id = query_id;
    if (filtered.empty()) {
        ranked.empty_input = true;
        return ranked;
    }
    for (const auto& scored : filtered) {
        ScoredEvidence item;
        item.article_id = scored.article->article_id;
        item.r = scored.reliability.value;
        item.t = score_extrapolation(background, *scored.article, judge, cfg);
        item.s = item.r * item.r * item.t;
        ranked.items.push_back(std::move(item));
    }
    std::sort(ranked.items.begin(), ranked.items.end(),
              [](const ScoredEvidence& a, const ScoredEvidence& b) {
                  if (a.s != b.s) return a.s > b.s;
                  if (a.r != b.r) return a.r > b.r;
                  return a.article_id < b.article_id;
              });
    return ranked;
}

}  // namespace metarank
