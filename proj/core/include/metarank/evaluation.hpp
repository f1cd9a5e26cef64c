#pragma once

#include <map>
#include <string>
#include <vector>

#include "metarank/corpus.hpp"
#include "metarank/extrapolation.hpp"
#include "metarank/text.hpp"

namespace metarank {

struct McqItem {
    std::string query_id;
    std::string query;
    std::vector<std::string> options;  // >= 2, distinct
    int gold_index = 0;

    void validate() const;  // throws ValidationError
    std::string claim_text(int option_index) const;  // query + " " + option
};

/// JSONL dataset: {query_id, query, options, gold_index} per line.
std::vector<McqItem> load_dataset(const std::string& path);

struct ArticleContribution {
    std::string article_id;
    double contribution = 0.0;
};

struct QueryEval {
    std::string query_id;
    std::vector<ArticleContribution> articles;
};

struct EvalReport {
    double ecs = 0.0;                 // mean contribution over all scored articles
    double ppa = 0.0;                 // fraction of contributions > 0
    double similarity_to_gold = 0.0;  // mean article-to-gold-claim similarity
    std::vector<QueryEval> per_query;
    int n_queries = 0;
};

/// Gold-claim similarity minus the mean distractor-claim similarity, over
/// the article's title + abstract. Negative when the article sits closer to
/// the wrong options than to the right one.
double contribution(const TfIdfModel& model, const ArticleRecord& article, const McqItem& item);

/// Article text provider, so rankings can be re-evaluated without the full
/// corpus when the texts were snapshotted alongside them.
struct EvalArticle {
    std::string article_id;
    std::string text;  // title + abstract
};

EvalReport evaluate(const TfIdfModel& model,
                    const std::map<std::string, std::vector<EvalArticle>>& ranked_per_query,
                    const std::vector<McqItem>& dataset, int top_n);

double similarity_to_gold(const TfIdfModel& model,
                          const std::map<std::string, std::vector<EvalArticle>>& ranked_per_query,
                          const std::vector<McqItem>& dataset, int top_n);

}  // namespace metarank
