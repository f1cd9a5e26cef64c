#include "metarank/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"
#include "metarank/errors.hpp"

namespace metarank {

using nlohmann::json;

void McqItem::validate() const {
    if (query_id.empty()) throw ValidationError("dataset item without query_id");
    if (options.size() < 2)
        throw ValidationError("query " + query_id + " needs at least two options");
    if (gold_index < 0 || gold_index >= static_cast<int>(options.size()))
        throw ValidationError("query " + query_id + " gold_index out of range");
    std::set<std::string> distinct(options.begin(), options.end());
    if (distinct.size() != options.size())
        throw ValidationError("query " + query_id + " has duplicate options");
}

std::string McqItem::claim_text(int option_index) const {
    return query + " " + options[static_cast<std::size_t>(option_index)];
}

std::vector<McqItem> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    std::vector<McqItem> items;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw ValidationError("dataset line " + std::to_string(lineno) + ": invalid JSON");
        McqItem item;
        try {
            item.query_id = j.at("query_id").get<std::string>();
            item.query = j.at("query").get<std::string>();
            item.options = j.at("options").get<std::vector<std::string>>();
            item.gold_index = j.at("gold_index").get<int>();
        } catch (const json::exception& e) {
            throw ValidationError("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
        item.validate();
        items.push_back(std::move(item));
    }
    return items;
}

namespace {

double contribution_for_text(const TfIdfModel& model, const std::string& article_text,
                             const McqItem& item) {
    double gold = 0.0, distractor_sum = 0.0;
    int distractors = 0;
    for (int i = 0; i < static_cast<int>(item.options.size()); ++i) {
        const double sim = model.similarity(article_text, item.claim_text(i));
        if (i == item.gold_index) {
            gold = sim;
        } else {
            distractor_sum += sim;
            ++distractors;
        }
    }
    return gold - distractor_sum / distractors;
}

const McqItem& find_item(const std::vector<McqItem>& dataset, const std::string& query_id) {
    auto it = std::find_if(dataset.begin(), dataset.end(),
                           [&](const McqItem& item) { return item.query_id == query_id; });
    if (it == dataset.end())
        throw ValidationError("ranked query_id not in dataset: " + query_id);
    return *it;
}

}  // namespace

double contribution(const TfIdfModel& model, const ArticleRecord& article, const McqItem& item) {
    item.validate();
    return contribution_for_text(model, body_text(article), item);
}

EvalReport evaluate(const TfIdfModel& model,
                    const std::map<std::string, std::vector<EvalArticle>>& ranked_per_query,
                    const std::vector<McqItem>& dataset, int top_n) {
    if (top_n <= 0) throw ConfigError("evaluation.top_n must be positive");
    EvalReport report;
    double sum = 0.0, gold_sum = 0.0;
    std::size_t total = 0, positive = 0;
    for (const auto& [query_id, articles] : ranked_per_query) {
        const McqItem& item = find_item(dataset, query_id);
        QueryEval qe;
        qe.query_id = query_id;
        const std::size_t take = std::min(articles.size(), static_cast<std::size_t>(top_n));
        for (std::size_t i = 0; i < take; ++i) {
            const double c = contribution_for_text(model, articles[i].text, item);
            qe.articles.push_back({articles[i].article_id, c});
            sum += c;
            gold_sum += model.similarity(articles[i].text, item.claim_text(item.gold_index));
            if (c > 0.0) ++positive;
            ++total;
        }
        report.per_query.push_back(std::move(qe));
        ++report.n_queries;
    }
    if (total > 0) {
        report.ecs = sum / static_cast<double>(total);
        report.ppa = static_cast<double>(positive) / static_cast<double>(total);
        report.similarity_to_gold = gold_sum / static_cast<double>(total);
    }
    return report;
}

double similarity_to_gold(const TfIdfModel& model,
                          const std::map<std::string, std::vector<EvalArticle>>& ranked_per_query,
                          const std::vector<McqItem>& dataset, int top_n) {
    return evaluate(model, ranked_per_query, dataset, top_n).similarity_to_gold;
}

}  // namespace metarank
