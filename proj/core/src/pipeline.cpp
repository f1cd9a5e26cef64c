#include "metarank/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "metarank/errors.hpp"

namespace metarank {

using nlohmann::json;

namespace {

json reliability_to_json(const ReliabilityScore& r) {
    return json{{"value", r.value},
                {"base_level", r.base_level},
                {"recency_bonus", r.recency_bonus},
                {"flags_failed", r.flags_failed}};
}

json report_to_json(const HeterogeneityReport& r) {
    json per_study = json::array();
    for (const auto& s : r.per_study)
        per_study.push_back({{"article_id", s.article_id}, {"q_i", s.q_i}, {"delta_i", s.delta_i}});
    return json{{"claim_id", r.claim_id}, {"k_effective", r.k_effective},
                {"theta_fe", r.theta_fe}, {"q", r.q_stat},
                {"tau2", r.tau2},         {"theta_re", r.theta_re},
                {"degenerate", r.degenerate}, {"per_study", std::move(per_study)}};
}

}  // namespace

json AuditTrail::to_json() const {
    json cands = json::array();
    for (const auto& c : candidates.articles)
        cands.push_back({{"article_id", c.article_id}, {"fused_score", c.fused_score}});

    json rel = json::object();
    for (const auto& [id, score] : reliability) rel[id] = reliability_to_json(score);

    json reports = json::array();
    for (const auto& r : heterogeneity_reports) reports.push_back(report_to_json(r));

    json drop_list = json::array();
    for (const auto& d : drops)
        drop_list.push_back({{"article_id", d.article_id}, {"stage", d.stage}, {"rule", d.rule}});

    return json{{"query_id", query_id},
                {"candidates", std::move(cands)},
                {"pool_exhausted", candidates.pool_exhausted},
                {"reliability", std::move(rel)},
                {"heterogeneity", std::move(reports)},
                {"drops", std::move(drop_list)},
                {"extrapolation_t", extrapolation_t},
                {"final_order", final_order},
                {"note", note}};
}

Pipeline::Pipeline(const Corpus& corpus, Judge& judge, PipelineConfig cfg)
    : corpus_(corpus), judge_(judge), cfg_(std::move(cfg)) {
    cfg_.validate();
    if (corpus_.empty()) throw ValidationError("pipeline needs a non-empty corpus");
    model_ = TfIdfModel::fit(corpus_);
    grades_ = cfg_.grade_table.empty() ? GradeTable::standard() : GradeTable::load(cfg_.grade_table);
}

std::vector<Claim> Pipeline::make_claims(const McqItem& item) {
    std::vector<Claim> claims;
    claims.reserve(item.options.size());
    for (int i = 0; i < static_cast<int>(item.options.size()); ++i) {
        Claim c;
        c.claim_id = item.query_id + ":" + std::to_string(i);
        c.query_id = item.query_id;
        c.text = item.claim_text(i);
        claims.push_back(std::move(c));
    }
    return claims;
}

QueryResult Pipeline::run_query(const McqItem& item) const {
    item.validate();
    QueryResult result;
    AuditTrail& trail = result.trail;
    trail.query_id = item.query_id;

    // (1) retrieval
    trail.candidates = retrieve(corpus_, model_, item.query_id, item.query, cfg_.retrieval);
    if (trail.candidates.articles.empty()) {
        result.ranking.query_id = item.query_id;
        result.ranking.empty_input = true;
        trail.note = "empty candidate set; nothing to rank";
        return result;
    }

    // (2) reliability
    const auto bonuses = recency_bonus(trail.candidates, corpus_, cfg_.reliability.tier_count);
    std::vector<ScoredArticle> scored;
    scored.reserve(trail.candidates.articles.size());
    for (const auto& cand : trail.candidates.articles) {
        const ArticleRecord& article = corpus_.at(cand.article_id);
        ReliabilityScore r =
            score_reliability(article, bonuses.at(cand.article_id), grades_, judge_,
                              cfg_.reliability);
        if (cfg_.ablation.no_reliability) {
            r.value = 1.0;  // Table-3-style ablation: identical reliability everywhere
        }
        trail.reliability[cand.article_id] = r;
        scored.push_back({&article, r});
    }

    // (3) heterogeneity
    const auto claims = make_claims(item);
    FilterResult filtered;
    if (cfg_.heterogeneity.strategy == HeterogeneityStrategy::DersimonianLaird) {
        filtered = filter_evidence(claims, scored, judge_, cfg_.heterogeneity);
    } else {
        filtered = group_filter(scored, judge_);
    }
    trail.heterogeneity_reports = filtered.reports;
    if (cfg_.ablation.no_heterogeneity) {
        filtered.kept = scored;  // reports stay for audit, nothing is removed
        filtered.dropped.clear();
    }
    trail.drops = filtered.dropped;

    // (4) extrapolation + final ranking
    const QuerySplit split = split_query(item.query);
    result.ranking = rank(item.query_id, filtered.kept, split.background, judge_,
                          cfg_.extrapolation);
    if (cfg_.ablation.no_extrapolation) {
        for (auto& ev : result.ranking.items) {
            ev.t = 1.0;
            ev.s = ev.r * ev.r;
        }
        std::sort(result.ranking.items.begin(), result.ranking.items.end(),
                  [](const ScoredEvidence& a, const ScoredEvidence& b) {
                      if (a.s != b.s) return a.s > b.s;
                      if (a.r != b.r) return a.r > b.r;
                      return a.article_id < b.article_id;
                  });
    }

    // Attach per-claim stances gathered during filtering.
    if (cfg_.heterogeneity.strategy == HeterogeneityStrategy::DersimonianLaird &&
        !filtered.stances.empty()) {
        std::map<std::string, std::map<std::string, StanceLabel>> stance_of;
        for (std::size_t c = 0; c < claims.size(); ++c)
            for (std::size_t a = 0; a < scored.size(); ++a)
                stance_of[scored[a].article->article_id][claims[c].claim_id] =
                    filtered.stances[c][a];
        for (auto& ev : result.ranking.items) ev.stance_by_claim = stance_of[ev.article_id];
    }

    for (const auto& ev : result.ranking.items) {
        trail.extrapolation_t[ev.article_id] = ev.t;
        trail.final_order.push_back(ev.article_id);
    }
    return result;
}

DatasetResult Pipeline::run_dataset(const std::vector<McqItem>& dataset, int jobs) const {
    if (dataset.empty()) throw ValidationError("no queries in dataset");

    std::vector<QueryResult> results(dataset.size());
    std::vector<std::exception_ptr> errors(dataset.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < dataset.size(); i = next.fetch_add(1)) {
            try {
                results[i] = run_query(dataset[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(dataset.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);

    DatasetResult out;
    std::map<std::string, std::vector<EvalArticle>> eval_input;
    for (auto& r : results) {
        const std::string qid = r.trail.query_id;
        auto& texts = eval_input[qid];
        for (const auto& ev : r.ranking.items)
            texts.push_back({ev.article_id, body_text(corpus_.at(ev.article_id))});
        out.rankings.emplace(qid, std::move(r.ranking));
        out.trails.emplace(qid, std::move(r.trail));
    }
    out.report = evaluate(model_, eval_input, dataset, cfg_.evaluation.top_n);
    return out;
}

json ranking_to_json(const RankedEvidence& ranking, const Corpus& corpus) {
    json items = json::array();
    for (const auto& ev : ranking.items) {
        json stances = json::object();
        for (const auto& [claim_id, label] : ev.stance_by_claim)
            stances[claim_id] = to_string(label);
        const ArticleRecord& article = corpus.at(ev.article_id);
        items.push_back({{"article_id", ev.article_id},
                         {"r", ev.r},
                         {"t", ev.t},
                         {"s", ev.s},
                         {"stance_by_claim", std::move(stances)},
                         {"title", article.title},
                         {"abstract", article.abstract}});
    }
    return json{{"query_id", ranking.query_id},
                {"empty_input", ranking.empty_input},
                {"items", std::move(items)}};
}

}  // namespace metarank
