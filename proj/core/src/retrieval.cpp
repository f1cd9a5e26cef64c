#include "metarank/retrieval.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "metarank/errors.hpp"

namespace metarank {

SelectionMode selection_mode_from_string(const std::string& s) {
    if (s == "fused_top_n") return SelectionMode::FusedTopN;
    if (s == "seeded_sample") return SelectionMode::SeededSample;
    throw ConfigError("unknown selection_mode: " + s);
}

std::string to_string(SelectionMode mode) {
    return mode == SelectionMode::FusedTopN ? "fused_top_n" : "seeded_sample";
}

void RetrievalConfig::validate() const {
    if (per_field_top_k <= 0) throw ConfigError("retrieval.per_field_top_k must be positive");
    if (final_count <= 0) throw ConfigError("retrieval.final_count must be positive");
    if (final_count > 3 * per_field_top_k)
        throw ConfigError("retrieval.final_count exceeds 3 * per_field_top_k");
}

namespace {

std::string joined_mesh(const ArticleRecord& rec) {
    std::string out;
    for (const auto& m : rec.mesh_terms) {
        if (!out.empty()) out += ' ';
        out += m;
    }
    return out;
}

struct FieldHit {
    std::size_t record_index;
    double score;
};

// Top-k by score desc, ties broken by article_id asc.
std::vector<FieldHit> top_k(std::vector<FieldHit> hits, const Corpus& corpus, int k) {
    auto better = [&](const FieldHit& a, const FieldHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return corpus.records()[a.record_index].article_id <
               corpus.records()[b.record_index].article_id;
    };
    if (static_cast<int>(hits.size()) > k) {
        std::nth_element(hits.begin(), hits.begin() + k, hits.end(), better);
        hits.resize(static_cast<std::size_t>(k));
    }
    std::sort(hits.begin(), hits.end(), better);
    return hits;
}

}  // namespace

CandidateSet retrieve(const Corpus& corpus, const TfIdfModel& model,
                      const std::string& query_id, const std::string& query,
                      const RetrievalConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw ValidationError("retrieve: corpus is empty");

    const auto& records = corpus.records();
    std::vector<std::array<double, 3>> field_scores(records.size());
    std::array<std::vector<FieldHit>, 3> per_field;
    for (std::size_t i = 0; i < records.size(); ++i) {
        field_scores[i][0] = model.similarity(query, records[i].title);
        field_scores[i][1] = model.similarity(query, records[i].abstract);
        field_scores[i][2] = model.similarity(query, joined_mesh(records[i]));
        for (int f = 0; f < 3; ++f) per_field[f].push_back({i, field_scores[i][f]});
    }

    // Union of the three per-field top-k lists, deduplicated by record.
    std::map<std::string, std::size_t> pool;  // article_id -> record index
    for (int f = 0; f < 3; ++f)
        for (const auto& hit : top_k(std::move(per_field[f]), corpus, cfg.per_field_top_k))
            pool.emplace(records[hit.record_index].article_id, hit.record_index);

    std::vector<Candidate> candidates;
    candidates.reserve(pool.size());
    for (const auto& [id, idx] : pool) {
        const auto& fs = field_scores[idx];
        candidates.push_back({id, std::max({fs[0], fs[1], fs[2]})});
    }

    auto by_rank = [](const Candidate& a, const Candidate& b) {
        if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
        return a.article_id < b.article_id;
    };

    CandidateSet out;
    out.query_id = query_id;
    const auto want = static_cast<std::size_t>(cfg.final_count);
    if (candidates.size() < want) out.pool_exhausted = true;

    if (cfg.selection_mode == SelectionMode::FusedTopN) {
        std::sort(candidates.begin(), candidates.end(), by_rank);
        if (candidates.size() > want) candidates.resize(want);
        out.articles = std::move(candidates);
        return out;
    }

    // Seeded uniform sample without replacement. The pool is iterated in
    // article_id order, so the draw depends only on (pool, seed).
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.article_id < b.article_id; });
    std::mt19937_64 rng(cfg.seed);
    const std::size_t draws = std::min(want, candidates.size());
    for (std::size_t i = 0; i < draws; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
        std::swap(candidates[i], candidates[pick(rng)]);
    }
    candidates.resize(draws);
    std::sort(candidates.begin(), candidates.end(), by_rank);
    out.articles = std::move(candidates);
    return out;
}

}  // namespace metarank
