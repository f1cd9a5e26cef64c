#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metarank/corpus.hpp"
#include "metarank/text.hpp"

namespace metarank {

enum class SelectionMode { FusedTopN, SeededSample };

SelectionMode selection_mode_from_string(const std::string& s);
std::string to_string(SelectionMode mode);

struct RetrievalConfig {
    int per_field_top_k = 10;
    int final_count = 10;
    SelectionMode selection_mode = SelectionMode::FusedTopN;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

struct Candidate {
    std::string article_id;
    double fused_score = 0.0;
};

struct CandidateSet {
    std::string query_id;
    std::vector<Candidate> articles;  // fused_score desc, ties by id asc
    bool pool_exhausted = false;      // dedup pool was smaller than final_count
};

/// Hybrid three-field retrieval: score the query against title, abstract
/// and the space-joined MeSH terms, keep the top-k per field, union and
/// deduplicate, fuse per article as the max field score, then either take
/// the top final_count or draw a seeded uniform sample from the pool.
CandidateSet retrieve(const Corpus& corpus, const TfIdfModel& model,
                      const std::string& query_id, const std::string& query,
                      const RetrievalConfig& cfg);

}  // namespace metarank
