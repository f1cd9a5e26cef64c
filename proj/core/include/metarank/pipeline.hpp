#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "metarank/config.hpp"
#include "metarank/corpus.hpp"
#include "metarank/evaluation.hpp"
#include "metarank/extrapolation.hpp"
#include "metarank/heterogeneity.hpp"
#include "metarank/judge.hpp"

namespace metarank {

/// Stage-by-stage record of one query's run. Every dropped article appears
/// with the stage and rule that removed it.
struct AuditTrail {
    std::string query_id;
    CandidateSet candidates;
    std::map<std::string, ReliabilityScore> reliability;
    std::vector<HeterogeneityReport> heterogeneity_reports;
    std::vector<DropRecord> drops;
    std::map<std::string, double> extrapolation_t;
    std::vector<std::string> final_order;
    std::string note;  // e.g. why a ranking is empty

    nlohmann::json to_json() const;
};

struct QueryResult {
    RankedEvidence ranking;
    AuditTrail trail;
};

struct DatasetResult {
    std::map<std::string, RankedEvidence> rankings;
    std::map<std::string, AuditTrail> trails;
    EvalReport report;
};

/// Retrieve -> reliability -> heterogeneity -> extrapolation, per query.
/// Deterministic given the corpus, config and judge tables.
class Pipeline {
public:
    Pipeline(const Corpus& corpus, Judge& judge, PipelineConfig cfg);

    QueryResult run_query(const McqItem& item) const;
    DatasetResult run_dataset(const std::vector<McqItem>& dataset, int jobs = 1) const;

    const TfIdfModel& model() const { return model_; }
    const PipelineConfig& config() const { return cfg_; }

    /// Claims derived from one query item: one per option.
    static std::vector<Claim> make_claims(const McqItem& item);

private:
    const Corpus& corpus_;
    Judge& judge_;
    PipelineConfig cfg_;
    TfIdfModel model_;
    GradeTable grades_;
};

/// Ranked-evidence JSON written per query by the CLI; article texts are
/// snapshotted so `eval` can re-score without the corpus.
nlohmann::json ranking_to_json(const RankedEvidence& ranking, const Corpus& corpus);

}  // namespace metarank
