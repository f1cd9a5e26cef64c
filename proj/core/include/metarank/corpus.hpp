#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace metarank {

/// Publication date. Month/day may be absent in the source; parsing
/// normalizes them to January 1st so recency comparisons stay total.
struct PubDate {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const PubDate&) const = default;

    /// Accepts "YYYY", "YYYY-MM" and "YYYY-MM-DD".
    static std::optional<PubDate> parse(const std::string& iso);
    std::string to_string() const;
};

struct ArticleRecord {
    std::string article_id;
    std::string title;
    std::string abstract;
    std::vector<std::string> mesh_terms;
    std::vector<std::string> publication_types;
    PubDate pub_date;

    /// True when at least one of title/abstract/mesh carries text.
    bool has_retrievable_field() const;
};

/// 1..7 evidence grade derived from publication types; 7 is strongest.
struct EvidenceLevel {
    int level = 1;
};

/// Ordered substring patterns mapping publication-type strings to levels.
/// Matching is case-insensitive; an article with several matching types
/// takes the maximum level; no match means level 1.
class GradeTable {
public:
    GradeTable() = default;
    explicit GradeTable(std::vector<std::pair<std::string, int>> patterns)
        : patterns_(std::move(patterns)) {}

    static GradeTable standard();
    static GradeTable load(const std::string& path);

    EvidenceLevel grade(const std::vector<std::string>& publication_types) const;

    const std::vector<std::pair<std::string, int>>& patterns() const { return patterns_; }

private:
    std::vector<std::pair<std::string, int>> patterns_;
};

/// Immutable article collection, id-indexed. Safe for concurrent readers.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<ArticleRecord> records);

    const ArticleRecord* find(const std::string& article_id) const;
    const ArticleRecord& at(const std::string& article_id) const;
    const std::vector<ArticleRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

private:
    std::vector<ArticleRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct IngestResult {
    Corpus corpus;
    std::size_t skipped = 0;
    std::vector<std::string> issues;  // one human-readable line per skipped record
};

/// Reads a JSONL corpus file. Invalid records are skipped and reported;
/// duplicate article ids, unreadable files and zero valid records are fatal.
IngestResult ingest_jsonl(const std::string& path);

/// Serialize / restore a built corpus (the "index" the CLI writes).
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace metarank
