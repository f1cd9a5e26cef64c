#pragma once

#include <map>
#include <string>
#include <vector>

#include "metarank/corpus.hpp"

namespace metarank {

/// Lowercase, strip punctuation to spaces, split on whitespace.
std::vector<std::string> tokenize(const std::string& text);

/// Joins title, abstract and MeSH terms of a record into one text blob.
std::string full_text(const ArticleRecord& rec);

/// Title + abstract only; the evaluation metrics deliberately ignore MeSH.
std::string body_text(const ArticleRecord& rec);

/// Sparse TF-IDF vectors with smoothed IDF over a fixed document set.
///
/// idf(t) = ln((N + 1) / (df(t) + 1)) + 1, so every term keeps positive
/// weight and identical non-empty texts always score cosine 1.
class TfIdfModel {
public:
    TfIdfModel() = default;
    static TfIdfModel fit(const Corpus& corpus);
    static TfIdfModel fit_texts(const std::vector<std::string>& documents);

    double idf(const std::string& token) const;

    /// Cosine similarity of the two texts' TF-IDF vectors; 0 when either
    /// side has no tokens.
    double similarity(const std::string& a, const std::string& b) const;

    std::size_t document_count() const { return n_docs_; }

private:
    std::map<std::string, double> vectorize(const std::string& text) const;

    std::size_t n_docs_ = 0;
    std::map<std::string, std::size_t> doc_freq_;
};

}  // namespace metarank
