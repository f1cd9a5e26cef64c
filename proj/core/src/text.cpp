#include "metarank/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace metarank {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::string full_text(const ArticleRecord& rec) {
    std::string out = rec.title;
    out += ' ';
    out += rec.abstract;
    for (const auto& m : rec.mesh_terms) {
        out += ' ';
        out += m;
    }
    return out;
}

std::string body_text(const ArticleRecord& rec) {
    return rec.title + ' ' + rec.abstract;
}

TfIdfModel TfIdfModel::fit(const Corpus& corpus) {
    std::vector<std::string> docs;
    docs.reserve(corpus.size());
    for (const auto& rec : corpus.records()) docs.push_back(full_text(rec));
    return fit_texts(docs);
}

TfIdfModel TfIdfModel::fit_texts(const std::vector<std::string>& documents) {
    TfIdfModel model;
    model.n_docs_ = documents.size();
    for (const auto& doc : documents) {
        std::set<std::string> seen;
        for (auto& tok : tokenize(doc)) seen.insert(std::move(tok));
        for (const auto& tok : seen) ++model.doc_freq_[tok];
    }
    return model;
}

double TfIdfModel::idf(const std::string& token) const {
    auto it = doc_freq_.find(token);
    const double df = it == doc_freq_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((static_cast<double>(n_docs_) + 1.0) / (df + 1.0)) + 1.0;
}

std::map<std::string, double> TfIdfModel::vectorize(const std::string& text) const {
    std::map<std::string, double> counts;
    for (const auto& tok : tokenize(text)) counts[tok] += 1.0;
    for (auto& [tok, weight] : counts) weight *= idf(tok);
    return counts;
}

double TfIdfModel::similarity(const std::string& a, const std::string& b) const {
    const auto va = vectorize(a);
    const auto vb = vectorize(b);
    if (va.empty() || vb.empty()) return 0.0;
    if (va == vb) return 1.0;  // identical token profiles score exactly 1

    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [tok, w] : va) {
        na += w * w;
        auto it = vb.find(tok);
        if (it != vb.end()) dot += w * it->second;
    }
    for (const auto& [tok, w] : vb) nb += w * w;
    if (dot == 0.0) return 0.0;
    return std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb)));
}

}  // namespace metarank
