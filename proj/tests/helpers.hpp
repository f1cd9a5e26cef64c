#pragma once

// Shared fixture builders and the independent statistical oracles the
// derived expectations are computed with.

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metarank/corpus.hpp"

namespace testutil {

inline metarank::ArticleRecord make_article(std::string id, std::string title,
                                            std::string abstract = "",
                                            std::vector<std::string> types = {},
                                            std::string date = "2020-01-01",
                                            std::vector<std::string> mesh = {}) {
    metarank::ArticleRecord rec;
    rec.article_id = std::move(id);
    rec.title = std::move(title);
    rec.abstract = std::move(abstract);
    rec.publication_types = std::move(types);
    rec.mesh_terms = std::move(mesh);
    rec.pub_date = *metarank::PubDate::parse(date);
    return rec;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("metarank_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

private:
    std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Independent DerSimonian-Laird reference. Recomputes every quantity,
// including each leave-one-out tau^2, from scratch with plain loops.

struct DlReference {
    int k_effective = 0;
    double theta_fe = 0.0;
    double q = 0.0;
    double tau2 = 0.0;
    double theta_re = 0.0;
    std::vector<double> q_i;      // aligned with the input, 0 for absent y
    std::vector<double> delta_i;  // likewise
};

inline double dl_reference_tau2(const std::vector<std::optional<double>>& y, double sigma) {
    std::vector<double> present;
    for (const auto& v : y)
        if (v) present.push_back(*v);
    const int k = static_cast<int>(present.size());
    if (k < 2) return 0.0;
    const double w = 1.0 / sigma;
    double sum_wy = 0.0;
    for (double v : present) sum_wy += w * v;
    const double theta = sum_wy / (w * k);
    double q = 0.0;
    for (double v : present) q += w * (v - theta) * (v - theta);
    const double denom = w * k - (w * w * k) / (w * k);
    const double tau2 = (q - (k - 1)) / denom;
    return tau2 > 0.0 ? tau2 : 0.0;
}

inline DlReference dl_reference(const std::vector<std::optional<double>>& y, double sigma) {
    DlReference ref;
    ref.q_i.assign(y.size(), 0.0);
    ref.delta_i.assign(y.size(), 0.0);

    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i]) present.push_back(i);
    ref.k_effective = static_cast<int>(present.size());
    if (ref.k_effective < 2) {
        ref.theta_fe = ref.theta_re = present.empty() ? 0.0 : *y[present.front()];
        return ref;
    }

    const double w = 1.0 / sigma;
    double sum_w = 0.0, sum_wy = 0.0;
    for (auto i : present) {
        sum_w += w;
        sum_wy += w * *y[i];
    }
    ref.theta_fe = sum_wy / sum_w;
    for (auto i : present) ref.q += w * (*y[i] - ref.theta_fe) * (*y[i] - ref.theta_fe);
    double sum_w2 = 0.0;
    for (auto i : present) {
        (void)i;
        sum_w2 += w * w;
    }
    const double tau2 = (ref.q - (ref.k_effective - 1)) / (sum_w - sum_w2 / sum_w);
    ref.tau2 = tau2 > 0.0 ? tau2 : 0.0;

    double sum_bw = 0.0, sum_bwy = 0.0;
    for (auto i : present) {
        const double bw = 1.0 / (sigma + ref.tau2);
        sum_bw += bw;
        sum_bwy += bw * *y[i];
    }
    ref.theta_re = sum_bwy / sum_bw;

    for (auto i : present) {
        ref.q_i[i] = (*y[i] - ref.theta_re) * (*y[i] - ref.theta_re) / sigma;
        if (ref.tau2 > 0.0) {
            auto loo = y;
            loo[i].reset();
            ref.delta_i[i] = (ref.tau2 - dl_reference_tau2(loo, sigma)) / ref.tau2;
        }
    }
    return ref;
}

// ---------------------------------------------------------------------------
// Hand TF-IDF oracle over the same tokenizer contract (lowercase, strip
// punctuation, split on whitespace) and the pinned smoothed IDF.

inline std::vector<std::string> oracle_tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char raw : text) {
        auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c))
            cur += static_cast<char>(std::tolower(c));
        else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

inline double oracle_tfidf_cosine(const std::string& a, const std::string& b,
                                  const std::vector<std::string>& corpus_docs) {
    std::map<std::string, int> df;
    for (const auto& doc : corpus_docs) {
        std::map<std::string, bool> seen;
        for (const auto& t : oracle_tokenize(doc)) seen[t] = true;
        for (const auto& [t, _] : seen) ++df[t];
    }
    const double n = static_cast<double>(corpus_docs.size());
    auto idf = [&](const std::string& t) {
        const double d = df.count(t) ? df.at(t) : 0.0;
        return std::log((n + 1.0) / (d + 1.0)) + 1.0;
    };
    auto vec = [&](const std::string& text) {
        std::map<std::string, double> v;
        for (const auto& t : oracle_tokenize(text)) v[t] += 1.0;
        for (auto& [t, weight] : v) weight *= idf(t);
        return v;
    };
    const auto va = vec(a), vb = vec(b);
    if (va.empty() || vb.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, w] : va) {
        na += w * w;
        if (vb.count(t)) dot += w * vb.at(t);
    }
    for (const auto& [t, w] : vb) nb += w * w;
    return dot == 0.0 ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace testutil
