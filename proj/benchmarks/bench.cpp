#include <optional>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "metarank/heterogeneity.hpp"
#include "metarank/retrieval.hpp"
#include "metarank/text.hpp"

using namespace metarank;

namespace {

std::vector<StudyEffect> random_effects(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> label(0, 2);
    std::vector<StudyEffect> effects;
    effects.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        StudyEffect eff;
        eff.article_id = "S" + std::to_string(i);
        eff.variance = 0.1;
        const int l = label(rng);
        if (l == 0) eff.y = 1.0;
        else if (l == 1) eff.y = 0.0;
        effects.push_back(std::move(eff));
    }
    return effects;
}

Corpus random_corpus(std::size_t n_docs, std::uint64_t seed) {
    static const std::vector<std::string> vocab{
        "aspirin", "statin",  "insulin", "fever",  "stroke",  "cohort", "trial",
        "risk",    "therapy", "dose",    "cancer", "cardiac", "renal",  "sleep"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len(3, 12);
    auto words = [&] {
        std::string out;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            if (!out.empty()) out += ' ';
            out += vocab[pick(rng)];
        }
        return out;
    };
    std::vector<ArticleRecord> records;
    for (std::size_t i = 0; i < n_docs; ++i) {
        ArticleRecord rec;
        rec.article_id = "R" + std::to_string(i);
        rec.title = words();
        rec.abstract = words();
        rec.mesh_terms = {vocab[pick(rng)]};
        rec.pub_date = *PubDate::parse("2020-01-01");
        records.push_back(std::move(rec));
    }
    return Corpus(std::move(records));
}

void bm_dl_statistics(benchmark::State& state) {
    const auto effects = random_effects(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(dl_statistics(effects));
}
BENCHMARK(bm_dl_statistics)->Arg(5)->Arg(20)->Arg(100);

void bm_tfidf_similarity(benchmark::State& state) {
    const Corpus corpus = random_corpus(200, 11);
    const auto model = TfIdfModel::fit(corpus);
    const std::string a = corpus.records()[0].title;
    const std::string b = corpus.records()[1].abstract;
    for (auto _ : state) benchmark::DoNotOptimize(model.similarity(a, b));
}
BENCHMARK(bm_tfidf_similarity);

void bm_retrieve(benchmark::State& state) {
    const Corpus corpus = random_corpus(static_cast<std::size_t>(state.range(0)), 13);
    const auto model = TfIdfModel::fit(corpus);
    RetrievalConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(retrieve(corpus, model, "Q", "aspirin fever trial risk", cfg));
}
BENCHMARK(bm_retrieve)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
