// metarank: evidence re-ranking pipeline CLI.
//
// Subcommands: ingest, rank, run, eval, sweep. Exit codes are the machine
// contract: 0 ok, 1 config/validation error, 2 I/O error, 3 judge endpoint
// failure. Structured output goes to files; stdout carries human text.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metarank/config.hpp"
#include "metarank/errors.hpp"
#include "metarank/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace metarank;

namespace {

std::unique_ptr<Judge> make_judge(const JudgeConfig& cfg) {
    if (cfg.type == "http") return std::make_unique<HttpJudge>(cfg.http);
    if (!cfg.fixture.empty()) return std::make_unique<MockJudge>(MockJudge::from_file(cfg.fixture));
    return std::make_unique<MockJudge>();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

json report_to_json(const EvalReport& report) {
    json per_query = json::array();
    for (const auto& q : report.per_query) {
        json arts = json::array();
        for (const auto& a : q.articles)
            arts.push_back({{"article_id", a.article_id}, {"contribution", a.contribution}});
        per_query.push_back({{"query_id", q.query_id}, {"articles", std::move(arts)}});
    }
    return json{{"ecs", report.ecs},
                {"ppa", report.ppa},
                {"similarity_to_gold", report.similarity_to_gold},
                {"n_queries", report.n_queries},
                {"per_query", std::move(per_query)}};
}

void write_dataset_result(const fs::path& outdir, const Corpus& corpus,
                          const DatasetResult& result) {
    fs::create_directories(outdir / "ranked");
    fs::create_directories(outdir / "trails");
    for (const auto& [qid, ranking] : result.rankings)
        write_file(outdir / "ranked" / (qid + ".json"), ranking_to_json(ranking, corpus).dump(2));
    for (const auto& [qid, trail] : result.trails)
        write_file(outdir / "trails" / (qid + ".json"), trail.to_json().dump(2));
    write_file(outdir / "report.json", report_to_json(result.report).dump(2));
}

int run_pipeline_command(const std::string& config_path, const std::vector<std::string>& overrides,
                         const std::string& index_path, const std::string& dataset_path,
                         const std::string& outdir, int jobs,
                         const std::string& only_query_id = "") {
    PipelineConfig cfg = PipelineConfig::load(config_path, overrides);
    Corpus corpus = load_corpus(index_path);
    auto judge = make_judge(cfg.judge);
    std::vector<McqItem> dataset = load_dataset(dataset_path);
    if (!only_query_id.empty()) {
        std::erase_if(dataset, [&](const McqItem& i) { return i.query_id != only_query_id; });
        if (dataset.empty())
            throw ValidationError("query_id not in dataset: " + only_query_id);
    }
    if (dataset.empty()) throw ValidationError("no queries");

    Pipeline pipeline(corpus, *judge, cfg);
    DatasetResult result = pipeline.run_dataset(dataset, jobs);
    write_dataset_result(outdir, corpus, result);
    std::cout << "ran " << result.rankings.size() << " queries; ECS " << result.report.ecs
              << ", PPA " << result.report.ppa << "; output in " << outdir << "\n";
    return 0;
}

// Cross-product of {key -> [values]} cells, in key order.
std::vector<std::vector<std::string>> grid_cells(const json& grid) {
    std::vector<std::vector<std::string>> cells{{}};
    for (const auto& [key, values] : grid.items()) {
        if (!values.is_array()) throw ConfigError("grid value for '" + key + "' must be an array");
        std::vector<std::vector<std::string>> next;
        for (const auto& cell : cells)
            for (const auto& v : values) {
                auto extended = cell;
                extended.push_back(key + "=" + v.dump());
                next.push_back(std::move(extended));
            }
        cells = std::move(next);
    }
    return cells;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"meta-analysis style evidence re-ranking and filtering"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate a JSONL corpus and write an index");
    std::string corpus_path, index_out;
    ingest->add_option("corpus", corpus_path, "JSONL corpus file")->required();
    ingest->add_option("-o,--output", index_out, "index output path")->required();

    // shared run/rank options
    std::string config_path, index_path, dataset_path, outdir, query_id;
    std::vector<std::string> overrides;
    int jobs = 1;

    auto add_run_opts = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "pipeline config JSON")->required();
        cmd->add_option("-x,--index", index_path, "corpus index from `ingest`")->required();
        cmd->add_option("-d,--dataset", dataset_path, "JSONL MCQ dataset")->required();
        cmd->add_option("-o,--output", outdir, "output directory")->required();
        cmd->add_option("--override", overrides, "dotted.key=value config override");
        cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* run = app.add_subcommand("run", "run the pipeline over a dataset");
    add_run_opts(run);

    auto* rank_cmd = app.add_subcommand("rank", "run the pipeline for a single query");
    add_run_opts(rank_cmd);
    rank_cmd->add_option("-q,--query-id", query_id, "query to run")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a rankings directory against a dataset");
    std::string rankings_dir, eval_dataset, eval_index, eval_out;
    int top_n = 4;
    eval_cmd->add_option("-r,--rankings", rankings_dir, "directory of per-query ranking JSON")
        ->required();
    eval_cmd->add_option("-d,--dataset", eval_dataset, "JSONL MCQ dataset")->required();
    eval_cmd->add_option("-x,--index", eval_index,
                         "optional corpus index; IDF falls back to the ranked texts");
    eval_cmd->add_option("--top-n", top_n, "articles per query to score");
    eval_cmd->add_option("-o,--output", eval_out, "write the report JSON here (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "cross-product of config overrides");
    std::string grid_path;
    add_run_opts(sweep);
    sweep->add_option("-g,--grid", grid_path, "JSON grid {dotted.key: [values]}")->required();

    CLI11_PARSE(app, argc, argv);

    if (ingest->parsed()) {
        IngestResult result = ingest_jsonl(corpus_path);
        save_corpus(result.corpus, index_out);
        for (const auto& issue : result.issues) std::cerr << "skipped " << issue << "\n";
        std::cout << "ingested " << result.corpus.size() << ", skipped " << result.skipped << "\n";
        return 0;
    }
    if (run->parsed())
        return run_pipeline_command(config_path, overrides, index_path, dataset_path, outdir, jobs);
    if (rank_cmd->parsed())
        return run_pipeline_command(config_path, overrides, index_path, dataset_path, outdir, jobs,
                                    query_id);

    if (eval_cmd->parsed()) {
        std::vector<McqItem> dataset = load_dataset(eval_dataset);
        std::map<std::string, std::vector<EvalArticle>> ranked;
        std::vector<std::string> texts;
        for (const auto& entry : fs::directory_iterator(rankings_dir)) {
            if (entry.path().extension() != ".json") continue;
            std::ifstream in(entry.path());
            json j = json::parse(in, nullptr, false);
            if (j.is_discarded() || !j.contains("query_id"))
                throw ValidationError("not a ranking file: " + entry.path().string());
            auto& articles = ranked[j["query_id"].get<std::string>()];
            for (const auto& item : j["items"]) {
                std::string text = item.value("title", std::string()) + " " +
                                   item.value("abstract", std::string());
                texts.push_back(text);
                articles.push_back({item["article_id"].get<std::string>(), std::move(text)});
            }
        }
        if (ranked.empty()) throw ValidationError("no ranking files in " + rankings_dir);
        TfIdfModel model = eval_index.empty() ? TfIdfModel::fit_texts(texts)
                                              : TfIdfModel::fit(load_corpus(eval_index));
        EvalReport report = evaluate(model, ranked, dataset, top_n);
        const std::string text = report_to_json(report).dump(2);
        if (eval_out.empty())
            std::cout << text << "\n";
        else
            write_file(eval_out, text);
        return 0;
    }

    if (sweep->parsed()) {
        std::ifstream in(grid_path);
        if (!in) throw IoError("cannot open grid: " + grid_path);
        json grid = json::parse(in, nullptr, false, true);
        if (grid.is_discarded() || !grid.is_object())
            throw ConfigError("grid must be a JSON object");

        const auto cells = grid_cells(grid);
        json summary = json::array();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "cell_%03zu", i);
            const fs::path cell_dir = fs::path(outdir) / name;

            auto cell_overrides = overrides;
            cell_overrides.insert(cell_overrides.end(), cells[i].begin(), cells[i].end());
            PipelineConfig cfg = PipelineConfig::load(config_path, cell_overrides);
            Corpus corpus = load_corpus(index_path);
            auto judge = make_judge(cfg.judge);
            std::vector<McqItem> dataset = load_dataset(dataset_path);
            if (dataset.empty()) throw ValidationError("no queries");

            Pipeline pipeline(corpus, *judge, cfg);
            DatasetResult result = pipeline.run_dataset(dataset, jobs);
            write_dataset_result(cell_dir, corpus, result);

            summary.push_back({{"cell", name},
                               {"overrides", cells[i]},
                               {"ecs", result.report.ecs},
                               {"ppa", result.report.ppa},
                               {"similarity_to_gold", result.report.similarity_to_gold}});
            std::cout << name << "  ecs=" << result.report.ecs << "  ppa=" << result.report.ppa;
            for (const auto& ov : cells[i]) std::cout << "  " << ov;
            std::cout << "\n";
        }
        fs::create_directories(outdir);
        write_file(fs::path(outdir) / "summary.json", summary.dump(2));
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const JudgeError& e) {
        std::cerr << "judge error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
