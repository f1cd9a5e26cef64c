#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "metarank/corpus.hpp"
#include "metarank/errors.hpp"

using namespace metarank;
using testutil::TempDir;

namespace {

const char* kThreeValid =
    R"({"article_id":"A1","title":"aspirin and fever","abstract":"a","mesh_terms":[],"publication_types":["Meta-Analysis"],"pub_date":"2021-03-02"}
{"article_id":"A2","title":"statin trial","abstract":"b","mesh_terms":["Lipids"],"publication_types":["Randomized Controlled Trial"],"pub_date":"2019"}
{"article_id":"A3","title":"","abstract":"","mesh_terms":["Insulin"],"publication_types":[],"pub_date":"2020-07"}
)";

}  // namespace

TEST_CASE("ingest: well-formed file") {
    TempDir dir("ingest");
    auto result = ingest_jsonl(dir.file("c.jsonl", kThreeValid));
    CHECK(result.corpus.size() == 3);
    CHECK(result.skipped == 0);

    // lookup returns the ingested record, fields intact
    const auto& a2 = result.corpus.at("A2");
    CHECK(a2.title == "statin trial");
    CHECK(a2.mesh_terms == std::vector<std::string>{"Lipids"});
    CHECK(a2.pub_date == PubDate{2019, 1, 1});  // missing month/day -> Jan 1st
    CHECK(result.corpus.at("A3").pub_date == PubDate{2020, 7, 1});
}

TEST_CASE("ingest: record with no retrievable field is skipped with line number") {
    TempDir dir("ingest");
    const std::string two =
        R"({"article_id":"A1","title":"t","abstract":"","mesh_terms":[],"publication_types":[],"pub_date":"2020"}
{"article_id":"A2","title":"","abstract":"","mesh_terms":[],"publication_types":[],"pub_date":"2020"}
)";
    auto result = ingest_jsonl(dir.file("c.jsonl", two));
    CHECK(result.corpus.size() == 1);
    CHECK(result.skipped == 1);
    REQUIRE(result.issues.size() == 1);
    CHECK(result.issues[0].find("line 2") != std::string::npos);
}

TEST_CASE("ingest: duplicate article_id is fatal and names both lines") {
    TempDir dir("ingest");
    const std::string dup =
        R"({"article_id":"X1","title":"a","abstract":"","mesh_terms":[],"publication_types":[],"pub_date":"2020"}
{"article_id":"X1","title":"b","abstract":"","mesh_terms":[],"publication_types":[],"pub_date":"2021"}
)";
    const std::string path = dir.file("c.jsonl", dup);
    CHECK_THROWS_WITH_AS(ingest_jsonl(path),
                         doctest::Contains("lines 1 and 2"), ValidationError);
}

TEST_CASE("ingest: unreadable file and zero valid records are fatal") {
    CHECK_THROWS_AS(ingest_jsonl("/nonexistent/corpus.jsonl"), IoError);
    TempDir dir("ingest");
    const std::string path =
        dir.file("bad.jsonl", R"({"article_id":"","title":"x","pub_date":"2020"})" "\n");
    CHECK_THROWS_AS(ingest_jsonl(path), ValidationError);
}

TEST_CASE("ingest: bad dates rejected") {
    CHECK(!PubDate::parse("20-13-01"));
    CHECK(!PubDate::parse("2020-13"));
    CHECK(!PubDate::parse("2020-02-30"));
    CHECK(!PubDate::parse("not a date"));
    CHECK(PubDate::parse("2020-02-29"));
}

TEST_CASE("save/load round-trips the corpus") {
    TempDir dir("index");
    auto result = ingest_jsonl(dir.file("c.jsonl", kThreeValid));
    const std::string index = (dir.path() / "index.json").string();
    save_corpus(result.corpus, index);
    Corpus loaded = load_corpus(index);
    REQUIRE(loaded.size() == 3);
    for (const auto& rec : result.corpus.records()) {
        const auto& got = loaded.at(rec.article_id);
        CHECK(got.title == rec.title);
        CHECK(got.abstract == rec.abstract);
        CHECK(got.mesh_terms == rec.mesh_terms);
        CHECK(got.publication_types == rec.publication_types);
        CHECK(got.pub_date == rec.pub_date);
    }
}

TEST_CASE("grade_publication mapping") {
    const GradeTable table = GradeTable::standard();
    CHECK(table.grade({"Meta-Analysis"}).level == 7);
    CHECK(table.grade({"Systematic Review"}).level == 7);
    CHECK(table.grade({"Randomized Controlled Trial"}).level == 6);
    CHECK(table.grade({"Randomized Controlled Trial, Phase III"}).level == 6);  // substring
    CHECK(table.grade({"Controlled Clinical Trial"}).level == 5);
    CHECK(table.grade({"Cohort Studies"}).level == 5);
    CHECK(table.grade({"Case-Control Studies"}).level == 4);
    CHECK(table.grade({"Observational Study"}).level == 3);
    CHECK(table.grade({"Case Reports"}).level == 2);
    CHECK(table.grade({"Editorial"}).level == 1);
    CHECK(table.grade({}).level == 1);
    // max rule: both lookups enumerated, 6 > 2
    CHECK(table.grade({"Case Reports", "Randomized Controlled Trial"}).level == 6);
}

TEST_CASE("grade_publication is case-insensitive and order-free") {
    const GradeTable table = GradeTable::standard();
    CHECK(table.grade({"META-ANALYSIS"}).level == 7);
    CHECK(table.grade({"meta-analysis"}).level == 7);

    std::vector<std::string> types{"Case Reports", "Cohort Studies", "Editorial", "Meta-Analysis"};
    const int expected = table.grade(types).level;
    std::sort(types.begin(), types.end());
    do {
        CHECK(table.grade(types).level == expected);
    } while (std::next_permutation(types.begin(), types.end()));
}

TEST_CASE("grade table loads from JSON") {
    TempDir dir("grades");
    const std::string path = dir.file("g.json", R"({"meta-analysis": 7, "case report": 3})");
    const GradeTable table = GradeTable::load(path);
    CHECK(table.grade({"Meta-Analysis"}).level == 7);
    CHECK(table.grade({"Case Reports"}).level == 3);
    CHECK(table.grade({"Randomized Controlled Trial"}).level == 1);  // unmapped
}
