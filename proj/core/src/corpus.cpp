#include "metarank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "metarank/errors.hpp"

namespace metarank {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool days_valid(int year, int month, int day) {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    static const int dim[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return day <= dim[month - 1];
}

}  // namespace

std::optional<PubDate> PubDate::parse(const std::string& iso) {
    PubDate d;
    int n = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%n", &d.year, &d.month, &d.day, &n) == 3 &&
        n == static_cast<int>(iso.size())) {
        // full date
    } else if (std::sscanf(iso.c_str(), "%d-%d%n", &d.year, &d.month, &n) == 2 &&
               n == static_cast<int>(iso.size())) {
        d.day = 1;
    } else if (std::sscanf(iso.c_str(), "%d%n", &d.year, &n) == 1 &&
               n == static_cast<int>(iso.size())) {
        d.month = 1;
        d.day = 1;
    } else {
        return std::nullopt;
    }
    if (!days_valid(d.year, d.month, d.day)) return std::nullopt;
    return d;
}

std::string PubDate::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool ArticleRecord::has_retrievable_field() const {
    if (!title.empty() || !abstract.empty()) return true;
    return std::any_of(mesh_terms.begin(), mesh_terms.end(),
                       [](const std::string& t) { return !t.empty(); });
}

GradeTable GradeTable::standard() {
    // Substring patterns against PubMed publication-type strings.
    return GradeTable({
        {"meta-analysis", 7},
        {"systematic review", 7},
        {"randomized controlled trial", 6},
        {"controlled clinical trial", 5},
        {"cohort", 5},
        {"case-control", 4},
        {"observational", 3},
        {"cross-sectional", 3},
        {"comparative study", 3},
        {"case report", 2},
    });
}

GradeTable GradeTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read grade table: " + path);
    json j = json::parse(in, nullptr, true, true);
    std::vector<std::pair<std::string, int>> patterns;
    for (auto& [pattern, level] : j.items()) {
        int lv = level.get<int>();
        if (lv < 1 || lv > 7)
            throw ConfigError("grade table level out of [1,7] for '" + pattern + "'");
        patterns.emplace_back(lower(pattern), lv);
    }
    return GradeTable(std::move(patterns));
}

EvidenceLevel GradeTable::grade(const std::vector<std::string>& publication_types) const {
    int best = 1;
    for (const auto& raw : publication_types) {
        const std::string type = lower(raw);
        for (const auto& [pattern, level] : patterns_) {
            if (type.find(pattern) != std::string::npos) best = std::max(best, level);
        }
    }
    return EvidenceLevel{best};
}

Corpus::Corpus(std::vector<ArticleRecord> records) : records_(std::move(records)) {
    index_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) index_[records_[i].article_id] = i;
}

const ArticleRecord* Corpus::find(const std::string& article_id) const {
    auto it = index_.find(article_id);
    return it == index_.end() ? nullptr : &records_[it->second];
}

const ArticleRecord& Corpus::at(const std::string& article_id) const {
    const ArticleRecord* r = find(article_id);
    if (!r) throw ValidationError("unknown article_id: " + article_id);
    return *r;
}

namespace {

std::optional<ArticleRecord> parse_record(const json& j, std::string& why) {
    ArticleRecord rec;
    if (!j.is_object()) {
        why = "line is not a JSON object";
        return std::nullopt;
    }
    if (!j.contains("article_id") || !j["article_id"].is_string() ||
        j["article_id"].get<std::string>().empty()) {
        why = "missing or empty article_id";
        return std::nullopt;
    }
    rec.article_id = j["article_id"].get<std::string>();
    if (j.contains("title") && j["title"].is_string()) rec.title = j["title"];
    if (j.contains("abstract") && j["abstract"].is_string()) rec.abstract = j["abstract"];
    if (j.contains("mesh_terms") && j["mesh_terms"].is_array())
        for (const auto& t : j["mesh_terms"])
            if (t.is_string()) rec.mesh_terms.push_back(t.get<std::string>());
    if (j.contains("publication_types") && j["publication_types"].is_array())
        for (const auto& t : j["publication_types"])
            if (t.is_string()) rec.publication_types.push_back(t.get<std::string>());
    if (!j.contains("pub_date") || !j["pub_date"].is_string()) {
        why = "missing pub_date";
        return std::nullopt;
    }
    auto date = PubDate::parse(j["pub_date"].get<std::string>());
    if (!date) {
        why = "unparseable pub_date '" + j["pub_date"].get<std::string>() + "'";
        return std::nullopt;
    }
    rec.pub_date = *date;
    if (!rec.has_retrievable_field()) {
        why = "no retrievable field (title, abstract and mesh_terms all empty)";
        return std::nullopt;
    }
    return rec;
}

}  // namespace

IngestResult ingest_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);

    IngestResult result;
    std::vector<ArticleRecord> records;
    std::unordered_map<std::string, std::size_t> first_line;  // id -> line number

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        std::string why;
        std::optional<ArticleRecord> rec;
        if (j.is_discarded()) {
            why = "invalid JSON";
        } else {
            rec = parse_record(j, why);
        }
        if (!rec) {
            ++result.skipped;
            result.issues.push_back("line " + std::to_string(lineno) + ": " + why);
            continue;
        }
        auto [it, inserted] = first_line.emplace(rec->article_id, lineno);
        if (!inserted)
            throw ValidationError("duplicate article_id '" + rec->article_id + "' at lines " +
                                  std::to_string(it->second) + " and " + std::to_string(lineno));
        records.push_back(std::move(*rec));
    }
    if (records.empty()) throw ValidationError("no valid records in " + path);
    result.corpus = Corpus(std::move(records));
    return result;
}

namespace {

json record_to_json(const ArticleRecord& r) {
    return json{{"article_id", r.article_id},
                {"title", r.title},
                {"abstract", r.abstract},
                {"mesh_terms", r.mesh_terms},
                {"publication_types", r.publication_types},
                {"pub_date", r.pub_date.to_string()}};
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write index: " + path);
    json records = json::array();
    for (const auto& r : corpus.records()) records.push_back(record_to_json(r));
    out << json{{"records", std::move(records)}}.dump() << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open index: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("records") || !j["records"].is_array())
        throw ValidationError("not a corpus index: " + path);
    std::vector<ArticleRecord> records;
    for (const auto& rj : j["records"]) {
        std::string why;
        auto rec = parse_record(rj, why);
        if (!rec) throw ValidationError("corrupt index record in " + path + ": " + why);
        records.push_back(std::move(*rec));
    }
    return Corpus(std::move(records));
}

}  // namespace metarank
