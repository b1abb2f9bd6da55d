#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lpqa/io.hpp"

using namespace lpqa;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    TempFile(const std::string& name, const std::string& content) {
        path = fs::temp_directory_path() / name;
        std::ofstream(path) << content;
    }
    ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("load_kb ingests TSV") {
    TempFile f("kb_basic.tsv", "f1\tfriction causes heat\nf2\ta stick is an object\n");
    TermConfig cfg;
    const auto facts = load_kb(f.path.string(), FactKind::Grounding, cfg);
    REQUIRE(facts.size() == 2);
    CHECK(facts[0].id == "f1");
    CHECK(facts[0].kind == FactKind::Grounding);
    CHECK(facts[1].terms.count("stick") == 1);
}

TEST_CASE("load_kb rejects duplicate ids") {
    TempFile f("kb_dup.tsv", "f1\talpha\nf1\tbeta\n");
    TermConfig cfg;
    CHECK_THROWS_WITH_AS(load_kb(f.path.string(), FactKind::Abstract, cfg),
                         doctest::Contains("duplicate fact id: f1"), DataError);
}

TEST_CASE("load_kb on an empty file yields an empty list") {
    TempFile f("kb_empty.tsv", "");
    TermConfig cfg;
    CHECK(load_kb(f.path.string(), FactKind::Grounding, cfg).empty());
}

TEST_CASE("load_kb ingests JSONL and reports parse errors with line numbers") {
    TempFile ok("kb.jsonl",
                R"({"id":"a1","text":"water is a liquid"})" "\n"
                R"({"id":"a2","text":"ice is solid water"})" "\n");
    TermConfig cfg;
    const auto facts = load_kb(ok.path.string(), FactKind::Abstract, cfg);
    CHECK(facts.size() == 2);

    TempFile bad("kb_bad.jsonl", "{\"id\":\"a1\",\"text\":\"x\"}\nnot json\n");
    CHECK_THROWS_WITH_AS(load_kb(bad.path.string(), FactKind::Abstract, cfg),
                         doctest::Contains(":2"), DataError);
}

TEST_CASE("KB ingestion round-trips through the index artifact") {
    TermConfig cfg;
    cfg.stopwords = {"is", "a"};
    TempFile f("kb_rt.tsv", "f1\ta stick is an object\nf2\tfriction causes heat\n");
    const auto facts = load_kb(f.path.string(), FactKind::Grounding, cfg);

    const auto artifact = (fs::temp_directory_path() / "kb_rt.index.json").string();
    save_index(facts, FactKind::Grounding, 1.2, 0.75, artifact);
    const LoadedIndex reloaded = load_index(artifact);
    fs::remove(artifact);

    REQUIRE(reloaded.facts.size() == facts.size());
    for (std::size_t i = 0; i < facts.size(); ++i) {
        CHECK(reloaded.facts[i].id == facts[i].id);
        CHECK(reloaded.facts[i].terms == facts[i].terms);
    }
}

TEST_CASE("questions load with gold fields validated") {
    TempFile f("questions.jsonl",
               R"({"id":"q1","stem":"what melts ice","choices":["heat","cold"],"answer_index":0,"gold_explanation":["a1"]})" "\n");
    const auto qs = load_questions(f.path.string());
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].gold_answer == 0);
    CHECK(qs[0].gold_explanation->count("a1") == 1);

    TempFile bad("questions_bad.jsonl",
                 R"({"id":"q1","stem":"s","choices":["a","b"],"answer_index":5})" "\n");
    CHECK_THROWS_AS(load_questions(bad.path.string()), DataError);
}

TEST_CASE("KnowledgeBase lookups") {
    std::vector<Fact> facts{{"f1", "t", FactKind::Grounding, {}},
                            {"f2", "t", FactKind::Grounding, {}}};
    KnowledgeBase kb(facts);
    CHECK(kb.find("f1") != nullptr);
    CHECK(kb.find("nope") == nullptr);

    facts.push_back({"f1", "dup", FactKind::Grounding, {}});
    CHECK_THROWS_AS(KnowledgeBase{facts}, DataError);
}
