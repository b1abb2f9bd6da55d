#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lpqa/io.hpp"
#include "test_util.hpp"

using namespace lpqa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("theta round-trips through JSON and validates domains") {
    ThetaParams t;
    t.vw = 0.76; t.ew = 0.80; t.gr = 0.36; t.ar = 0.03; t.aa = 0.01;
    t.ga = 0.14; t.qg = 0.98; t.qa = 0.10; t.gg = -0.99;
    const auto path = (fs::temp_directory_path() / "theta_rt.json").string();
    save_theta(t, path);
    const ThetaParams back = load_theta(path);
    CHECK(back.qg == t.qg);
    CHECK(back.gg == t.gg);

    std::ofstream(path) << R"({"vw":2.0,"ew":1,"gr":1,"ar":1,"aa":1,"ga":1,"qg":1,"qa":1,"gg":-1})";
    CHECK_THROWS_AS(load_theta(path), DataError);
    fs::remove(path);
}

TEST_CASE("index artifact carries a versioned header") {
    const auto path = (fs::temp_directory_path() / "idx_hdr.json").string();
    std::ofstream(path) << R"({"format":"something-else","version":1})";
    CHECK_THROWS_AS(load_index(path), DataError);
    std::ofstream(path)
        << R"({"format":"lpqa-index","version":99,"kind":"grounding","k1":1.2,"b":0.75,"facts":[]})";
    CHECK_THROWS_AS(load_index(path), DataError);
    fs::remove(path);
}

TEST_CASE("term config loads inline tables and path references") {
    const auto dir = fs::temp_directory_path();
    const auto stop_path = dir / "stop.txt";
    std::ofstream(stop_path) << "the\nof\n";
    const auto cfg_path = dir / "termcfg.json";
    std::ofstream(cfg_path) << R"({
        "lowercase": true,
        "stopwords": ["a"],
        "stopwords_path": ")" << stop_path.string() << R"(",
        "lemmas": {"causes": "cause"},
        "lexicon": ["cause", "heat"]
    })";
    const TermConfig cfg = load_term_config(cfg_path.string());
    CHECK(cfg.stopwords.count("the") == 1);
    CHECK(cfg.stopwords.count("a") == 1);
    CHECK(cfg.lemmas.at("causes") == "cause");
    REQUIRE(cfg.lexicon.has_value());
    CHECK(cfg.lexicon->count("heat") == 1);
    CHECK(extract_unique_terms("the causes of heat", cfg) == TermSet{"cause", "heat"});
    fs::remove(stop_path);
    fs::remove(cfg_path);
}

TEST_CASE("predictions serialize infeasible omegas and are deterministic") {
    Prediction p;
    p.question_id = "q1";
    p.chosen_index = 1;
    p.per_choice_omega = {kInfeasibleOmega, 0.5};
    p.explanation = {"a1", "a2"};
    p.subgraphs.resize(2);
    const auto path1 = (fs::temp_directory_path() / "pred1.jsonl").string();
    const auto path2 = (fs::temp_directory_path() / "pred2.jsonl").string();
    save_predictions({p}, path1);
    save_predictions({p}, path2);
    const std::string a = slurp(path1);
    CHECK(a == slurp(path2));
    CHECK(a.find("-inf") != std::string::npos);
    CHECK(a.find("\"a1\"") != std::string::npos);
    fs::remove(path1);
    fs::remove(path2);
}

TEST_CASE("trace JSONL has one line per evaluation") {
    BoTrace trace;
    for (int i = 0; i < 5; ++i)
        trace.evaluations.push_back({ThetaParams::untuned(), 0.1 * i});
    const auto path = (fs::temp_directory_path() / "trace.jsonl").string();
    save_trace(trace, path);
    std::ifstream in(path);
    int lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 5);
    fs::remove(path);
}

TEST_CASE("bucket CSV has a header and one row per bucket") {
    std::vector<BucketRow> rows(3);
    rows[0] = {-std::numeric_limits<double>::infinity(), 2.0, 4, 0.75};
    rows[1] = {2.0, 4.0, 2, 0.5};
    rows[2] = {4.0, std::numeric_limits<double>::infinity(), 0, 0.0};
    const auto path = (fs::temp_directory_path() / "buckets.csv").string();
    save_bucket_csv(rows, path);
    const std::string csv = slurp(path);
    CHECK(csv.find("bucket_lo,bucket_hi,n,accuracy") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("-inf,2,4,0.75") != std::string::npos);
    fs::remove(path);
}

TEST_CASE("graph JSON dump lists nodes and edges") {
    std::mt19937_64 rng(1);
    const CandidateGraph g = lpqa::testutil::random_graph(rng, 6);
    const std::string j = graph_to_json(g);
    CHECK(j.find("\"nodes\"") != std::string::npos);
    CHECK(j.find("\"edges\"") != std::string::npos);
    CHECK(j.find("question") != std::string::npos);
}
