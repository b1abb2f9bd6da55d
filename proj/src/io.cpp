#include "lpqa/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lpqa {

namespace {

using json = nlohmann::ordered_json;

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    return in;
}

bool jsonl_extension(const std::string& path) {
    return path.ends_with(".jsonl") || path.ends_with(".json");
}

json parse_line(const std::string& line, const std::string& path, int lineno) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
}

}  // namespace

std::vector<Fact> load_kb(const std::string& path, FactKind kind,
                          const TermConfig& cfg) {
    auto in = open_or_throw(path);
    std::vector<Fact> facts;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    const bool jsonl = jsonl_extension(path);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Fact f;
        if (jsonl) {
            const json j = parse_line(line, path, lineno);
            if (!j.contains("id") || !j.contains("text"))
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": missing id or text");
            f.id = j.at("id").get<std::string>();
            f.text = j.at("text").get<std::string>();
        } else {
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": expected id<TAB>text");
            f.id = line.substr(0, tab);
            f.text = line.substr(tab + 1);
        }
        if (!seen.insert(f.id).second)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": duplicate fact id: " + f.id);
        f.kind = kind;
        f.terms = extract_unique_terms(f.text, cfg);
        facts.push_back(std::move(f));
    }
    return facts;
}

std::vector<Question> load_questions(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<Question> questions;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse_line(line, path, lineno);
        Question q;
        q.id = j.at("id").get<std::string>();
        q.stem = j.at("stem").get<std::string>();
        q.choices = j.at("choices").get<std::vector<std::string>>();
        if (q.choices.size() < 2)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": question needs >= 2 choices");
        if (j.contains("answer_index") && !j.at("answer_index").is_null()) {
            q.gold_answer = j.at("answer_index").get<int>();
            if (*q.gold_answer < 0 ||
                *q.gold_answer >= static_cast<int>(q.choices.size()))
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": answer_index out of range");
        }
        if (j.contains("gold_explanation") && !j.at("gold_explanation").is_null()) {
            TermSet ids;
            for (const auto& id : j.at("gold_explanation"))
                ids.insert(id.get<std::string>());
            q.gold_explanation = std::move(ids);
        }
        questions.push_back(std::move(q));
    }
    return questions;
}

namespace {

std::set<std::string> load_word_list(const std::string& path) {
    auto in = open_or_throw(path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.insert(line);
    }
    return out;
}

}  // namespace

TermConfig load_term_config(const std::string& path) {
    auto in = open_or_throw(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
    TermConfig cfg;
    if (j.contains("lowercase")) cfg.lowercase = j.at("lowercase").get<bool>();
    if (j.contains("stopwords"))
        for (const auto& w : j.at("stopwords")) cfg.stopwords.insert(w.get<std::string>());
    if (j.contains("stopwords_path"))
        for (auto& w : load_word_list(j.at("stopwords_path").get<std::string>()))
            cfg.stopwords.insert(std::move(w));
    if (j.contains("lemmas"))
        for (const auto& [surface, lemma] : j.at("lemmas").items())
            cfg.lemmas[surface] = lemma.get<std::string>();
    if (j.contains("lemmas_path")) {
        auto lin = open_or_throw(j.at("lemmas_path").get<std::string>());
        std::string line;
        while (std::getline(lin, line)) {
            const auto tab = line.find('\t');
            if (tab != std::string::npos)
                cfg.lemmas[line.substr(0, tab)] = line.substr(tab + 1);
        }
    }
    if (j.contains("lexicon")) {
        std::set<std::string> lex;
        for (const auto& w : j.at("lexicon")) lex.insert(w.get<std::string>());
        cfg.lexicon = std::move(lex);
    }
    if (j.contains("lexicon_path"))
        cfg.lexicon = load_word_list(j.at("lexicon_path").get<std::string>());
    return cfg;
}

ThetaParams load_theta(const std::string& path) {
    auto in = open_or_throw(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
    ThetaParams t;
    t.vw = j.at("vw").get<double>();
    t.ew = j.at("ew").get<double>();
    t.gr = j.at("gr").get<double>();
    t.ar = j.at("ar").get<double>();
    t.aa = j.at("aa").get<double>();
    t.ga = j.at("ga").get<double>();
    t.qg = j.at("qg").get<double>();
    t.qa = j.at("qa").get<double>();
    t.gg = j.at("gg").get<double>();
    if (!t.in_domain()) throw DataError(path + ": theta outside its box domains");
    return t;
}

namespace {

json theta_json(const ThetaParams& t) {
    return json{{"vw", t.vw}, {"ew", t.ew}, {"gr", t.gr}, {"ar", t.ar},
                {"aa", t.aa}, {"ga", t.ga}, {"qg", t.qg}, {"qa", t.qa},
                {"gg", t.gg}};
}

void write_or_throw(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace

void save_theta(const ThetaParams& theta, const std::string& path) {
    write_or_throw(path, theta_json(theta).dump(2) + "\n");
}

void save_index(const std::vector<Fact>& facts, FactKind kind, double k1, double b,
                const std::string& path) {
    json j;
    j["format"] = "lpqa-index";
    j["version"] = 1;
    j["kind"] = kind == FactKind::Grounding ? "grounding" : "abstract";
    j["k1"] = k1;
    j["b"] = b;
    json arr = json::array();
    for (const auto& f : facts) {
        arr.push_back({{"id", f.id},
                       {"text", f.text},
                       {"terms", std::vector<std::string>(f.terms.begin(), f.terms.end())}});
    }
    j["facts"] = std::move(arr);
    write_or_throw(path, j.dump() + "\n");
}

LoadedIndex load_index(const std::string& path) {
    auto in = open_or_throw(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
    if (!j.contains("format") || j.at("format") != "lpqa-index")
        throw DataError(path + ": not an lpqa index artifact");
    if (j.at("version").get<int>() != 1)
        throw DataError(path + ": unsupported index version");
    LoadedIndex idx;
    idx.kind = j.at("kind") == "grounding" ? FactKind::Grounding : FactKind::Abstract;
    idx.k1 = j.at("k1").get<double>();
    idx.b = j.at("b").get<double>();
    for (const auto& jf : j.at("facts")) {
        Fact f;
        f.id = jf.at("id").get<std::string>();
        f.text = jf.at("text").get<std::string>();
        f.kind = idx.kind;
        for (const auto& t : jf.at("terms")) f.terms.insert(t.get<std::string>());
        idx.facts.push_back(std::move(f));
    }
    return idx;
}

std::string graph_to_json(const CandidateGraph& graph) {
    json j;
    json nodes = json::array();
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        const char* kind = n.kind == NodeKind::Question ? "question"
                           : n.kind == NodeKind::Grounding ? "grounding"
                                                           : "abstract";
        nodes.push_back({{"id", i},
                         {"kind", kind},
                         {"fact_id", n.fact_id},
                         {"relevance", n.relevance},
                         {"weight", n.weight}});
    }
    json edges = json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"u", e.u}, {"v", e.v}, {"overlap", e.raw_overlap},
                         {"weight", e.weight}});
    }
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    return j.dump();
}

void save_predictions(const std::vector<Prediction>& predictions,
                      const std::string& path, bool dump_graphs) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    for (const auto& p : predictions) {
        json j;
        j["id"] = p.question_id;
        j["chosen_index"] = p.chosen_index;
        json omegas = json::array();
        for (double o : p.per_choice_omega) {
            if (std::isinf(o))
                omegas.push_back("-inf");  // JSON has no infinities
            else
                omegas.push_back(o);
        }
        j["omega"] = std::move(omegas);
        j["explanation"] = p.explanation;
        if (dump_graphs) {
            json subgraphs = json::array();
            for (const auto& s : p.subgraphs) {
                subgraphs.push_back(
                    {{"status", s.status == SubgraphSolution::Status::Optimal
                                    ? "optimal"
                                    : "infeasible"},
                     {"vertices", s.selected_vertices},
                     {"edges", s.selected_edges}});
            }
            j["subgraphs"] = std::move(subgraphs);
        }
        out << j.dump() << "\n";
    }
}

void save_trace(const BoTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    for (const auto& ev : trace.evaluations) {
        json j = theta_json(ev.theta);
        j["accuracy"] = ev.value;
        out << j.dump() << "\n";
    }
}

void save_bucket_csv(const std::vector<BucketRow>& rows, const std::string& path) {
    std::ostringstream os;
    os << "bucket_lo,bucket_hi,n,accuracy\n";
    for (const auto& r : rows) {
        auto bound = [](double x) -> std::string {
            if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
            std::ostringstream b;
            b << x;
            return b.str();
        };
        os << bound(r.lo) << "," << bound(r.hi) << "," << r.n << "," << r.accuracy
           << "\n";
    }
    write_or_throw(path, os.str());
}

}  // namespace lpqa
