#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpqa/io.hpp"

namespace fs = std::filesystem;
using namespace lpqa;

namespace {

AblationFlags parse_ablation(const std::string& list) {
    AblationFlags flags;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "no_grouping") flags.no_grouping = true;
        else if (item == "no_overlap") flags.no_overlap = true;
        else if (item == "no_relevance") flags.no_relevance = true;
        else if (item == "no_chaining") flags.no_chaining = true;
        else if (item == "no_grounding_neighbor") flags.no_grounding_neighbor = true;
        else if (item == "no_tuning") flags.no_tuning = true;
        else throw ConfigError("unknown ablation flag: " + item);
    }
    return flags;
}

std::string ablation_tag(const AblationFlags& f) {
    std::string tag;
    auto add = [&](bool on, const char* name) {
        if (on) tag += std::string("_") + name;
    };
    add(f.no_grouping, "no_grouping");
    add(f.no_overlap, "no_overlap");
    add(f.no_relevance, "no_relevance");
    add(f.no_chaining, "no_chaining");
    add(f.no_grounding_neighbor, "no_grounding_neighbor");
    add(f.no_tuning, "no_tuning");
    return tag;
}

struct CommonArgs {
    std::string grounding_index;
    std::string abstract_index;
    std::string questions;
    std::string theta_path;
    std::string term_config;
    std::string train_questions;
    std::string out = ".";
    int k = 10;
    int big_k = 2;
    int l = -1;
    int m = -1;
    std::string scorer = "bm25";
    std::string ablation;
    double lambda_mix = 0.5;
    int top_j = 10;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--grounding-index", a.grounding_index, "Grounding index artifact")
        ->required();
    cmd->add_option("--abstract-index", a.abstract_index, "Abstract index artifact")
        ->required();
    cmd->add_option("--questions", a.questions, "Questions JSONL")->required();
    cmd->add_option("--term-config", a.term_config, "Term config JSON");
    cmd->add_option("--k", a.k, "Total retrieved facts per candidate (even)");
    cmd->add_option("--big-k", a.big_k, "Abstract fact limit K");
    cmd->add_option("--l", a.l, "Top grounding facts (overrides l = k/2)");
    cmd->add_option("--m", a.m, "Top abstract facts (overrides m = k/2)");
    cmd->add_option("--scorer", a.scorer, "bm25 or unification")
        ->check(CLI::IsMember({"bm25", "unification"}));
    cmd->add_option("--train-questions", a.train_questions,
                    "Training questions for the unification scorer");
    cmd->add_option("--lambda-mix", a.lambda_mix, "Unification BM25 mix weight");
    cmd->add_option("--top-j", a.top_j, "Similar training questions for unification");
    cmd->add_option("--ablation", a.ablation, "Comma list of ablation flags");
    cmd->add_option("--jobs", a.jobs, "Worker thread cap");
    cmd->add_option("--out", a.out, "Output directory");
}

Pipeline make_pipeline(const CommonArgs& a, const AblationFlags& flags) {
    TermConfig cfg;
    if (!a.term_config.empty()) cfg = load_term_config(a.term_config);
    LoadedIndex g = load_index(a.grounding_index);
    LoadedIndex abs = load_index(a.abstract_index);
    if (g.kind != FactKind::Grounding)
        throw ConfigError("--grounding-index does not hold a grounding KB");
    if (abs.kind != FactKind::Abstract)
        throw ConfigError("--abstract-index does not hold an abstract KB");

    PipelineConfig pcfg;
    if (a.l >= 0 || a.m >= 0) {
        pcfg.l = std::max(a.l, 0);
        pcfg.m = std::max(a.m, 0);
    } else {
        if (a.k < 2 || a.k % 2 != 0)
            throw ConfigError("--k must be even and >= 2 (or pass --l/--m)");
        pcfg.l = pcfg.m = a.k / 2;
    }
    if (a.big_k < 1) throw ConfigError("--big-k must be >= 1");
    pcfg.abstract_limit = a.big_k;
    pcfg.scorer = a.scorer == "unification" ? Scorer::Unification : Scorer::BM25;
    pcfg.ablation = flags;
    pcfg.jobs = a.jobs;

    UnificationModel unification;
    if (pcfg.scorer == Scorer::Unification && !a.train_questions.empty()) {
        unification = UnificationModel(load_questions(a.train_questions),
                                       a.lambda_mix, a.top_j, g.k1, g.b);
    }
    return Pipeline(KnowledgeBase(std::move(g.facts)),
                    KnowledgeBase(std::move(abs.facts)), std::move(cfg), pcfg,
                    std::move(unification));
}

int cmd_index(const std::string& grounding_kb, const std::string& abstract_kb,
              const std::string& term_config, double k1, double b,
              const std::string& out) {
    TermConfig cfg;
    if (!term_config.empty()) cfg = load_term_config(term_config);
    fs::create_directories(out);
    if (!grounding_kb.empty()) {
        auto facts = load_kb(grounding_kb, FactKind::Grounding, cfg);
        save_index(facts, FactKind::Grounding, k1, b,
                   (fs::path(out) / "grounding.index.json").string());
        std::cout << "grounding: " << facts.size() << " facts\n";
    }
    if (!abstract_kb.empty()) {
        auto facts = load_kb(abstract_kb, FactKind::Abstract, cfg);
        save_index(facts, FactKind::Abstract, k1, b,
                   (fs::path(out) / "abstract.index.json").string());
        std::cout << "abstract: " << facts.size() << " facts\n";
    }
    if (grounding_kb.empty() && abstract_kb.empty())
        throw ConfigError("pass --grounding-kb and/or --abstract-kb");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abductive multiple-choice QA over grounding-abstract fact graphs"};
    app.require_subcommand(1);

    // index
    auto* index_cmd = app.add_subcommand("index", "Build retrieval index artifacts");
    std::string grounding_kb, abstract_kb, index_term_config, index_out = ".";
    double k1 = 1.2, b = 0.75;
    index_cmd->add_option("--grounding-kb", grounding_kb, "Grounding KB (TSV/JSONL)");
    index_cmd->add_option("--abstract-kb", abstract_kb, "Abstract KB (TSV/JSONL)");
    index_cmd->add_option("--term-config", index_term_config, "Term config JSON");
    index_cmd->add_option("--k1", k1, "BM25 k1");
    index_cmd->add_option("--b", b, "BM25 b");
    index_cmd->add_option("--out", index_out, "Output directory");

    // answer
    auto* answer_cmd = app.add_subcommand("answer", "Answer questions, write predictions");
    CommonArgs answer_args;
    add_common(answer_cmd, answer_args);
    answer_cmd->add_option("--theta", answer_args.theta_path, "Theta params JSON");
    bool dump_graphs = false;
    answer_cmd->add_flag("--dump-graphs", dump_graphs, "Include subgraphs in output");

    // train
    auto* train_cmd = app.add_subcommand("train", "Tune theta by Bayesian optimization");
    CommonArgs train_args;
    add_common(train_cmd, train_args);
    int n_initial = 10, n_iterations = 50;
    std::uint64_t seed = 0;
    std::string kernel = "matern52";
    double length_scale = 0.3, noise = 1e-4;
    train_cmd->add_option("--n-initial", n_initial, "Initial random evaluations");
    train_cmd->add_option("--n-iterations", n_iterations, "BO iterations");
    train_cmd->add_option("--seed", seed, "RNG seed");
    train_cmd->add_option("--kernel", kernel, "matern52 or se")
        ->check(CLI::IsMember({"matern52", "se"}));
    train_cmd->add_option("--length-scale", length_scale, "GP length scale");
    train_cmd->add_option("--noise", noise, "GP observation noise");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
    std::string eval_predictions, eval_questions, eval_term_config, eval_out = ".";
    std::string eval_ablation;
    std::vector<double> expl_edges{2.0, 4.0}, overlap_edges{0.25, 0.5},
        terms_edges{5.0, 10.0};
    bool micro = false;
    eval_cmd->add_option("--predictions", eval_predictions, "Predictions JSONL")
        ->required();
    eval_cmd->add_option("--questions", eval_questions, "Gold questions JSONL")
        ->required();
    eval_cmd->add_option("--term-config", eval_term_config, "Term config JSON");
    eval_cmd->add_option("--ablation", eval_ablation, "Tag for output file names");
    eval_cmd->add_option("--explanation-length-edges", expl_edges, "Bucket edges");
    eval_cmd->add_option("--choice-overlap-edges", overlap_edges, "Bucket edges");
    eval_cmd->add_option("--term-count-edges", terms_edges, "Bucket edges");
    eval_cmd->add_flag("--micro", micro, "Report micro-averaged F1 as well");
    eval_cmd->add_option("--out", eval_out, "Output directory");

    // explain
    auto* explain_cmd = app.add_subcommand("explain", "Inspect one question's graphs");
    CommonArgs explain_args;
    std::string explain_qid;
    bool dump_model = false;
    add_common(explain_cmd, explain_args);
    explain_cmd->add_option("--theta", explain_args.theta_path, "Theta params JSON");
    explain_cmd->add_option("--question-id", explain_qid, "Question to explain")
        ->required();
    explain_cmd->add_flag("--dump-model", dump_model, "Print LP-format models");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*index_cmd) {
            return cmd_index(grounding_kb, abstract_kb, index_term_config, k1, b,
                             index_out);
        }
        if (*answer_cmd) {
            const AblationFlags flags = parse_ablation(answer_args.ablation);
            Pipeline pipeline = make_pipeline(answer_args, flags);
            ThetaParams theta = flags.no_tuning || answer_args.theta_path.empty()
                                    ? ThetaParams::untuned()
                                    : load_theta(answer_args.theta_path);
            auto questions = load_questions(answer_args.questions);
            std::vector<Prediction> predictions;
            for (const auto& q : questions)
                predictions.push_back(pipeline.answer(q, theta, false));
            fs::create_directories(answer_args.out);
            const auto path = fs::path(answer_args.out) /
                              ("predictions" + ablation_tag(flags) + ".jsonl");
            save_predictions(predictions, path.string(), dump_graphs);
            std::cout << "wrote " << predictions.size() << " predictions to "
                      << path.string() << "\n";
            const bool all_gold = !questions.empty() &&
                                  std::all_of(questions.begin(), questions.end(),
                                              [](const Question& q) {
                                                  return q.gold_answer.has_value();
                                              });
            if (all_gold)
                std::cout << "accuracy: " << accuracy(predictions, questions) << "\n";
            return 0;
        }
        if (*train_cmd) {
            const AblationFlags flags = parse_ablation(train_args.ablation);
            Pipeline pipeline = make_pipeline(train_args, flags);
            auto questions = load_questions(train_args.questions);
            if (questions.empty()) throw ConfigError("empty training set");
            for (const auto& q : questions)
                if (!q.gold_answer)
                    throw DataError("training question " + q.id + " has no gold answer");
            auto cached = pipeline.precompute(questions);
            BoConfig cfg;
            cfg.n_initial = n_initial;
            cfg.n_iterations = n_iterations;
            cfg.seed = seed;
            cfg.kernel = kernel == "se" ? KernelType::SquaredExponential
                                        : KernelType::Matern52;
            cfg.length_scale = length_scale;
            cfg.noise = noise;
            const BoTrace trace = optimize(
                [&](const ThetaParams& t) { return pipeline.evaluate_theta(t, cached); },
                cfg);
            fs::create_directories(train_args.out);
            save_trace(trace, (fs::path(train_args.out) / "trace.jsonl").string());
            save_theta(trace.best.theta,
                       (fs::path(train_args.out) / "theta.json").string());
            std::cout << "best training accuracy: " << trace.best.value << "\n";
            return 0;
        }
        if (*eval_cmd) {
            auto questions = load_questions(eval_questions);
            // Reload predictions from file to score exactly what was written.
            std::ifstream in(eval_predictions);
            if (!in) throw ConfigError("cannot open file: " + eval_predictions);
            std::vector<Prediction> predictions;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto j = nlohmann::json::parse(line);
                Prediction p;
                p.question_id = j.at("id").get<std::string>();
                p.chosen_index = j.at("chosen_index").get<int>();
                for (const auto& id : j.at("explanation"))
                    p.explanation.push_back(id.get<std::string>());
                predictions.push_back(std::move(p));
            }
            if (predictions.size() != questions.size())
                throw DataError("prediction/question count mismatch");
            for (std::size_t i = 0; i < questions.size(); ++i)
                if (predictions[i].question_id != questions[i].id)
                    throw DataError("question id mismatch at line " +
                                    std::to_string(i + 1));
            std::cout << "accuracy: " << accuracy(predictions, questions) << "\n";
            const bool any_gold_expl =
                std::any_of(questions.begin(), questions.end(), [](const Question& q) {
                    return q.gold_explanation.has_value();
                });
            if (any_gold_expl) {
                const auto scores = explanation_f1(predictions, questions);
                std::cout << "macro explanation F1: " << scores.macro_f1 << "\n";
                if (micro)
                    std::cout << "micro explanation F1: " << scores.micro_f1 << "\n";
            }
            TermConfig cfg;
            if (!eval_term_config.empty()) cfg = load_term_config(eval_term_config);
            const std::string tag = ablation_tag(parse_ablation(eval_ablation));
            fs::create_directories(eval_out);
            auto emit = [&](BucketBy by, const std::vector<double>& edges,
                            const std::string& name) {
                const auto rows = bucketed_report(predictions, questions, by, edges, cfg);
                save_bucket_csv(rows,
                                (fs::path(eval_out) / (name + tag + ".csv")).string());
            };
            if (any_gold_expl)
                emit(BucketBy::ExplanationLength, expl_edges, "by_explanation_length");
            emit(BucketBy::ChoiceTermOverlap, overlap_edges, "by_choice_overlap");
            emit(BucketBy::UniqueTermCount, terms_edges, "by_term_count");
            return 0;
        }
        if (*explain_cmd) {
            const AblationFlags flags = parse_ablation(explain_args.ablation);
            Pipeline pipeline = make_pipeline(explain_args, flags);
            ThetaParams theta = flags.no_tuning || explain_args.theta_path.empty()
                                    ? ThetaParams::untuned()
                                    : load_theta(explain_args.theta_path);
            auto questions = load_questions(explain_args.questions);
            const auto it = std::find_if(
                questions.begin(), questions.end(),
                [&](const Question& q) { return q.id == explain_qid; });
            if (it == questions.end())
                throw DataError("question id not found: " + explain_qid);
            const Prediction pred = pipeline.answer(*it, theta, true);
            std::cout << "question: " << it->id << "\nchosen: " << pred.chosen_index
                      << " (" << it->choices[pred.chosen_index] << ")\n";
            for (std::size_t c = 0; c < pred.per_choice_omega.size(); ++c) {
                std::cout << "choice " << c << " omega: " << pred.per_choice_omega[c]
                          << "\n";
                std::cout << graph_to_json(pred.graphs[c]) << "\n";
                if (dump_model) {
                    const IlpModel model = emit_constraints(
                        pred.graphs[c], pipeline.config().abstract_limit, flags);
                    std::cout << model.dump();
                }
            }
            std::cout << "explanation:";
            for (const auto& id : pred.explanation) std::cout << " " << id;
            std::cout << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
