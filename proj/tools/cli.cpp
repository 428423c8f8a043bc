#include "ecpe/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "ecpe/cause_model.hpp"
#include "ecpe/clauses.hpp"
#include "ecpe/conllu.hpp"
#include "ecpe/corpus.hpp"
#include "ecpe/embeddings.hpp"
#include "ecpe/emotion_model.hpp"
#include "ecpe/error.hpp"
#include "ecpe/gradcheck.hpp"
#include "ecpe/pipeline.hpp"
#include "ecpe/synthetic.hpp"

namespace ecpe {

namespace {

using nlohmann::ordered_json;

// Output sink that is either a file or the provided stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback)
    {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw DataError("cannot write " + path);
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

struct TrainArgs {
    std::string corpus, parses, embeddings, out;
    std::size_t hidden = 0, mid = 80, epochs = 0;
    double lr = 0.003, momentum = 0.9;
    std::uint64_t seed = 0;
};

void add_seed(CLI::App* cmd, std::uint64_t& seed)
{
    cmd->add_option("--seed", seed, "Random seed (env ECPE_SEED; the flag wins)")->envname("ECPE_SEED");
}

void add_train_options(CLI::App* cmd, TrainArgs& a)
{
    cmd->add_option("--corpus", a.corpus, "Corpus JSON-lines file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--parses", a.parses, "CoNLL-U parses")->required()->check(CLI::ExistingFile);
    cmd->add_option("--embeddings", a.embeddings, "Emotion-aware embedding table")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", a.out, "Model output path")->required();
    cmd->add_option("--hidden", a.hidden, "Bi-LSTM hidden size per direction")->capture_default_str();
    cmd->add_option("--mid", a.mid, "Width of the intermediate linear layer")->capture_default_str();
    cmd->add_option("--epochs", a.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--lr", a.lr, "SGD learning rate")->capture_default_str();
    cmd->add_option("--momentum", a.momentum, "SGD momentum")->capture_default_str();
    add_seed(cmd, a.seed);
}

std::vector<ReviewDocument> load_documents(const std::string& corpus, const std::string& parses,
                                           std::vector<ReviewRecord>& records, std::vector<Sentence>& sentences)
{
    records = load_corpus(corpus);
    sentences = load_conllu(parses);
    return align_reviews(records, sentences);
}

int cmd_build_embeddings(const std::string& emb, const std::string& lex, const std::string& out, std::size_t top_k,
                         std::ostream& log)
{
    const auto table = load_word_embeddings(emb);
    const auto lexicon = load_emotion_lexicon(lex);
    const auto aware = build_emotion_aware_table(table, lexicon, top_k);
    save_word_embeddings(aware, out);
    log << "wrote " << aware.size() << " emotion-aware vectors of dimension " << aware.dim() << " to " << out << "\n";
    return kExitOk;
}

int cmd_extract_clauses(const std::string& parses, const std::string& out_path, std::ostream& out)
{
    const auto sentences = load_conllu(parses);
    Sink sink(out_path, out);
    for (const auto& s : sentences) {
        ordered_json clauses = ordered_json::array();
        for (const auto& c : extract_clauses(s))
            clauses.push_back({{"start", c.span.start}, {"end", c.span.end}, {"verb", c.span.verb}, {"text", c.text()}});
        ordered_json j = {{"review_id", s.review_id}, {"sentence_index", s.sentence_index}, {"clauses", clauses}};
        sink.get() << j.dump() << "\n";
    }
    return kExitOk;
}

std::ostream& print_loss(std::ostream& out, std::size_t epoch, double loss)
{
    return out << "epoch " << epoch << " loss " << std::setprecision(17) << loss << std::defaultfloat << "\n";
}

int cmd_train_emotion(const TrainArgs& a, std::ostream& out)
{
    std::vector<ReviewRecord> records;
    std::vector<Sentence> sentences;
    const auto docs = load_documents(a.corpus, a.parses, records, sentences);
    const auto table = load_word_embeddings(a.embeddings);
    const auto examples = emotion_examples(docs);
    if (examples.empty()) throw DataError("corpus has no reviews with a gold emotion and parses");
    TrainOptions opts{a.epochs, {a.lr, a.momentum}, a.seed,
                      [&](std::size_t e, double l) { print_loss(out, e, l).flush(); }};
    auto result = train_emotion(examples, table, {table.dim(), a.hidden, a.mid}, opts);
    result.model.save(a.out);
    if (result.skipped) out << "skipped " << result.skipped << " examples with no known tokens\n";
    return kExitOk;
}

int cmd_train_cause(const TrainArgs& a, std::ostream& out, std::ostream& err)
{
    std::vector<ReviewRecord> records;
    std::vector<Sentence> sentences;
    const auto docs = load_documents(a.corpus, a.parses, records, sentences);
    const auto table = load_word_embeddings(a.embeddings);
    const auto examples = cause_examples(docs);
    if (examples.empty()) throw DataError("corpus has no reviews with gold cause annotations and parses");
    TrainOptions opts{a.epochs, {a.lr, a.momentum}, a.seed,
                      [&](std::size_t e, double l) { print_loss(out, e, l).flush(); }};
    auto result = train_cause(examples, table, {table.dim(), a.hidden, a.mid}, opts);
    result.model.save(a.out);
    if (result.single_label) err << "warning: training data contained a single label\n";
    if (result.skipped) out << "skipped " << result.skipped << " examples with no known tokens\n";
    return kExitOk;
}

struct ScoreArgs {
    std::string corpus, parses, embeddings, emotion_model, cause_model, out;
};

int cmd_score_causes(const ScoreArgs& a, std::ostream& out)
{
    std::vector<ReviewRecord> records;
    std::vector<Sentence> sentences;
    const auto docs = load_documents(a.corpus, a.parses, records, sentences);
    const auto table = load_word_embeddings(a.embeddings);
    const auto emotion = EmotionClassifier::load(a.emotion_model);
    const auto cause = CauseScorer::load(a.cause_model);
    Sink sink(a.out, out);
    nn::Rng unused(0);
    for (const auto& d : docs) {
        const auto clauses = d.clauses();
        if (clauses.empty()) continue;
        CauseSelection sel;
        try {
            const auto probs = emotion_probs(forward_emotion(emotion, d.tokens(), table, false, unused));
            sel = select_cause_clause(cause, clauses, probs, table);
        } catch (const DataError&) {
            continue;
        }
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            ordered_json j = {{"review_id", d.record->review_id}, {"clause_index", i}};
            if (std::isnan(sel.scores[i]))
                j["score"] = nullptr;
            else
                j["score"] = sel.scores[i];
            j["selected"] = i == sel.clause_index;
            sink.get() << j.dump() << "\n";
        }
    }
    return kExitOk;
}

struct SummarizeArgs {
    PipelineConfig cfg;
    std::string out, text, dump_2d;
};

int cmd_summarize(const SummarizeArgs& a, std::ostream& out)
{
    const auto report = run_pipeline(a.cfg);
    if (!a.out.empty()) {
        Sink sink(a.out, out);
        sink.get() << report_json(report).dump(2) << "\n";
    }
    if (!a.text.empty() || a.out.empty()) {
        Sink sink(a.text, out);
        sink.get() << report_text(report);
    }
    if (!a.dump_2d.empty()) {
        Sink sink(a.dump_2d, out);
        sink.get() << projection_json(report).dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_gen_synthetic(const SyntheticConfig& cfg, const std::string& dir, std::ostream& out)
{
    const auto corpus = generate_synthetic_corpus(cfg);
    write_synthetic_corpus(corpus, dir);
    out << "wrote " << corpus.records.size() << " reviews for " << cfg.products << " products to " << dir << "\n";
    return kExitOk;
}

int cmd_gradient_check(std::uint64_t seed, std::size_t count, std::ostream& out)
{
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < count; ++i) seeds.push_back(seed + i);
    double worst = 0.0;
    for (const auto& r : run_gradient_checks(seeds)) {
        out << r.name << " seed " << r.seed << ": max relative error " << std::scientific << std::setprecision(3)
            << r.result.max_relative_error << std::defaultfloat << " over " << r.result.checked << " parameters (worst " << r.result.worst_param << ")\n";
        worst = std::max(worst, r.result.max_relative_error);
    }
    out << "max relative error " << std::scientific << std::setprecision(6) << worst << std::defaultfloat << "\n";
    return worst < kGradCheckTolerance ? kExitOk : kExitData;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Emotion-cause pair extraction and review summarisation", "ecpe"};
    app.require_subcommand(1);

    std::string emb_in, lex_in, emb_out;
    std::size_t top_k = kDefaultTopK;
    auto* build = app.add_subcommand("build-embeddings", "Build the emotion-aware embedding table");
    build->add_option("--embeddings", emb_in, "Raw embeddings (word2vec text)")->required()->check(CLI::ExistingFile);
    build->add_option("--lexicon", lex_in, "Emotion intensity lexicon (TSV)")->required()->check(CLI::ExistingFile);
    build->add_option("--out", emb_out, "Output embedding file")->required();
    build->add_option("--top-k", top_k, "Emotion words blended per word")->capture_default_str()->check(CLI::PositiveNumber);

    std::string parses_in, clauses_out;
    auto* extract = app.add_subcommand("extract-clauses", "Segment CoNLL-U sentences into clauses");
    extract->add_option("--parses", parses_in, "CoNLL-U file")->required()->check(CLI::ExistingFile);
    extract->add_option("--out", clauses_out, "Output JSON-lines file (default stdout)");

    TrainArgs emo{.hidden = 256, .epochs = kEmotionEpochs};
    auto* train_emo = app.add_subcommand("train-emotion", "Train the review emotion classifier");
    add_train_options(train_emo, emo);

    TrainArgs cau{.hidden = 1024, .epochs = kCauseEpochs};
    auto* train_cau = app.add_subcommand("train-cause", "Train the cause-clause scorer");
    add_train_options(train_cau, cau);

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score-causes", "Score every clause of every review as a cause");
    score_cmd->add_option("--corpus", score.corpus)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--parses", score.parses)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--embeddings", score.embeddings, "Emotion-aware embeddings")->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--emotion-model", score.emotion_model)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--cause-model", score.cause_model)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--out", score.out, "Output JSON-lines file (default stdout)");

    SummarizeArgs sum;
    auto* summarize = app.add_subcommand("summarize", "Extract, cluster and summarise causes per product and emotion");
    summarize->add_option("--corpus", sum.cfg.corpus)->required()->check(CLI::ExistingFile);
    summarize->add_option("--parses", sum.cfg.parses)->required()->check(CLI::ExistingFile);
    summarize->add_option("--raw-embeddings", sum.cfg.raw_embeddings)->required()->check(CLI::ExistingFile);
    summarize->add_option("--aware-embeddings", sum.cfg.aware_embeddings)->required()->check(CLI::ExistingFile);
    summarize->add_option("--emotion-model", sum.cfg.emotion_model)->required()->check(CLI::ExistingFile);
    summarize->add_option("--cause-model", sum.cfg.cause_model)->required()->check(CLI::ExistingFile);
    summarize->add_option("--threshold", sum.cfg.threshold, "Complete-linkage merge threshold")->capture_default_str();
    summarize->add_option("--out", sum.out, "JSON report path");
    summarize->add_option("--text", sum.text, "Text report path (default stdout when --out is not given)");
    summarize->add_option("--dump-2d", sum.dump_2d, "Write 2-D projections of clustered clause vectors");

    SyntheticConfig syn;
    std::string syn_dir;
    auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic annotated review corpus");
    gen->add_option("--out-dir", syn_dir, "Output directory")->required();
    gen->add_option("--products", syn.products, "Number of products")->capture_default_str();
    gen->add_option("--reviews", syn.reviews, "Number of reviews")->capture_default_str();
    gen->add_option("--dim", syn.dim, "Embedding dimension")->capture_default_str();
    add_seed(gen, syn.seed);

    std::uint64_t gc_seed = 0;
    std::size_t gc_count = 5;
    auto* grad = app.add_subcommand("gradient-check", "Finite-difference check of every analytic gradient");
    grad->add_option("--seeds", gc_count, "Number of seeds to check")->capture_default_str()->check(CLI::PositiveNumber);
    add_seed(grad, gc_seed);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        err << app.help();
        return kExitUsage;
    }

    try {
        if (*build) return cmd_build_embeddings(emb_in, lex_in, emb_out, top_k, out);
        if (*extract) return cmd_extract_clauses(parses_in, clauses_out, out);
        if (*train_emo) return cmd_train_emotion(emo, out);
        if (*train_cau) return cmd_train_cause(cau, out, err);
        if (*score_cmd) return cmd_score_causes(score, out);
        if (*summarize) return cmd_summarize(sum, out);
        if (*gen) return cmd_gen_synthetic(syn, syn_dir, out);
        if (*grad) return cmd_gradient_check(gc_seed, gc_count, out);
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace ecpe
