#include "biaslens/cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "biaslens/biasmeter.hpp"
#include "biaslens/corpus.hpp"
#include "biaslens/error.hpp"
#include "biaslens/extract.hpp"
#include "biaslens/hash.hpp"
#include "biaslens/lexicon.hpp"
#include "biaslens/report_io.hpp"
#include "biaslens/robustness.hpp"
#include "biaslens/sentiment.hpp"
#include "biaslens/temporal.hpp"
#include "biaslens/version.hpp"
#include "biaslens/weat.hpp"

namespace biaslens::cli {

namespace {

using report::Manifest;

struct CorpusArgs {
    std::string path;
    std::string format = "plaintext";
    std::string source_tag = "corpus";
    bool lenient = false;
};

corpus::CorpusStream load_corpus(const CorpusArgs& args, corpus::IngestStats* stats = nullptr) {
    corpus::IngestOptions opts;
    opts.source_tag = args.source_tag;
    opts.lenient = args.lenient;
    if (args.format == "plaintext") return corpus::ingest_plaintext(args.path, opts, stats);
    if (args.format == "jsonl") return corpus::ingest_jsonl(args.path, opts, stats);
    throw Error("cli_report", "usage", "unknown corpus format \"" + args.format + "\"");
}

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
    cmd->add_option("--corpus", args.path, "corpus file")->required();
    cmd->add_option("--format", args.format, "plaintext|jsonl (default plaintext)");
    cmd->add_option("--source-tag", args.source_tag, "source tag for sentence ids");
    cmd->add_flag("--lenient", args.lenient, "skip malformed lines instead of failing");
}

struct ScorerArgs {
    std::string spec;
    std::string id;
    long timeout = 300;
};

std::unique_ptr<sentiment::Scorer> build_scorer(const ScorerArgs& args, int workers) {
    sentiment::ScorerSpec spec = sentiment::ScorerSpec::parse(args.spec);
    spec.id = args.id;
    spec.timeout_seconds = args.timeout;
    return sentiment::make_scorer(spec, workers);
}

// Semantic args recorded in the manifest. Output paths, worker counts and
// cache locations stay out so reruns produce byte-identical reports.
class ManifestBuilder {
public:
    explicit ManifestBuilder(std::string subcommand) { m_.subcommand = std::move(subcommand); }

    ManifestBuilder& arg(const std::string& flag, const std::string& value) {
        m_.args.push_back(flag + "=" + value);
        return *this;
    }
    ManifestBuilder& arg(const std::string& flag, long long value) {
        return arg(flag, std::to_string(value));
    }
    ManifestBuilder& corpus(const CorpusArgs& args, const corpus::CorpusStream& stream) {
        arg("--format", args.format);
        arg("--source-tag", args.source_tag);
        m_.inputs["corpus"] = Manifest::corpus_fingerprint(args.path, stream);
        return *this;
    }
    ManifestBuilder& file_input(const std::string& name, const std::string& path) {
        m_.inputs[name] = Manifest::file_fingerprint(path);
        return *this;
    }
    ManifestBuilder& scorer(const std::string& scorer_id) {
        m_.inputs["scorer_id"] = scorer_id;
        return *this;
    }
    ManifestBuilder& seed(const std::string& name, std::uint64_t value) {
        m_.seeds.emplace_back(name, value);
        return *this;
    }
    Manifest build() const { return m_; }

private:
    Manifest m_;
};

// --- subcommand payloads -------------------------------------------------

struct PartitionCmd {
    CorpusArgs corpus;
    std::string lexicon_path;
    std::string out_dir;
    long max_token_distance = -1;
    int workers = 1;

    int execute() const {
        const auto lex = lexicon::load_lexicon_file(lexicon_path);
        const auto stream = load_corpus(corpus);
        extract::PartitionOptions opts;
        opts.max_token_distance = max_token_distance;
        opts.workers = workers;
        const auto part = extract::partition(stream, lex, opts);

        Manifest manifest = ManifestBuilder("partition")
                                .corpus(corpus, stream)
                                .file_input("lexicon", lexicon_path)
                                .arg("--max-token-distance", max_token_distance)
                                .build();
        report::write_partition_dir(part, out_dir, manifest);
        std::cout << "partitioned " << stream.total_count() << " sentences: explicit_i="
                  << part.counts.explicit_i << " explicit_j=" << part.counts.explicit_j
                  << " implicit_i=" << part.counts.implicit_i
                  << " implicit_j=" << part.counts.implicit_j << " rest=" << part.counts.rest
                  << " ambiguous=" << part.counts.ambiguous << "\n";
        return 0;
    }
};

struct BiasCmd {
    std::string partition_dir;
    ScorerArgs scorer;
    std::string out_path;
    std::uint64_t resamples = 10000;
    std::uint64_t seed = 42;
    double threshold = 0.0001;
    int workers = 1;

    int execute() const {
        const auto part = report::read_partition_dir(partition_dir);
        auto s = build_scorer(scorer, workers);
        auto cache = sentiment::ScoreCache::from_env();

        biasmeter::MeasureConfig config;
        config.n_resamples = resamples;
        config.seed = seed;
        config.workers = workers;
        config.significance_threshold = threshold;
        const auto report_data = biasmeter::measure(part, *s, config, cache.get());

        ManifestBuilder mb("bias");
        for (const char* name :
             {"counts.json", "explicit_i.jsonl", "explicit_j.jsonl", "implicit_i.jsonl",
              "implicit_j.jsonl"})
            mb.file_input(name, (std::filesystem::path(partition_dir) / name).string());
        const Manifest manifest = mb.scorer(s->id())
                                      .arg("--resamples", static_cast<long long>(resamples))
                                      .arg("--threshold", std::to_string(threshold))
                                      .seed("permutation", seed)
                                      .build();
        report::write_json_atomic(report::bias_report_json(report_data, manifest), out_path);
        std::cout << "explicit_bias=" << report_data.explicit_bias
                  << " implicit_bias=" << report_data.implicit_bias
                  << " p=" << report_data.p_value << "\n";
        return 0;
    }
};

struct WeatCmd {
    std::string embeddings_path;
    CorpusArgs corpus;
    std::string lexicon_path;
    std::string out_path;
    std::string mode = "exact";
    std::string sign_convention = "default";
    bool filtered = false;
    bool compare_filtered = false;
    std::uint64_t seed = 42;
    long window = 5;
    long dimension = 0;
    long min_count = 2;
    long max_vocab = 20000;
    long max_token_distance = -1;
    int workers = 1;

    weat::PvalueMode pvalue_mode() const {
        if (mode == "exact") return weat::PvalueMode::Exact;
        if (mode == "mc") return weat::PvalueMode::MonteCarlo;
        throw Error("cli_report", "usage", "unknown --mode \"" + mode + "\" (exact|mc)");
    }
    weat::SignConvention convention() const {
        if (sign_convention == "default") return weat::SignConvention::JMinusI;
        if (sign_convention == "caliskan") return weat::SignConvention::Caliskan;
        throw Error("cli_report", "usage",
                    "unknown --sign-convention \"" + sign_convention + "\" (default|caliskan)");
    }
    weat::TrainParams train_params() const {
        weat::TrainParams params;
        params.window = static_cast<std::size_t>(window);
        params.dimension = static_cast<std::size_t>(dimension);
        params.min_count = static_cast<std::size_t>(min_count);
        params.max_vocab = static_cast<std::size_t>(max_vocab);
        params.seed = seed;
        params.workers = workers;
        return params;
    }

    int execute() const {
        const auto lex = lexicon::load_lexicon_file(lexicon_path);
        ManifestBuilder mb("weat");
        mb.file_input("lexicon", lexicon_path);
        mb.arg("--mode", mode).arg("--sign-convention", sign_convention).seed("weat", seed);

        if (!embeddings_path.empty()) {
            weat::LoadStats stats;
            const auto table = weat::load_embeddings(embeddings_path, &stats);
            mb.file_input("embeddings", embeddings_path);
            const auto input = weat::resolve_weat_input(lex, table);
            const auto rep = weat::run_weat(input, pvalue_mode(), seed, convention(), workers);
            report::write_json_atomic(report::weat_report_json(rep, mb.build()), out_path);
            std::cout << "statistic=" << rep.statistic << " effect_size=" << rep.effect_size
                      << " p=" << rep.p_value << " (" << rep.method << ")\n";
            return 0;
        }
        if (corpus.path.empty())
            throw Error("cli_report", "usage", "weat needs --embeddings or --train-on");

        const auto stream = load_corpus(corpus);
        mb.corpus(corpus, stream);
        mb.arg("--window", window)
            .arg("--dimension", dimension)
            .arg("--min-count", min_count)
            .arg("--max-vocab", max_vocab);

        if (compare_filtered) {
            const auto rep = weat::joint_vs_implicit(stream, lex, train_params(), pvalue_mode(),
                                                     seed, convention(), workers);
            report::write_json_atomic(report::joint_vs_implicit_json(rep, mb.build()), out_path);
            std::cout << "joint effect_size=" << rep.joint.effect_size
                      << " implicit_only effect_size=" << rep.implicit_only.effect_size
                      << " difference=" << rep.effect_size_difference << "\n";
            return 0;
        }

        corpus::CorpusStream train_stream = stream;
        std::size_t removed = 0;
        if (filtered) {
            extract::PartitionOptions opts;
            opts.max_token_distance = max_token_distance;
            opts.workers = workers;
            train_stream = extract::filter_explicit(stream, {lex}, &removed, opts);
            mb.arg("--filtered", "true");
        }
        const auto table = weat::train_embeddings(train_stream, train_params());
        const auto input = weat::resolve_weat_input(lex, table);
        const auto rep = weat::run_weat(input, pvalue_mode(), seed, convention(), workers);
        report::write_json_atomic(report::weat_report_json(rep, mb.build()), out_path);
        std::cout << "statistic=" << rep.statistic << " effect_size=" << rep.effect_size
                  << " p=" << rep.p_value << " (" << rep.method << ")";
        if (filtered) std::cout << " [explicit statements removed: " << removed << "]";
        std::cout << "\n";
        return 0;
    }
};

struct EvolveCmd {
    CorpusArgs corpus;
    std::string lexicon_path;
    ScorerArgs scorer;
    std::string out_path;
    std::string csv_path;
    std::uint64_t min_statements = 20;
    std::uint64_t resamples = 10000;
    std::uint64_t seed = 42;
    long max_token_distance = -1;
    int workers = 1;

    int execute() const {
        const auto lex = lexicon::load_lexicon_file(lexicon_path);
        corpus::CorpusStream stream = load_corpus(corpus);
        auto s = build_scorer(scorer, workers);
        auto cache = sentiment::ScoreCache::from_env();

        temporal::EvolutionConfig config;
        config.min_statements = min_statements;
        config.n_resamples = resamples;
        config.seed = seed;
        config.workers = workers;
        config.max_token_distance = max_token_distance;
        const auto series = temporal::evolution(stream, lex, *s, config, cache.get());

        const Manifest manifest = ManifestBuilder("evolve")
                                      .corpus(corpus, stream)
                                      .file_input("lexicon", lexicon_path)
                                      .scorer(s->id())
                                      .arg("--min-statements", static_cast<long long>(min_statements))
                                      .arg("--resamples", static_cast<long long>(resamples))
                                      .seed("permutation", seed)
                                      .build();
        report::write_json_atomic(report::evolution_json(series, manifest), out_path);
        if (!csv_path.empty())
            report::write_text_atomic(report::evolution_csv(series), csv_path);
        std::cout << "buckets=" << series.buckets.size() << " included="
                  << series.included_buckets
                  << " explicit_stability=" << series.explicit_stability
                  << " implicit_stability=" << series.implicit_stability << "\n";
        return 0;
    }
};

struct RobustnessCmd {
    CorpusArgs corpus;
    std::string lexicon_path;
    ScorerArgs scorer;
    ScorerArgs scorer_b;
    std::string kind = "choice";
    std::string out_path;
    std::string trial_log_path;
    std::uint64_t trials = 10000;
    double fraction = 0.5;
    double fraction2 = 0.5;
    std::uint64_t seed = 42;
    long max_token_distance = -1;
    int workers = 1;

    int execute() const {
        const auto lex = lexicon::load_lexicon_file(lexicon_path);
        const auto stream = load_corpus(corpus);
        extract::PartitionOptions opts;
        opts.max_token_distance = max_token_distance;
        opts.workers = workers;
        const auto part = extract::partition(stream, lex, opts);
        auto s = build_scorer(scorer, workers);
        auto cache = sentiment::ScoreCache::from_env();

        robustness::TrialConfig config;
        config.trials = trials;
        config.fraction = fraction;
        config.fraction2 = fraction2;
        config.seed = seed;
        config.workers = workers;

        robustness::RobustnessReport rep;
        std::unique_ptr<sentiment::Scorer> sb;
        if (kind == "choice") {
            rep = robustness::exemplar_choice_trial(part, lex, *s, config, cache.get());
        } else if (kind == "size") {
            rep = robustness::set_size_trial(part, lex, *s, config, cache.get());
        } else if (kind == "classifier") {
            if (scorer_b.spec.empty())
                throw Error("cli_report", "usage", "--kind classifier needs --scorer-b");
            sb = build_scorer(scorer_b, workers);
            rep = robustness::classifier_choice_trial(part, lex, *s, *sb, config, cache.get());
        } else {
            throw Error("cli_report", "usage",
                        "unknown --kind \"" + kind + "\" (choice|size|classifier)");
        }

        ManifestBuilder mb("robustness");
        mb.corpus(corpus, stream)
            .file_input("lexicon", lexicon_path)
            .scorer(s->id())
            .arg("--kind", kind)
            .arg("--trials", static_cast<long long>(trials))
            .arg("--fraction", std::to_string(fraction))
            .arg("--fraction2", std::to_string(fraction2))
            .seed("trials", seed);
        report::write_json_atomic(report::robustness_json(rep, mb.build()), out_path);
        if (!trial_log_path.empty())
            report::write_text_atomic(report::robustness_trial_log(rep), trial_log_path);
        std::cout << "kind=" << rep.kind << " trials=" << rep.trial_count
                  << " aborted=" << rep.aborted_trials
                  << " consistency=" << rep.consistency_percent << "%\n";
        return 0;
    }
};

struct FilterCmd {
    CorpusArgs corpus;
    std::vector<std::string> lexicon_paths;
    std::string out_path;
    long max_token_distance = -1;
    int workers = 1;

    int execute() const {
        std::vector<lexicon::BiasLexicon> lexicons;
        for (const auto& p : lexicon_paths) lexicons.push_back(lexicon::load_lexicon_file(p));
        const auto stream = load_corpus(corpus);
        extract::PartitionOptions opts;
        opts.max_token_distance = max_token_distance;
        opts.workers = workers;
        std::size_t removed = 0;
        const auto filtered = extract::filter_explicit(stream, lexicons, &removed, opts);

        std::string lines;
        for (const auto& s : filtered) lines += report::sentence_json(s).dump() + "\n";
        report::write_text_atomic(lines, out_path);
        std::cout << "kept " << filtered.total_count() << " sentences, removed " << removed
                  << " explicit statements\n";
        return 0;
    }
};

struct EmbedTrainCmd {
    CorpusArgs corpus;
    std::string out_path;
    std::uint64_t seed = 42;
    long window = 5;
    long dimension = 0;
    long min_count = 2;
    long max_vocab = 20000;
    int workers = 1;

    int execute() const {
        const auto stream = load_corpus(corpus);
        weat::TrainParams params;
        params.window = static_cast<std::size_t>(window);
        params.dimension = static_cast<std::size_t>(dimension);
        params.min_count = static_cast<std::size_t>(min_count);
        params.max_vocab = static_cast<std::size_t>(max_vocab);
        params.seed = seed;
        params.workers = workers;
        const auto table = weat::train_embeddings(stream, params);
        weat::save_embeddings(table, out_path);
        std::cout << "trained " << table.size() << " vectors of dimension " << table.dimension()
                  << "\n";
        return 0;
    }
};

struct SummarizeCmd {
    std::vector<std::string> report_paths;
    double threshold = 0.0001;

    int execute() const {
        std::printf("%-28s %-24s %12s %12s %12s %12s  %s\n", "corpus", "pair", "explicit",
                    "implicit", "difference", "p", "sig");
        for (const auto& path : report_paths) {
            const auto doc = report::read_json_file(path);
            const std::string type = doc.value("type", "");
            std::string source = "-";
            if (doc.contains("manifest") && doc["manifest"].contains("inputs") &&
                doc["manifest"]["inputs"].contains("corpus"))
                source = doc["manifest"]["inputs"]["corpus"].value("path", "-");
            if (type == "bias") {
                const std::string pair =
                    doc.value("concept_i", "i") + " vs " + doc.value("concept_j", "j");
                const double p = doc.value("p_value", 1.0);
                std::printf("%-28s %-24s %12.6f %12.6f %12.6f %12.6g  %s\n", source.c_str(),
                            pair.c_str(), doc.value("explicit_bias", 0.0),
                            doc.value("implicit_bias", 0.0), doc.value("difference", 0.0), p,
                            p <= threshold ? "*" : "");
            } else if (type == "weat") {
                std::printf("%-28s %-24s %12s %12.6f %12s %12.6g  %s\n", source.c_str(),
                            ("weat " + doc.value("lexicon_id", "")).c_str(), "-",
                            doc.value("effect_size", 0.0), "-", doc.value("p_value", 1.0),
                            doc.value("p_value", 1.0) <= threshold ? "*" : "");
            } else if (type == "weat_joint_vs_implicit") {
                const auto& joint = doc["joint"];
                const auto& impl = doc["implicit_only"];
                std::printf("%-28s %-24s %12.6f %12.6f %12.6f %12s  %s\n", source.c_str(),
                            "weat joint/implicit", joint.value("effect_size", 0.0),
                            impl.value("effect_size", 0.0),
                            doc.value("effect_size_difference", 0.0), "-", "");
            } else {
                throw Error("cli_report", "bad_report",
                            "unsupported report type \"" + type + "\" in " + path);
            }
        }
        return 0;
    }
};

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"corpus-level explicit/implicit bias measurement"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    PartitionCmd partition_cmd;
    auto* partition = app.add_subcommand("partition",
                                         "split a corpus into statement collections");
    add_corpus_options(partition, partition_cmd.corpus);
    partition->add_option("--lexicon", partition_cmd.lexicon_path, "lexicon config")->required();
    partition->add_option("--out", partition_cmd.out_dir, "output directory")->required();
    partition->add_option("--max-token-distance", partition_cmd.max_token_distance,
                          "max token gap between target and attribute (-1 = unlimited)");
    partition->add_option("--workers", partition_cmd.workers, "parallelism cap");

    BiasCmd bias_cmd;
    auto* bias = app.add_subcommand("bias", "explicit/implicit bias from a partition");
    bias->add_option("--partition", bias_cmd.partition_dir, "partition directory")->required();
    bias->add_option("--scorer", bias_cmd.scorer.spec, "builtin:<path> or external:<command>")
        ->required();
    bias->add_option("--scorer-id", bias_cmd.scorer.id, "scorer id recorded in reports");
    bias->add_option("--timeout", bias_cmd.scorer.timeout, "external scorer timeout (s)");
    bias->add_option("--resamples", bias_cmd.resamples, "permutation resamples");
    bias->add_option("--seed", bias_cmd.seed, "permutation seed");
    bias->add_option("--threshold", bias_cmd.threshold, "significance threshold");
    bias->add_option("--out", bias_cmd.out_path, "report path")->required();
    bias->add_option("--workers", bias_cmd.workers, "parallelism cap");

    WeatCmd weat_cmd;
    auto* weat_sub = app.add_subcommand("weat", "embedding association test");
    weat_sub->add_option("--embeddings", weat_cmd.embeddings_path, "embedding table file");
    weat_sub->add_option("--train-on", weat_cmd.corpus.path, "corpus to train embeddings on");
    weat_sub->add_option("--format", weat_cmd.corpus.format, "plaintext|jsonl");
    weat_sub->add_option("--source-tag", weat_cmd.corpus.source_tag, "source tag");
    weat_sub->add_flag("--lenient", weat_cmd.corpus.lenient, "skip malformed input");
    weat_sub->add_option("--lexicon", weat_cmd.lexicon_path, "lexicon config")->required();
    weat_sub->add_flag("--filtered", weat_cmd.filtered,
                       "train on the explicit-filtered corpus (implicit-only)");
    weat_sub->add_flag("--compare-filtered", weat_cmd.compare_filtered,
                       "report joint vs implicit-only side by side");
    weat_sub->add_option("--mode", weat_cmd.mode, "exact|mc");
    weat_sub->add_option("--sign-convention", weat_cmd.sign_convention,
                         "default|caliskan effect-size numerator order");
    weat_sub->add_option("--seed", weat_cmd.seed, "p-value / trainer seed");
    weat_sub->add_option("--window", weat_cmd.window, "trainer window");
    weat_sub->add_option("--dimension", weat_cmd.dimension, "trainer dimension (0 = auto)");
    weat_sub->add_option("--min-count", weat_cmd.min_count, "trainer min token count");
    weat_sub->add_option("--max-vocab", weat_cmd.max_vocab, "trainer vocabulary cap");
    weat_sub->add_option("--max-token-distance", weat_cmd.max_token_distance,
                         "distance rule for --filtered");
    weat_sub->add_option("--out", weat_cmd.out_path, "report path")->required();
    weat_sub->add_option("--workers", weat_cmd.workers, "parallelism cap");

    EvolveCmd evolve_cmd;
    auto* evolve = app.add_subcommand("evolve", "month-by-month bias and stability");
    evolve_cmd.corpus.format = "jsonl";  // timestamps come from JSONL records
    add_corpus_options(evolve, evolve_cmd.corpus);
    evolve->add_option("--lexicon", evolve_cmd.lexicon_path, "lexicon config")->required();
    evolve->add_option("--scorer", evolve_cmd.scorer.spec, "scorer spec")->required();
    evolve->add_option("--scorer-id", evolve_cmd.scorer.id, "scorer id");
    evolve->add_option("--timeout", evolve_cmd.scorer.timeout, "external scorer timeout (s)");
    evolve->add_option("--min-statements", evolve_cmd.min_statements,
                       "per-collection minimum per bucket");
    evolve->add_option("--resamples", evolve_cmd.resamples, "permutation resamples per bucket");
    evolve->add_option("--seed", evolve_cmd.seed, "permutation seed");
    evolve->add_option("--max-token-distance", evolve_cmd.max_token_distance, "distance rule");
    evolve->add_option("--out", evolve_cmd.out_path, "series JSON path")->required();
    evolve->add_option("--csv", evolve_cmd.csv_path, "series CSV path");
    evolve->add_option("--workers", evolve_cmd.workers, "parallelism cap");

    RobustnessCmd robustness_cmd;
    auto* robust = app.add_subcommand("robustness", "procedural-variable consistency trials");
    add_corpus_options(robust, robustness_cmd.corpus);
    robust->add_option("--lexicon", robustness_cmd.lexicon_path, "lexicon config")->required();
    robust->add_option("--scorer", robustness_cmd.scorer.spec, "scorer spec")->required();
    robust->add_option("--scorer-id", robustness_cmd.scorer.id, "scorer id");
    robust->add_option("--scorer-b", robustness_cmd.scorer_b.spec, "comparator scorer spec");
    robust->add_option("--scorer-b-id", robustness_cmd.scorer_b.id, "comparator scorer id");
    robust->add_option("--timeout", robustness_cmd.scorer.timeout, "external scorer timeout (s)");
    robust->add_option("--kind", robustness_cmd.kind, "choice|size|classifier")->required();
    robust->add_option("--trials", robustness_cmd.trials, "trial count");
    robust->add_option("--fraction", robustness_cmd.fraction, "exemplar subset fraction");
    robust->add_option("--fraction2", robustness_cmd.fraction2, "second-level fraction (size)");
    robust->add_option("--seed", robustness_cmd.seed, "trial seed");
    robust->add_option("--max-token-distance", robustness_cmd.max_token_distance, "distance rule");
    robust->add_option("--out", robustness_cmd.out_path, "report path")->required();
    robust->add_option("--trial-log", robustness_cmd.trial_log_path, "per-trial JSONL log");
    robust->add_option("--workers", robustness_cmd.workers, "parallelism cap");

    FilterCmd filter_cmd;
    auto* filter = app.add_subcommand("filter-explicit",
                                      "remove explicit statements from a corpus");
    add_corpus_options(filter, filter_cmd.corpus);
    filter->add_option("--lexicon", filter_cmd.lexicon_paths, "lexicon config (repeatable)")
        ->required();
    filter->add_option("--max-token-distance", filter_cmd.max_token_distance, "distance rule");
    filter->add_option("--out", filter_cmd.out_path, "filtered corpus (JSONL)")->required();
    filter->add_option("--workers", filter_cmd.workers, "parallelism cap");

    EmbedTrainCmd embed_cmd;
    auto* embed = app.add_subcommand("embed-train", "train PPMI-SVD embeddings");
    add_corpus_options(embed, embed_cmd.corpus);
    embed->add_option("--window", embed_cmd.window, "co-occurrence window");
    embed->add_option("--dimension", embed_cmd.dimension, "vector dimension (0 = auto)");
    embed->add_option("--min-count", embed_cmd.min_count, "min token count");
    embed->add_option("--max-vocab", embed_cmd.max_vocab, "vocabulary cap");
    embed->add_option("--seed", embed_cmd.seed, "trainer seed");
    embed->add_option("--out", embed_cmd.out_path, "embedding table path")->required();
    embed->add_option("--workers", embed_cmd.workers, "parallelism cap");

    SummarizeCmd summarize_cmd;
    auto* summarize = app.add_subcommand("summarize", "tabulate report files");
    summarize->add_option("reports", summarize_cmd.report_paths, "report JSON files")->required();
    summarize->add_option("--threshold", summarize_cmd.threshold, "significance threshold");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints help/errors itself; remap failures to exit code 1
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (partition->parsed()) return partition_cmd.execute();
        if (bias->parsed()) return bias_cmd.execute();
        if (weat_sub->parsed()) return weat_cmd.execute();
        if (evolve->parsed()) return evolve_cmd.execute();
        if (robust->parsed()) return robustness_cmd.execute();
        if (filter->parsed()) return filter_cmd.execute();
        if (embed->parsed()) return embed_cmd.execute();
        if (summarize->parsed()) return summarize_cmd.execute();
    } catch (const Error& e) {
        if (e.module() == "cli_report" && e.code() == "usage") {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace biaslens::cli
