#include "biaslens/report_io.hpp"

#include <unistd.h>

#include <fstream>
#include <sstream>

#include "biaslens/error.hpp"
#include "biaslens/hash.hpp"
#include "biaslens/version.hpp"

namespace biaslens::report {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("cli_report", code, msg);
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io", "cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json conclusion_json(const robustness::Conclusion& c) {
    return json{{"explicit_sign", c.explicit_sign},
                {"implicit_sign", c.implicit_sign},
                {"difference_sign", c.difference_sign}};
}

json oov_json(const weat::OovReport& oov) {
    json missing = json::object();
    for (const auto& [label, words] : oov.missing) missing[label] = words;
    json zero = json::object();
    for (const auto& [label, words] : oov.zero_norm) zero[label] = words;
    return json{{"missing", missing}, {"zero_norm", zero}};
}

json counts_json(const extract::PartitionCounts& c) {
    return json{{"explicit_i", c.explicit_i}, {"explicit_j", c.explicit_j},
                {"implicit_i", c.implicit_i}, {"implicit_j", c.implicit_j},
                {"rest", c.rest},             {"ambiguous", c.ambiguous},
                {"total", c.total()}};
}

}  // namespace

json Manifest::to_json() const {
    json seeds_obj = json::object();
    for (const auto& [name, value] : seeds) seeds_obj[name] = value;
    return json{{"tool", kToolName}, {"version", kVersion}, {"subcommand", subcommand},
                {"args", args},      {"inputs", inputs},    {"seeds", seeds_obj}};
}

json Manifest::file_fingerprint(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    return json{{"path", path.string()}, {"bytes", bytes.size()},
                {"fnv1a64", hex64(fnv1a64(bytes))}};
}

json Manifest::corpus_fingerprint(const std::filesystem::path& path,
                                  const corpus::CorpusStream& stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& s : stream) {
        h = fnv1a64(s.id, h);
        h = fnv1a64("\x1f", h);
        h = fnv1a64(s.text, h);
        h = fnv1a64("\x1e", h);
    }
    return json{{"path", path.string()}, {"sentences", stream.total_count()},
                {"fnv1a64", hex64(h)}};
}

void write_text_atomic(const std::string& content, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp =
        path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("io", "cannot write " + tmp.string());
        out << content;
        if (!out.good()) fail("io", "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_json_atomic(const json& doc, const std::filesystem::path& path) {
    write_text_atomic(doc.dump(2) + "\n", path);
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open report: " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) fail("bad_report", "invalid JSON in " + path.string());
    return doc;
}

json sentence_json(const corpus::Sentence& s) {
    json doc{{"sid", s.id}, {"text", s.text}, {"source", s.source}};
    if (s.timestamp) doc["timestamp"] = corpus::format_timestamp(*s.timestamp);
    return doc;
}

corpus::Sentence sentence_from_json(const json& doc) {
    corpus::Sentence s;
    s.id = doc.at("sid").get<std::string>();
    s.text = doc.at("text").get<std::string>();
    s.source = doc.value("source", std::string());
    if (doc.contains("timestamp") && doc["timestamp"].is_string())
        s.timestamp = corpus::parse_timestamp(doc["timestamp"].get<std::string>());
    s.tokens = corpus::tokenize(s.text);
    return s;
}

json statement_json(const extract::Statement& st) {
    json doc = sentence_json(st.sentence);
    doc["label"] = extract::label_name(st.label);
    doc["matched_target"] = st.matched_target_words;
    doc["matched_attribute"] = st.matched_attribute_words;
    return doc;
}

extract::Statement statement_from_json(const json& doc) {
    extract::Statement st;
    st.sentence = sentence_from_json(doc);
    const std::string label = doc.value("label", "rest");
    for (const auto l :
         {extract::PartitionLabel::ExplicitI, extract::PartitionLabel::ExplicitJ,
          extract::PartitionLabel::ImplicitI, extract::PartitionLabel::ImplicitJ,
          extract::PartitionLabel::Rest, extract::PartitionLabel::Ambiguous}) {
        if (label == extract::label_name(l)) {
            st.label = l;
            break;
        }
    }
    if (doc.contains("matched_target"))
        st.matched_target_words = doc["matched_target"].get<std::vector<std::string>>();
    if (doc.contains("matched_attribute"))
        st.matched_attribute_words = doc["matched_attribute"].get<std::vector<std::string>>();
    return st;
}

void write_partition_dir(const extract::CorpusPartition& partition,
                         const std::filesystem::path& dir, const Manifest& manifest) {
    std::filesystem::create_directories(dir);
    auto write_statements = [&](const std::vector<extract::Statement>& sts, const char* name) {
        std::string lines;
        for (const auto& st : sts) lines += statement_json(st).dump() + "\n";
        write_text_atomic(lines, dir / (std::string(name) + ".jsonl"));
    };
    write_statements(partition.s_cwi, "explicit_i");
    write_statements(partition.s_cwj, "explicit_j");
    write_statements(partition.s_ewi, "implicit_i");
    write_statements(partition.s_ewj, "implicit_j");
    write_statements(partition.ambiguous, "ambiguous");
    {
        std::string lines;
        for (const auto& s : partition.rest) lines += sentence_json(s).dump() + "\n";
        write_text_atomic(lines, dir / "rest.jsonl");
    }
    json counts{{"lexicon_id", partition.lexicon_id},
                {"concept_i", partition.concept_i},
                {"concept_j", partition.concept_j},
                {"counts", counts_json(partition.counts)},
                {"rules",
                 {{"precedence", "explicit beats implicit"},
                  {"ambiguous", "target words from both sides; excluded from all collections"},
                  {"attribute", "membership requires >= 1 word from the attribute union"}}},
                {"manifest", manifest.to_json()}};
    write_json_atomic(counts, dir / "counts.json");
}

extract::CorpusPartition read_partition_dir(const std::filesystem::path& dir) {
    extract::CorpusPartition partition;
    const json counts = read_json_file(dir / "counts.json");
    partition.lexicon_id = counts.value("lexicon_id", std::string());
    partition.concept_i = counts.value("concept_i", std::string());
    partition.concept_j = counts.value("concept_j", std::string());

    auto read_lines = [&](const char* name, auto&& consume) {
        const std::filesystem::path path = dir / (std::string(name) + ".jsonl");
        std::ifstream in(path);
        if (!in) fail("io", "partition directory missing " + path.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json doc = json::parse(line, nullptr, false);
            if (doc.is_discarded())
                fail("bad_report",
                     "invalid JSON at " + path.string() + ":" + std::to_string(line_no));
            consume(doc);
        }
    };
    read_lines("explicit_i", [&](const json& d) { partition.s_cwi.push_back(statement_from_json(d)); });
    read_lines("explicit_j", [&](const json& d) { partition.s_cwj.push_back(statement_from_json(d)); });
    read_lines("implicit_i", [&](const json& d) { partition.s_ewi.push_back(statement_from_json(d)); });
    read_lines("implicit_j", [&](const json& d) { partition.s_ewj.push_back(statement_from_json(d)); });
    read_lines("ambiguous", [&](const json& d) { partition.ambiguous.push_back(statement_from_json(d)); });
    read_lines("rest", [&](const json& d) { partition.rest.push(sentence_from_json(d)); });

    partition.counts.explicit_i = partition.s_cwi.size();
    partition.counts.explicit_j = partition.s_cwj.size();
    partition.counts.implicit_i = partition.s_ewi.size();
    partition.counts.implicit_j = partition.s_ewj.size();
    partition.counts.ambiguous = partition.ambiguous.size();
    partition.counts.rest = partition.rest.total_count();
    return partition;
}

json bias_report_json(const biasmeter::BiasReport& report, const Manifest& manifest) {
    auto stats = [](const biasmeter::CollectionStats& s) {
        return json{{"count", s.count}, {"mean", s.mean}};
    };
    return json{{"type", "bias"},
                {"explicit_bias", report.explicit_bias},
                {"implicit_bias", report.implicit_bias},
                {"difference", report.difference},
                {"p_value", report.p_value},
                {"n_resamples", report.n_resamples},
                {"seed", report.seed},
                {"significance_threshold", report.significance_threshold},
                {"significant", report.significant},
                {"collections",
                 {{"s_cwi", stats(report.cwi)},
                  {"s_cwj", stats(report.cwj)},
                  {"s_ewi", stats(report.ewi)},
                  {"s_ewj", stats(report.ewj)}}},
                {"lexicon_id", report.lexicon_id},
                {"scorer_id", report.scorer_id},
                {"concept_i", report.concept_i},
                {"concept_j", report.concept_j},
                {"sign_convention", report.sign_convention},
                {"permutation",
                 "two-sided |explicit - implicit|; explicit/implicit labels permuted within each "
                 "concept side; add-one smoothed"},
                {"manifest", manifest.to_json()}};
}

json weat_report_json(const weat::WeatReport& report, const Manifest& manifest) {
    return json{{"type", "weat"},
                {"statistic", report.statistic},
                {"effect_size", report.effect_size},
                {"p_value", report.p_value},
                {"method", report.method},
                {"n", report.n},
                {"ties", report.ties},
                {"seed", report.seed},
                {"sign_convention", report.sign_convention},
                {"set_sizes",
                 {{"ew_i", report.n_ew_i},
                  {"ew_j", report.n_ew_j},
                  {"aw_p", report.n_aw_p},
                  {"aw_q", report.n_aw_q}}},
                {"oov", oov_json(report.oov)},
                {"manifest", manifest.to_json()}};
}

json joint_vs_implicit_json(const weat::JointVsImplicitReport& report, const Manifest& manifest) {
    return json{{"type", "weat_joint_vs_implicit"},
                {"joint", weat_report_json(report.joint, manifest)},
                {"implicit_only", weat_report_json(report.implicit_only, manifest)},
                {"effect_size_difference", report.effect_size_difference},
                {"removed_explicit", report.removed_explicit},
                {"manifest", manifest.to_json()}};
}

json evolution_json(const temporal::EvolutionSeries& series, const Manifest& manifest) {
    json buckets = json::array();
    for (const auto& b : series.buckets) {
        json doc{{"bucket", b.key}, {"included", b.included}, {"counts", counts_json(b.counts)}};
        if (b.included) {
            doc["explicit_bias"] = b.explicit_bias;
            doc["implicit_bias"] = b.implicit_bias;
            doc["p_value"] = b.p_value;
        } else {
            doc["shortfall"] = b.shortfall;
        }
        buckets.push_back(std::move(doc));
    }
    return json{{"type", "evolution"},
                {"buckets", buckets},
                {"explicit_stability", series.explicit_stability},
                {"implicit_stability", series.implicit_stability},
                {"included_buckets", series.included_buckets},
                {"untimestamped", series.untimestamped},
                {"min_statements", series.min_statements},
                {"stability_estimator", "population standard deviation over included buckets"},
                {"lexicon_id", series.lexicon_id},
                {"scorer_id", series.scorer_id},
                {"manifest", manifest.to_json()}};
}

std::string evolution_csv(const temporal::EvolutionSeries& series) {
    std::ostringstream out;
    out << "bucket,included,explicit_bias,implicit_bias,p_value,n_cwi,n_cwj,n_ewi,n_ewj\n";
    out.precision(17);
    for (const auto& b : series.buckets) {
        out << b.key << "," << (b.included ? 1 : 0) << ",";
        if (b.included)
            out << b.explicit_bias << "," << b.implicit_bias << "," << b.p_value;
        else
            out << ",,";
        out << "," << b.counts.explicit_i << "," << b.counts.explicit_j << ","
            << b.counts.implicit_i << "," << b.counts.implicit_j << "\n";
    }
    return out.str();
}

json robustness_json(const robustness::RobustnessReport& report, const Manifest& manifest) {
    return json{{"type", "robustness"},
                {"kind", report.kind},
                {"trial_count", report.trial_count},
                {"aborted_trials", report.aborted_trials},
                {"consistent_trials", report.consistent_trials},
                {"consistency_percent", report.consistency_percent},
                {"baseline", conclusion_json(report.baseline)},
                {"fraction", report.fraction},
                {"fraction2", report.fraction2},
                {"seed", report.seed},
                {"lexicon_id", report.lexicon_id},
                {"scorer_id", report.scorer_id},
                {"scorer_b_id", report.scorer_b_id},
                {"manifest", manifest.to_json()}};
}

std::string robustness_trial_log(const robustness::RobustnessReport& report) {
    std::string out;
    for (const auto& t : report.trials) {
        json doc{{"trial", t.trial}, {"subset_i", t.subset_i}, {"subset_j", t.subset_j}};
        if (!t.subset2_i.empty() || !t.subset2_j.empty()) {
            doc["subset2_i"] = t.subset2_i;
            doc["subset2_j"] = t.subset2_j;
        }
        if (t.aborted) {
            doc["aborted"] = true;
            doc["error"] = t.error;
        } else {
            doc["conclusion"] = conclusion_json(t.conclusion);
            if (t.compared) doc["conclusion_b"] = conclusion_json(t.conclusion_b);
            doc["consistent"] = t.consistent;
        }
        out += doc.dump() + "\n";
    }
    return out;
}

}  // namespace biaslens::report
