#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "biaslens/biasmeter.hpp"
#include "biaslens/corpus.hpp"
#include "biaslens/extract.hpp"
#include "biaslens/robustness.hpp"
#include "biaslens/temporal.hpp"
#include "biaslens/weat.hpp"

namespace biaslens::report {

using nlohmann::json;

// Reproducibility manifest embedded in every report. Only semantic inputs
// belong here: execution knobs (worker count, cache location, output paths)
// must not change report bytes.
struct Manifest {
    std::string subcommand;
    std::vector<std::string> args;  // semantic flags, normalized order
    json inputs = json::object();   // name -> fingerprint {path, hash, ...}
    std::vector<std::pair<std::string, std::uint64_t>> seeds;

    json to_json() const;

    // FNV-1a fingerprint of a file's bytes.
    static json file_fingerprint(const std::filesystem::path& path);
    // Fingerprint of an ingested corpus: sentence count + content hash.
    static json corpus_fingerprint(const std::filesystem::path& path,
                                   const corpus::CorpusStream& stream);
};

// temp-file + rename, so readers never observe partial reports
void write_text_atomic(const std::string& content, const std::filesystem::path& path);
void write_json_atomic(const json& doc, const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);  // errors: cli_report/bad_report

// Sentence / statement wire formats (JSONL payloads of the partition dir
// and filtered corpora).
json sentence_json(const corpus::Sentence& s);
corpus::Sentence sentence_from_json(const json& doc);
json statement_json(const extract::Statement& st);
extract::Statement statement_from_json(const json& doc);

// Partition directory: one JSONL file per label plus counts.json.
void write_partition_dir(const extract::CorpusPartition& partition,
                         const std::filesystem::path& dir, const Manifest& manifest);
extract::CorpusPartition read_partition_dir(const std::filesystem::path& dir);

json bias_report_json(const biasmeter::BiasReport& report, const Manifest& manifest);
json weat_report_json(const weat::WeatReport& report, const Manifest& manifest);
json joint_vs_implicit_json(const weat::JointVsImplicitReport& report, const Manifest& manifest);
json evolution_json(const temporal::EvolutionSeries& series, const Manifest& manifest);
std::string evolution_csv(const temporal::EvolutionSeries& series);
json robustness_json(const robustness::RobustnessReport& report, const Manifest& manifest);
std::string robustness_trial_log(const robustness::RobustnessReport& report);

}  // namespace biaslens::report
