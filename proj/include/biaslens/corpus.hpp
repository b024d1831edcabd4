#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biaslens::corpus {

using Timestamp = std::chrono::sys_seconds;

struct Sentence {
    std::string id;      // stable: source + ordinal (or record id + ordinal)
    std::string text;    // original text, trimmed
    std::vector<std::string> tokens;  // always equal to tokenize(text)
    std::optional<Timestamp> timestamp;
    std::string source;
};

// Materialized, replayable sentence sequence. Iteration order is ingestion
// order; replaying yields the identical sequence.
class CorpusStream {
public:
    CorpusStream() = default;
    explicit CorpusStream(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {}

    const std::vector<Sentence>& sentences() const { return sentences_; }
    std::size_t total_count() const { return sentences_.size(); }
    bool empty() const { return sentences_.empty(); }
    const Sentence& operator[](std::size_t i) const { return sentences_[i]; }

    void push(Sentence s) { sentences_.push_back(std::move(s)); }

    auto begin() const { return sentences_.begin(); }
    auto end() const { return sentences_.end(); }

private:
    std::vector<Sentence> sentences_;
};

struct IngestOptions {
    std::string source_tag = "corpus";
    bool lenient = false;  // skip bad lines/records instead of failing
};

struct IngestStats {
    std::size_t records = 0;
    std::size_t sentences = 0;
    std::size_t skipped_invalid_utf8 = 0;
    std::size_t skipped_bad_json = 0;
    std::size_t skipped_duplicate_id = 0;
    std::size_t missing_timestamps = 0;
    std::size_t unparseable_timestamps = 0;
};

// Lowercases (ASCII), splits on whitespace, strips leading/trailing
// punctuation per token, drops empties. Pure and order-preserving.
std::vector<std::string> tokenize(std::string_view txt);

// Declared segmentation rule: a sentence ends at '.', '?', '!' or their
// CJK fullwidth equivalents when followed by whitespace or end of input;
// a newline is always a hard boundary. Returned sentences are trimmed and
// non-empty.
std::vector<std::string> split_sentences(std::string_view txt);

CorpusStream ingest_plaintext(const std::filesystem::path& path, const IngestOptions& opts = {},
                              IngestStats* stats = nullptr);

// One JSON object per line: {"text": str, "timestamp": optional ISO-8601,
// "id": optional str}. Every sentence of a record inherits its timestamp.
CorpusStream ingest_jsonl(const std::filesystem::path& path, const IngestOptions& opts = {},
                          IngestStats* stats = nullptr);

// ISO-8601 instants; date-only forms are midnight UTC; offsets are applied
// and the result normalized to UTC. Returns nullopt on anything else.
std::optional<Timestamp> parse_timestamp(std::string_view s);
std::string format_timestamp(Timestamp t);   // "YYYY-MM-DDTHH:MM:SSZ"
std::string month_key(Timestamp t);          // "YYYY-MM" (UTC)

}  // namespace biaslens::corpus
