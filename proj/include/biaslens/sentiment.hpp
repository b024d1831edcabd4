#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "biaslens/extract.hpp"
#include "biaslens/lexicon.hpp"

namespace biaslens::sentiment {

// Statement sentiment is always one of -1, 0, +1.
using Score = int;

struct SentimentLexicon {
    lexicon::WordSet positive_words;
    lexicon::WordSet negative_words;
    lexicon::WordSet negators;  // defaults to {not, no, never, n't, hardly}

    static SentimentLexicon load_file(const std::filesystem::path& path);
    static lexicon::WordSet default_negators();
};

struct ScorerSpec {
    enum class Kind { BuiltinLexicon, External };
    Kind kind = Kind::BuiltinLexicon;
    std::string config;  // lexicon path (builtin) or command line (external)
    std::string id;      // recorded in all reports; defaulted for builtin
    long timeout_seconds = 300;

    // Parses "builtin:<path>" / "external:<command>".
    static ScorerSpec parse(const std::string& text);
};

// raw = (#positive hits - #negative hits); a hit beginning within 3 tokens
// after a negator has its polarity flipped (an odd number of negators in
// the window flips, an even number restores). Returns sign(raw).
Score score_builtin(const std::vector<std::string>& tokens, const SentimentLexicon& lex);

class Scorer {
public:
    virtual ~Scorer() = default;
    virtual const std::string& id() const = 0;
    // One score per statement, order preserving.
    virtual std::vector<Score> score_batch(const std::vector<const extract::Statement*>& batch) = 0;
};

class BuiltinScorer : public Scorer {
public:
    BuiltinScorer(SentimentLexicon lex, std::string id);
    const std::string& id() const override { return id_; }
    std::vector<Score> score_batch(const std::vector<const extract::Statement*>& batch) override;

    void set_workers(int workers) { workers_ = workers; }

private:
    SentimentLexicon lex_;
    std::string id_;
    int workers_ = 1;
};

// Line protocol: N statement texts on the adapter's stdin (one per line,
// newlines in the text escaped as \n); the adapter must reply with exactly
// N lines, each "-1", "0" or "1".
class ExternalScorer : public Scorer {
public:
    ExternalScorer(std::string command, std::string id, long timeout_seconds = 300);
    const std::string& id() const override { return id_; }
    std::vector<Score> score_batch(const std::vector<const extract::Statement*>& batch) override;

private:
    std::string command_;
    std::string id_;
    long timeout_seconds_;
};

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec, int workers = 1);

// Disk-backed score cache keyed by (statement id, scorer id). Values are
// deterministic per scorer id, so last-write-wins on duplicate keys is fine.
class ScoreCache {
public:
    explicit ScoreCache(std::filesystem::path file);

    std::optional<Score> get(const std::string& sid, const std::string& scorer_id) const;
    void put(const std::string& sid, const std::string& scorer_id, Score score);
    void flush();  // appends new entries to the cache file

    // Cache under $BIASLENS_CACHE_DIR, or nullptr when the variable is unset.
    static std::unique_ptr<ScoreCache> from_env();

private:
    static std::string key(const std::string& sid, const std::string& scorer_id);

    std::filesystem::path file_;
    std::unordered_map<std::string, Score> entries_;
    std::vector<std::string> pending_lines_;
    mutable std::mutex mu_;
};

// Scores a statement collection, consulting the cache first and writing
// fresh scores back. Output order matches input order.
std::vector<std::pair<std::string, Score>> score_collection(
    const std::vector<extract::Statement>& statements, Scorer& scorer,
    ScoreCache* cache = nullptr);

}  // namespace biaslens::sentiment
