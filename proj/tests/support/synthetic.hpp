#pragma once

// Seeded synthetic corpora with planted sentiment structure, plus the small
// lexicon / scorer configs the tests share. Generated sentences follow a
// fixed template: "<target> is <attribute-word> and <sentiment-adjective>",
// so the builtin scorer's output per statement is known by construction.

#include <filesystem>
#include <string>
#include <vector>

#include "biaslens/corpus.hpp"
#include "biaslens/lexicon.hpp"
#include "biaslens/rng.hpp"
#include "biaslens/sentiment.hpp"

namespace synthetic {

biaslens::lexicon::BiasLexicon test_lexicon();
nlohmann::json test_lexicon_json();

// positive = {wonderful, lovely, delightful}, negative = {awful, nasty, dreadful}
nlohmann::json sentiment_lexicon_json();
biaslens::sentiment::SentimentLexicon sentiment_lexicon();

// polarity: +1, 0 or -1 sentiment planted into the sentence
std::string explicit_sentence(const std::string& concept_word, int polarity, biaslens::Rng& rng);
std::string implicit_sentence(const std::string& exemplar_word, int polarity, biaslens::Rng& rng);
std::string filler_sentence(biaslens::Rng& rng);

struct PlantSpec {
    // per collection: statement count and probability of a +1 statement
    // (the remainder split between -1 with neg_prob and 0 otherwise)
    std::size_t n_explicit_i = 0;
    double pos_explicit_i = 0.5;
    std::size_t n_explicit_j = 0;
    double pos_explicit_j = 0.5;
    std::size_t n_implicit_i = 0;
    double pos_implicit_i = 0.5;
    std::size_t n_implicit_j = 0;
    double pos_implicit_j = 0.5;
    double neg_share = 1.0;  // of the non-positive mass, fraction that is -1
    std::size_t n_filler = 0;
};

// One sentence per line, deterministically shuffled.
std::vector<std::string> planted_sentences(const PlantSpec& spec, std::uint64_t seed);

biaslens::corpus::CorpusStream stream_from_lines(const std::vector<std::string>& lines,
                                                 const std::string& source = "synthetic");

void write_plaintext(const std::filesystem::path& path, const std::vector<std::string>& lines);

// JSONL corpus with one timestamp per line ("YYYY-MM-15T12:00:00Z").
void write_jsonl(const std::filesystem::path& path, const std::vector<std::string>& lines,
                 const std::vector<std::string>& month_keys);

// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace synthetic
