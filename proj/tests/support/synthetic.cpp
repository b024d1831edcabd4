#include "support/synthetic.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>

using biaslens::Rng;

namespace synthetic {

namespace {

const std::vector<std::string> kConceptI = {"insect", "insects"};
const std::vector<std::string> kConceptJ = {"flower", "flowers"};
const std::vector<std::string> kExemplarI = {"ant", "spider", "bee", "moth", "wasp", "flea"};
const std::vector<std::string> kExemplarJ = {"rose", "tulip", "lily", "daisy", "orchid", "violet"};
const std::vector<std::string> kAttrP = {"pleasant", "agreeable"};
const std::vector<std::string> kAttrQ = {"unpleasant", "disagreeable"};
const std::vector<std::string> kPositive = {"wonderful", "lovely", "delightful"};
const std::vector<std::string> kNegative = {"awful", "nasty", "dreadful"};

const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
    return v[rng.uniform_below(v.size())];
}

std::string sentence_for(const std::string& target, int polarity, Rng& rng) {
    // the attribute word gates collection membership; the adjective carries
    // the planted sentiment; attribute side is chosen independently
    const std::string& attr = rng.uniform_below(2) == 0 ? pick(kAttrP, rng) : pick(kAttrQ, rng);
    if (polarity > 0) return "the " + target + " is " + attr + " and " + pick(kPositive, rng) + ".";
    if (polarity < 0) return "the " + target + " is " + attr + " and " + pick(kNegative, rng) + ".";
    return "the " + target + " is " + attr + " perhaps.";
}

int draw_polarity(double pos_prob, double neg_share, Rng& rng) {
    const double u = rng.uniform01();
    if (u < pos_prob) return 1;
    const double v = rng.uniform01();
    return v < neg_share ? -1 : 0;
}

}  // namespace

nlohmann::json test_lexicon_json() {
    return nlohmann::json{
        {"id", "insect_vs_flower"},
        {"concept_pair",
         {{"name_i", "insect"},
          {"name_j", "flower"},
          {"concept_words_i", kConceptI},
          {"concept_words_j", kConceptJ},
          {"exemplar_words_i", kExemplarI},
          {"exemplar_words_j", kExemplarJ}}},
        {"attribute_pair",
         {{"name_p", "pleasantness"},
          {"name_q", "unpleasantness"},
          {"attribute_words_p", kAttrP},
          {"attribute_words_q", kAttrQ}}}};
}

biaslens::lexicon::BiasLexicon test_lexicon() {
    return biaslens::lexicon::load_lexicon(test_lexicon_json());
}

nlohmann::json sentiment_lexicon_json() {
    return nlohmann::json{{"positive", kPositive}, {"negative", kNegative}};
}

biaslens::sentiment::SentimentLexicon sentiment_lexicon() {
    biaslens::sentiment::SentimentLexicon lex;
    lex.positive_words = biaslens::lexicon::make_word_set("positive", kPositive);
    lex.negative_words = biaslens::lexicon::make_word_set("negative", kNegative);
    lex.negators = biaslens::sentiment::SentimentLexicon::default_negators();
    return lex;
}

std::string explicit_sentence(const std::string& concept_word, int polarity, Rng& rng) {
    return sentence_for(concept_word, polarity, rng);
}

std::string implicit_sentence(const std::string& exemplar_word, int polarity, Rng& rng) {
    return sentence_for(exemplar_word, polarity, rng);
}

std::string filler_sentence(Rng& rng) {
    static const std::vector<std::string> kFiller = {
        "people walk around the lake every evening.",
        "the weather stays calm over the hills.",
        "a train passes through the old station.",
        "children play near the river in summer.",
        "the market opens early on weekdays.",
    };
    return pick(kFiller, rng);
}

std::vector<std::string> planted_sentences(const PlantSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> lines;
    lines.reserve(spec.n_explicit_i + spec.n_explicit_j + spec.n_implicit_i + spec.n_implicit_j +
                  spec.n_filler);
    for (std::size_t k = 0; k < spec.n_explicit_i; ++k)
        lines.push_back(explicit_sentence(pick(kConceptI, rng),
                                          draw_polarity(spec.pos_explicit_i, spec.neg_share, rng),
                                          rng));
    for (std::size_t k = 0; k < spec.n_explicit_j; ++k)
        lines.push_back(explicit_sentence(pick(kConceptJ, rng),
                                          draw_polarity(spec.pos_explicit_j, spec.neg_share, rng),
                                          rng));
    for (std::size_t k = 0; k < spec.n_implicit_i; ++k)
        lines.push_back(implicit_sentence(pick(kExemplarI, rng),
                                          draw_polarity(spec.pos_implicit_i, spec.neg_share, rng),
                                          rng));
    for (std::size_t k = 0; k < spec.n_implicit_j; ++k)
        lines.push_back(implicit_sentence(pick(kExemplarJ, rng),
                                          draw_polarity(spec.pos_implicit_j, spec.neg_share, rng),
                                          rng));
    for (std::size_t k = 0; k < spec.n_filler; ++k) lines.push_back(filler_sentence(rng));
    rng.shuffle(lines);
    return lines;
}

biaslens::corpus::CorpusStream stream_from_lines(const std::vector<std::string>& lines,
                                                 const std::string& source) {
    biaslens::corpus::CorpusStream stream;
    std::size_t ordinal = 0;
    for (const auto& line : lines) {
        biaslens::corpus::Sentence s;
        s.id = source + ":" + std::to_string(ordinal++);
        s.text = line;
        s.tokens = biaslens::corpus::tokenize(line);
        s.source = source;
        stream.push(std::move(s));
    }
    return stream;
}

void write_plaintext(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    for (const auto& line : lines) out << line << "\n";
}

void write_jsonl(const std::filesystem::path& path, const std::vector<std::string>& lines,
                 const std::vector<std::string>& month_keys) {
    std::ofstream out(path);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        nlohmann::json rec{{"text", lines[k]},
                           {"timestamp", month_keys[k] + "-15T12:00:00Z"}};
        out << rec.dump() << "\n";
    }
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("biaslens_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace synthetic
