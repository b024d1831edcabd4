#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "biaslens/corpus.hpp"
#include "biaslens/lexicon.hpp"

namespace biaslens::weat {

using Vector = std::vector<double>;

class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return entries_.size(); }

    // Inserts unless the word is already present; returns false on duplicate.
    bool insert(const std::string& word, Vector v);
    const Vector* find(const std::string& word) const;
    const std::unordered_map<std::string, Vector>& entries() const { return entries_; }

private:
    std::size_t dimension_ = 0;
    std::unordered_map<std::string, Vector> entries_;
};

struct LoadStats {
    std::size_t duplicates = 0;
};

// Text format: optional "V D" header line, then "word v1 ... vD" per line.
// First occurrence of a duplicate word wins; inconsistent dimensions and
// unparseable numbers are errors naming the line.
EmbeddingTable load_embeddings(const std::filesystem::path& path, LoadStats* stats = nullptr);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

double cosine(const Vector& x, const Vector& y);

// Which exemplar mean comes first in the effect-size numerator. JMinusI is
// the default (positive = association of side j with the first attribute);
// Caliskan mirrors the WEAT literature's i-minus-j order.
enum class SignConvention { JMinusI, Caliskan };

const char* sign_convention_name(SignConvention c);

// Per-set record of words dropped while resolving a lexicon against an
// embedding table.
struct OovReport {
    std::map<std::string, std::vector<std::string>> missing;    // set label -> words
    std::map<std::string, std::vector<std::string>> zero_norm;  // set label -> words

    bool empty() const { return missing.empty() && zero_norm.empty(); }
};

struct WeatInput {
    std::vector<std::string> ew_i_words, ew_j_words, aw_p_words, aw_q_words;
    std::vector<Vector> ew_i, ew_j, aw_p, aw_q;
    OovReport oov;
};

// Resolves exemplar and attribute sets to vectors, dropping OOV and
// zero-norm words with a report; errors if any set becomes empty.
// Multiword entries resolve via their space-joined text.
WeatInput resolve_weat_input(const lexicon::BiasLexicon& lex, const EmbeddingTable& emb);

// Eq-level primitives. s = mean cosine against aw_p minus mean against aw_q.
double weat_s(const Vector& e, const std::vector<Vector>& aw_p, const std::vector<Vector>& aw_q);
double weat_s(const std::string& word, const lexicon::WordSet& aw_p, const lexicon::WordSet& aw_q,
              const EmbeddingTable& emb);

// Sum of s over ew_i minus sum over ew_j (sums, not means).
double weat_statistic(const WeatInput& input);

// Standardized association: numerator per the sign convention, denominator
// the sample (n-1) standard deviation of s over the exemplar union.
double effect_size(const WeatInput& input, SignConvention convention = SignConvention::JMinusI);

enum class PvalueMode { Exact, MonteCarlo };

struct PvalueResult {
    double p_value = 1.0;
    std::string method;  // "exact" or "monte_carlo"
    std::uint64_t n = 0;  // partitions enumerated or samples drawn
    std::uint64_t greater = 0;
    std::uint64_t ties = 0;
    std::uint64_t seed = 0;
};

// One-sided probability that a random re-partition of the exemplar union
// (into the original sizes) yields a strictly larger statistic. Exact mode
// requires equal sizes and enumerates all partitions when there are at most
// kExactPartitionLimit of them, falling back to Monte-Carlo otherwise.
// Monte-Carlo p is add-one smoothed; exact p is the raw proportion.
inline constexpr std::uint64_t kExactPartitionLimit = 200000;
inline constexpr std::uint64_t kMonteCarloSamples = 100000;

PvalueResult weat_pvalue(const WeatInput& input, PvalueMode mode, std::uint64_t seed,
                         int workers = 1);

struct WeatReport {
    double statistic = 0.0;
    double effect_size = 0.0;
    double p_value = 1.0;
    std::string method;
    std::uint64_t n = 0;
    std::uint64_t ties = 0;
    std::uint64_t seed = 0;
    std::string sign_convention;
    OovReport oov;
    std::size_t n_ew_i = 0, n_ew_j = 0, n_aw_p = 0, n_aw_q = 0;
};

WeatReport run_weat(const WeatInput& input, PvalueMode mode, std::uint64_t seed,
                    SignConvention convention = SignConvention::JMinusI, int workers = 1);

struct TrainParams {
    std::size_t window = 5;
    std::size_t min_count = 2;
    std::size_t dimension = 0;  // 0 = min(100, vocab - 1)
    std::size_t max_vocab = 20000;
    double context_smoothing = 0.75;
    std::uint64_t seed = 42;
    int workers = 1;
};

// PPMI co-occurrence matrix (symmetric window, smoothed context
// distribution) factorized by truncated SVD; vectors are U * sqrt(S).
// Deterministic given (corpus, params).
EmbeddingTable train_embeddings(const corpus::CorpusStream& corpus, const TrainParams& params);

struct JointVsImplicitReport {
    WeatReport joint;          // trained on the full corpus
    WeatReport implicit_only;  // trained on the explicit-filtered corpus
    double effect_size_difference = 0.0;
    std::size_t removed_explicit = 0;
};

JointVsImplicitReport joint_vs_implicit(const corpus::CorpusStream& corpus,
                                        const lexicon::BiasLexicon& lex,
                                        const TrainParams& params, PvalueMode mode,
                                        std::uint64_t seed,
                                        SignConvention convention = SignConvention::JMinusI,
                                        int workers = 1);

}  // namespace biaslens::weat
