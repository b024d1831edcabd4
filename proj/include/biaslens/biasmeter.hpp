#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biaslens/extract.hpp"
#include "biaslens/sentiment.hpp"

namespace biaslens::biasmeter {

// Sentiment scores aligned with the four partition collections.
struct ScoredCollections {
    std::vector<int> cwi;  // explicit statements about concept i
    std::vector<int> cwj;
    std::vector<int> ewi;  // implicit (exemplar) statements about concept i
    std::vector<int> ewj;
};

// mean(cwj) - mean(cwi); errors with biasmeter/empty_collection naming the
// empty side. An empty collection makes the quantity undefined, never zero.
double explicit_bias(const ScoredCollections& sc);

// mean(ewj) - mean(ewi).
double implicit_bias(const ScoredCollections& sc);

struct SignificanceResult {
    double t_observed = 0.0;  // |explicit - implicit|
    double p_value = 1.0;     // add-one smoothed, in (0, 1]
    std::uint64_t n_resamples = 0;
    std::uint64_t seed = 0;
};

// Permutation test of "explicit and implicit bias are equal". Within each
// concept side the pooled explicit+implicit scores are re-dealt into groups
// of the original sizes; the statistic is the absolute difference of the
// two bias values. Deterministic per seed at any worker count.
SignificanceResult difference_significance(const ScoredCollections& sc, std::uint64_t n_resamples,
                                           std::uint64_t seed, int workers = 1);

struct CollectionStats {
    std::size_t count = 0;
    double mean = 0.0;
};

struct BiasReport {
    double explicit_bias = 0.0;
    double implicit_bias = 0.0;
    double difference = 0.0;  // explicit - implicit
    double p_value = 1.0;
    std::uint64_t n_resamples = 0;
    std::uint64_t seed = 0;
    CollectionStats cwi, cwj, ewi, ewj;
    std::string lexicon_id;
    std::string scorer_id;
    std::string concept_i;
    std::string concept_j;
    std::string sign_convention;  // human-readable legend, filled by measure()
    double significance_threshold = 0.0001;
    bool significant = false;
};

struct MeasureConfig {
    std::uint64_t n_resamples = 10000;
    std::uint64_t seed = 42;
    int workers = 1;
    double significance_threshold = 0.0001;
    bool compute_significance = true;
};

ScoredCollections score_partition(const extract::CorpusPartition& partition,
                                  sentiment::Scorer& scorer,
                                  sentiment::ScoreCache* cache = nullptr);

BiasReport measure(const extract::CorpusPartition& partition, sentiment::Scorer& scorer,
                   const MeasureConfig& config = {}, sentiment::ScoreCache* cache = nullptr);

// Report fields derived from already-scored collections (used by callers
// that manage scoring themselves).
BiasReport measure_scored(const ScoredCollections& sc, const MeasureConfig& config);

}  // namespace biaslens::biasmeter
