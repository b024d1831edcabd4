#pragma once

#include <string>
#include <vector>

#include "biaslens/biasmeter.hpp"
#include "biaslens/corpus.hpp"
#include "biaslens/extract.hpp"
#include "biaslens/lexicon.hpp"
#include "biaslens/sentiment.hpp"

namespace biaslens::temporal {

struct MonthBucket {
    std::string key;  // "YYYY-MM", UTC
    corpus::CorpusStream sentences;
};

struct BucketResult {
    std::string key;
    bool included = false;
    extract::PartitionCounts counts;
    // valid only when included
    double explicit_bias = 0.0;
    double implicit_bias = 0.0;
    double p_value = 1.0;
    std::string shortfall;  // why the bucket was excluded
};

struct EvolutionSeries {
    std::vector<BucketResult> buckets;  // chronological
    double explicit_stability = 0.0;    // population std dev over included buckets
    double implicit_stability = 0.0;
    std::size_t included_buckets = 0;
    std::size_t untimestamped = 0;
    std::size_t min_statements = 20;
    std::string lexicon_id;
    std::string scorer_id;
};

// Chronological buckets keyed by UTC calendar month; untimestamped
// sentences are dropped and counted. Errors with temporal/no_timestamps
// when nothing is timestamped.
std::vector<MonthBucket> bucket_by_month(const corpus::CorpusStream& corpus,
                                         std::size_t* untimestamped = nullptr);

struct EvolutionConfig {
    std::size_t min_statements = 20;  // per collection, per bucket
    std::uint64_t n_resamples = 10000;
    std::uint64_t seed = 42;
    int workers = 1;
    long max_token_distance = -1;
};

// Per-month bias measurement plus stability of each series. Buckets where
// any collection falls short of min_statements are excluded (and reported);
// fewer than 2 included buckets is temporal/too_few_buckets.
EvolutionSeries evolution(const corpus::CorpusStream& corpus, const lexicon::BiasLexicon& lexicon,
                          sentiment::Scorer& scorer, const EvolutionConfig& config = {},
                          sentiment::ScoreCache* cache = nullptr);

// Population (n-denominator) standard deviation; the bucket series is the
// whole observed period, not a sample.
double population_stddev(const std::vector<double>& values);

}  // namespace biaslens::temporal
