#include "biaslens/temporal.hpp"

#include <cmath>
#include <map>

#include "biaslens/error.hpp"

namespace biaslens::temporal {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("temporal", code, msg);
}

}  // namespace

std::vector<MonthBucket> bucket_by_month(const corpus::CorpusStream& corpus,
                                         std::size_t* untimestamped) {
    std::map<std::string, corpus::CorpusStream> by_month;  // sorted keys = chronological
    std::size_t skipped = 0;
    for (const auto& sent : corpus) {
        if (!sent.timestamp) {
            ++skipped;
            continue;
        }
        by_month[corpus::month_key(*sent.timestamp)].push(sent);
    }
    if (untimestamped) *untimestamped = skipped;
    if (by_month.empty()) fail("no_timestamps", "corpus has no timestamped sentences");
    std::vector<MonthBucket> buckets;
    buckets.reserve(by_month.size());
    for (auto& [key, sentences] : by_month) buckets.push_back({key, std::move(sentences)});
    return buckets;
}

double population_stddev(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / n);
}

EvolutionSeries evolution(const corpus::CorpusStream& corpus, const lexicon::BiasLexicon& lexicon,
                          sentiment::Scorer& scorer, const EvolutionConfig& config,
                          sentiment::ScoreCache* cache) {
    EvolutionSeries series;
    series.min_statements = config.min_statements;
    series.lexicon_id = lexicon.id;
    series.scorer_id = scorer.id();

    const auto buckets = bucket_by_month(corpus, &series.untimestamped);

    extract::PartitionOptions popts;
    popts.max_token_distance = config.max_token_distance;
    popts.workers = config.workers;

    biasmeter::MeasureConfig mconfig;
    mconfig.n_resamples = config.n_resamples;
    mconfig.seed = config.seed;
    mconfig.workers = config.workers;

    std::vector<double> explicit_series, implicit_series;
    std::vector<std::string> shortfalls;
    for (const auto& bucket : buckets) {
        const extract::CorpusPartition part = extract::partition(bucket.sentences, lexicon, popts);
        BucketResult result;
        result.key = bucket.key;
        result.counts = part.counts;

        const std::size_t need = config.min_statements;
        std::string shortfall;
        auto check = [&](std::size_t have, const char* name) {
            if (have >= need) return;
            if (!shortfall.empty()) shortfall += ", ";
            shortfall += std::string(name) + " has " + std::to_string(have) + "/" +
                         std::to_string(need);
        };
        check(part.counts.explicit_i, "s_cwi");
        check(part.counts.explicit_j, "s_cwj");
        check(part.counts.implicit_i, "s_ewi");
        check(part.counts.implicit_j, "s_ewj");

        if (shortfall.empty()) {
            const biasmeter::BiasReport report = biasmeter::measure(part, scorer, mconfig, cache);
            result.included = true;
            result.explicit_bias = report.explicit_bias;
            result.implicit_bias = report.implicit_bias;
            result.p_value = report.p_value;
            explicit_series.push_back(report.explicit_bias);
            implicit_series.push_back(report.implicit_bias);
            ++series.included_buckets;
        } else {
            result.shortfall = shortfall;
            shortfalls.push_back(bucket.key + ": " + shortfall);
        }
        series.buckets.push_back(std::move(result));
    }

    if (series.included_buckets < 2) {
        std::string detail = "only " + std::to_string(series.included_buckets) +
                             " buckets meet min_statements=" + std::to_string(config.min_statements);
        for (const auto& s : shortfalls) detail += "; " + s;
        fail("too_few_buckets", detail);
    }
    series.explicit_stability = population_stddev(explicit_series);
    series.implicit_stability = population_stddev(implicit_series);
    return series;
}

}  // namespace biaslens::temporal
