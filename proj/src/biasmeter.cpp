#include "biaslens/biasmeter.hpp"

#include <atomic>
#include <cmath>

#include "biaslens/error.hpp"
#include "biaslens/parallel.hpp"
#include "biaslens/rng.hpp"

namespace biaslens::biasmeter {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("biasmeter", code, msg);
}

double mean_of(const std::vector<int>& v, const char* name) {
    if (v.empty()) fail("empty_collection", std::string("collection ") + name + " is empty");
    long sum = 0;
    for (int s : v) sum += s;
    return static_cast<double>(sum) / static_cast<double>(v.size());
}

void require_nonempty(const ScoredCollections& sc) {
    mean_of(sc.cwi, "s_cwi");
    mean_of(sc.cwj, "s_cwj");
    mean_of(sc.ewi, "s_ewi");
    mean_of(sc.ewj, "s_ewj");
}

// One side's pooled scores with the explicit-group size; resampling deals
// the pool into explicit/implicit groups of the original sizes.
struct SidePool {
    std::vector<int> scores;
    std::size_t n_explicit;
};

double resample_bias_difference(const SidePool& side_i, const SidePool& side_j, Rng& rng) {
    auto deal = [&rng](const SidePool& pool, double& mean_explicit, double& mean_implicit) {
        std::vector<std::size_t> idx(pool.scores.size());
        for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
        rng.shuffle(idx);
        long sum_explicit = 0;
        long sum_total = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const int s = pool.scores[idx[k]];
            sum_total += s;
            if (k < pool.n_explicit) sum_explicit += s;
        }
        const long sum_implicit = sum_total - sum_explicit;
        mean_explicit = static_cast<double>(sum_explicit) / static_cast<double>(pool.n_explicit);
        mean_implicit = static_cast<double>(sum_implicit) /
                        static_cast<double>(pool.scores.size() - pool.n_explicit);
    };
    double cwi, ewi, cwj, ewj;
    deal(side_i, cwi, ewi);
    deal(side_j, cwj, ewj);
    const double explicit_b = cwj - cwi;
    const double implicit_b = ewj - ewi;
    return std::fabs(explicit_b - implicit_b);
}

}  // namespace

double explicit_bias(const ScoredCollections& sc) {
    const double mi = mean_of(sc.cwi, "s_cwi");
    const double mj = mean_of(sc.cwj, "s_cwj");
    return mj - mi;
}

double implicit_bias(const ScoredCollections& sc) {
    const double mi = mean_of(sc.ewi, "s_ewi");
    const double mj = mean_of(sc.ewj, "s_ewj");
    return mj - mi;
}

SignificanceResult difference_significance(const ScoredCollections& sc, std::uint64_t n_resamples,
                                           std::uint64_t seed, int workers) {
    require_nonempty(sc);
    if (n_resamples < 1) fail("bad_args", "n_resamples must be >= 1");

    SignificanceResult result;
    result.n_resamples = n_resamples;
    result.seed = seed;
    result.t_observed = std::fabs(explicit_bias(sc) - implicit_bias(sc));

    SidePool side_i{sc.cwi, sc.cwi.size()};
    side_i.scores.insert(side_i.scores.end(), sc.ewi.begin(), sc.ewi.end());
    SidePool side_j{sc.cwj, sc.cwj.size()};
    side_j.scores.insert(side_j.scores.end(), sc.ewj.begin(), sc.ewj.end());

    std::atomic<std::uint64_t> exceed{0};
    parallel_for(static_cast<std::size_t>(n_resamples), workers,
                 [&](std::size_t begin, std::size_t end) {
                     std::uint64_t local = 0;
                     for (std::size_t k = begin; k < end; ++k) {
                         Rng rng = Rng::derive(seed, k);
                         if (resample_bias_difference(side_i, side_j, rng) >= result.t_observed)
                             ++local;
                     }
                     exceed += local;
                 });
    result.p_value = static_cast<double>(1 + exceed.load()) / static_cast<double>(1 + n_resamples);
    return result;
}

ScoredCollections score_partition(const extract::CorpusPartition& partition,
                                  sentiment::Scorer& scorer, sentiment::ScoreCache* cache) {
    auto values = [&](const std::vector<extract::Statement>& sts) {
        std::vector<int> out;
        out.reserve(sts.size());
        for (const auto& [sid, score] : sentiment::score_collection(sts, scorer, cache))
            out.push_back(score);
        return out;
    };
    ScoredCollections sc;
    sc.cwi = values(partition.s_cwi);
    sc.cwj = values(partition.s_cwj);
    sc.ewi = values(partition.s_ewi);
    sc.ewj = values(partition.s_ewj);
    return sc;
}

BiasReport measure_scored(const ScoredCollections& sc, const MeasureConfig& config) {
    BiasReport report;
    report.cwi = {sc.cwi.size(), mean_of(sc.cwi, "s_cwi")};
    report.cwj = {sc.cwj.size(), mean_of(sc.cwj, "s_cwj")};
    report.ewi = {sc.ewi.size(), mean_of(sc.ewi, "s_ewi")};
    report.ewj = {sc.ewj.size(), mean_of(sc.ewj, "s_ewj")};
    report.explicit_bias = explicit_bias(sc);
    report.implicit_bias = implicit_bias(sc);
    report.difference = report.explicit_bias - report.implicit_bias;
    report.seed = config.seed;
    report.significance_threshold = config.significance_threshold;
    if (config.compute_significance) {
        const SignificanceResult sig =
            difference_significance(sc, config.n_resamples, config.seed, config.workers);
        report.p_value = sig.p_value;
        report.n_resamples = sig.n_resamples;
        report.significant = sig.p_value <= config.significance_threshold;
    }
    return report;
}

BiasReport measure(const extract::CorpusPartition& partition, sentiment::Scorer& scorer,
                   const MeasureConfig& config, sentiment::ScoreCache* cache) {
    const ScoredCollections sc = score_partition(partition, scorer, cache);
    BiasReport report = measure_scored(sc, config);
    report.lexicon_id = partition.lexicon_id;
    report.scorer_id = scorer.id();
    report.concept_i = partition.concept_i;
    report.concept_j = partition.concept_j;
    const std::string right = partition.concept_j.empty() ? "concept j" : partition.concept_j;
    const std::string left = partition.concept_i.empty() ? "concept i" : partition.concept_i;
    report.sign_convention =
        "positive values indicate bias preferring " + right + " (j) over " + left + " (i)";
    return report;
}

}  // namespace biaslens::biasmeter
