#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biaslens/biasmeter.hpp"
#include "biaslens/extract.hpp"
#include "biaslens/lexicon.hpp"
#include "biaslens/sentiment.hpp"

namespace biaslens::robustness {

// Sign-level summary of a measurement; "qualitatively consistent" means all
// three signs agree. Zero band is +/-1e-12.
struct Conclusion {
    int explicit_sign = 0;
    int implicit_sign = 0;
    int difference_sign = 0;  // sign(explicit - implicit)

    bool operator==(const Conclusion& other) const = default;
};

int bias_sign(double value);  // 0 inside the +/-1e-12 band

struct TrialRecord {
    std::uint64_t trial = 0;
    std::vector<std::string> subset_i;  // exemplar entries kept, side i
    std::vector<std::string> subset_j;
    std::vector<std::string> subset2_i;  // second-level subset (size trials)
    std::vector<std::string> subset2_j;
    Conclusion conclusion;    // under the primary scorer / first subset
    Conclusion conclusion_b;  // comparator (second scorer or second subset)
    bool compared = false;    // conclusion_b is meaningful
    bool consistent = false;
    bool aborted = false;
    std::string error;
};

struct RobustnessReport {
    std::string kind;  // "choice", "size" or "classifier"
    std::uint64_t trial_count = 0;    // completed trials
    std::uint64_t aborted_trials = 0;
    std::uint64_t consistent_trials = 0;
    double consistency_percent = 0.0;  // 100 * consistent / completed
    Conclusion baseline;
    double fraction = 0.5;
    double fraction2 = 0.5;
    std::uint64_t seed = 0;
    std::string lexicon_id;
    std::string scorer_id;
    std::string scorer_b_id;
    std::vector<TrialRecord> trials;
};

struct TrialConfig {
    std::uint64_t trials = 10000;
    double fraction = 0.5;   // subset size = ceil(fraction * |set|)
    double fraction2 = 0.5;  // size trials: |S2| = ceil(fraction2 * |S1|)
    std::uint64_t seed = 42;
    int workers = 1;
};

// Baseline vs. trials with a random exemplar subset per side; implicit
// collections are restricted to statements matched by surviving exemplars.
RobustnessReport exemplar_choice_trial(const extract::CorpusPartition& partition,
                                       const lexicon::BiasLexicon& lexicon,
                                       sentiment::Scorer& scorer, const TrialConfig& config,
                                       sentiment::ScoreCache* cache = nullptr);

// Conclusion under subset S1 compared with Conclusion under S2, a subset of
// S1 drawn per side.
RobustnessReport set_size_trial(const extract::CorpusPartition& partition,
                                const lexicon::BiasLexicon& lexicon, sentiment::Scorer& scorer,
                                const TrialConfig& config,
                                sentiment::ScoreCache* cache = nullptr);

// Same subset evaluated under two scorers; scorer errors abort the affected
// trial and are counted separately.
RobustnessReport classifier_choice_trial(const extract::CorpusPartition& partition,
                                         const lexicon::BiasLexicon& lexicon,
                                         sentiment::Scorer& scorer_a, sentiment::Scorer& scorer_b,
                                         const TrialConfig& config,
                                         sentiment::ScoreCache* cache = nullptr);

}  // namespace biaslens::robustness
