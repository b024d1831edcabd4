#include "biaslens/robustness.hpp"

#include <cmath>
#include <unordered_map>

#include "biaslens/error.hpp"
#include "biaslens/parallel.hpp"
#include "biaslens/rng.hpp"

namespace biaslens::robustness {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("robustness", code, msg);
}

constexpr double kZeroBand = 1e-12;

std::vector<int> collection_scores(const std::vector<extract::Statement>& sts,
                                   sentiment::Scorer& scorer, sentiment::ScoreCache* cache) {
    std::vector<int> out;
    out.reserve(sts.size());
    for (const auto& [sid, score] : sentiment::score_collection(sts, scorer, cache))
        out.push_back(score);
    return out;
}

double mean_int(const std::vector<int>& v) {
    long sum = 0;
    for (int s : v) sum += s;
    return static_cast<double>(sum) / static_cast<double>(v.size());
}

// Per-side implicit data: scores aligned with statements, plus which
// exemplar entries each statement matched.
struct ImplicitSide {
    std::vector<int> scores;
    std::vector<std::vector<std::uint32_t>> matched_entries;
    std::size_t n_exemplars = 0;
    std::vector<std::string> entry_texts;
};

ImplicitSide build_side(const std::vector<extract::Statement>& statements,
                        const lexicon::WordSet& exemplars, std::vector<int> scores) {
    ImplicitSide side;
    side.scores = std::move(scores);
    side.n_exemplars = exemplars.size();
    std::unordered_map<std::string, std::uint32_t> entry_id;
    for (std::uint32_t k = 0; k < exemplars.entries.size(); ++k) {
        entry_id.emplace(exemplars.entries[k].text, k);
        side.entry_texts.push_back(exemplars.entries[k].text);
    }
    side.matched_entries.reserve(statements.size());
    for (const auto& st : statements) {
        std::vector<std::uint32_t> ids;
        for (const auto& word : st.matched_target_words) {
            const auto it = entry_id.find(word);
            if (it != entry_id.end()) ids.push_back(it->second);
        }
        side.matched_entries.push_back(std::move(ids));
    }
    return side;
}

// Mean implicit score over statements matched by a surviving exemplar;
// nullopt when nothing survives.
std::optional<double> restricted_mean(const ImplicitSide& side, const std::vector<char>& keep) {
    long sum = 0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < side.scores.size(); ++k) {
        bool survives = false;
        for (std::uint32_t id : side.matched_entries[k]) {
            if (keep[id]) {
                survives = true;
                break;
            }
        }
        if (survives) {
            sum += side.scores[k];
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return static_cast<double>(sum) / static_cast<double>(count);
}

Conclusion conclude(double explicit_bias, double implicit_bias) {
    Conclusion c;
    c.explicit_sign = bias_sign(explicit_bias);
    c.implicit_sign = bias_sign(implicit_bias);
    c.difference_sign = bias_sign(explicit_bias - implicit_bias);
    return c;
}

std::size_t subset_size(double fraction, std::size_t n, const char* what) {
    if (!(fraction > 0.0) || fraction > 1.0)
        fail("bad_args", std::string(what) + " fraction must be in (0, 1]");
    std::size_t k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (k > n) k = n;
    if (k < 2)
        fail("subset_too_small", std::string(what) + " subset of " + std::to_string(n) +
                                     " exemplars has only " + std::to_string(k) +
                                     " words (need >= 2)");
    return k;
}

std::vector<char> mask_from(const std::vector<std::size_t>& chosen, std::size_t n) {
    std::vector<char> mask(n, 0);
    for (std::size_t idx : chosen) mask[idx] = 1;
    return mask;
}

std::vector<std::string> texts_from(const std::vector<std::size_t>& chosen,
                                    const std::vector<std::string>& entry_texts) {
    std::vector<std::string> out;
    out.reserve(chosen.size());
    for (std::size_t idx : chosen) out.push_back(entry_texts[idx]);
    return out;
}

void finalize(RobustnessReport& report) {
    for (const auto& t : report.trials) {
        if (t.aborted) {
            ++report.aborted_trials;
            continue;
        }
        ++report.trial_count;
        if (t.consistent) ++report.consistent_trials;
    }
    report.consistency_percent =
        report.trial_count == 0
            ? 0.0
            : 100.0 * static_cast<double>(report.consistent_trials) /
                  static_cast<double>(report.trial_count);
}

struct ScoredPartition {
    double mean_cwi = 0.0;
    double mean_cwj = 0.0;
    ImplicitSide side_i;
    ImplicitSide side_j;
};

ScoredPartition score_for_trials(const extract::CorpusPartition& partition,
                                 const lexicon::BiasLexicon& lexicon, sentiment::Scorer& scorer,
                                 sentiment::ScoreCache* cache) {
    if (partition.s_cwi.empty() || partition.s_cwj.empty() || partition.s_ewi.empty() ||
        partition.s_ewj.empty())
        fail("empty_collection", "robustness trials need all four collections non-empty");
    ScoredPartition sp;
    sp.mean_cwi = mean_int(collection_scores(partition.s_cwi, scorer, cache));
    sp.mean_cwj = mean_int(collection_scores(partition.s_cwj, scorer, cache));
    sp.side_i = build_side(partition.s_ewi, lexicon.concept_pair.exemplar_words_i,
                           collection_scores(partition.s_ewi, scorer, cache));
    sp.side_j = build_side(partition.s_ewj, lexicon.concept_pair.exemplar_words_j,
                           collection_scores(partition.s_ewj, scorer, cache));
    return sp;
}

std::optional<Conclusion> conclusion_for_masks(const ScoredPartition& sp,
                                               const std::vector<char>& keep_i,
                                               const std::vector<char>& keep_j,
                                               std::string* error) {
    const auto mean_i = restricted_mean(sp.side_i, keep_i);
    const auto mean_j = restricted_mean(sp.side_j, keep_j);
    if (!mean_i || !mean_j) {
        if (error)
            *error = std::string("no implicit statements survive the subset on side ") +
                     (!mean_i ? "i" : "j");
        return std::nullopt;
    }
    return conclude(sp.mean_cwj - sp.mean_cwi, *mean_j - *mean_i);
}

Conclusion baseline_conclusion(const ScoredPartition& sp) {
    const std::vector<char> all_i(sp.side_i.n_exemplars, 1);
    const std::vector<char> all_j(sp.side_j.n_exemplars, 1);
    std::string err;
    const auto c = conclusion_for_masks(sp, all_i, all_j, &err);
    if (!c) fail("empty_collection", err);
    return *c;
}

}  // namespace

int bias_sign(double value) {
    if (value > kZeroBand) return 1;
    if (value < -kZeroBand) return -1;
    return 0;
}

RobustnessReport exemplar_choice_trial(const extract::CorpusPartition& partition,
                                       const lexicon::BiasLexicon& lexicon,
                                       sentiment::Scorer& scorer, const TrialConfig& config,
                                       sentiment::ScoreCache* cache) {
    const ScoredPartition sp = score_for_trials(partition, lexicon, scorer, cache);
    const std::size_t k_i = subset_size(config.fraction, sp.side_i.n_exemplars, "side i");
    const std::size_t k_j = subset_size(config.fraction, sp.side_j.n_exemplars, "side j");

    RobustnessReport report;
    report.kind = "choice";
    report.baseline = baseline_conclusion(sp);
    report.fraction = config.fraction;
    report.seed = config.seed;
    report.lexicon_id = partition.lexicon_id;
    report.scorer_id = scorer.id();
    report.trials.resize(config.trials);

    parallel_for(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng = Rng::derive(config.seed, t);
            TrialRecord& rec = report.trials[t];
            rec.trial = t;
            const auto chosen_i = rng.sample_indices(sp.side_i.n_exemplars, k_i);
            const auto chosen_j = rng.sample_indices(sp.side_j.n_exemplars, k_j);
            rec.subset_i = texts_from(chosen_i, sp.side_i.entry_texts);
            rec.subset_j = texts_from(chosen_j, sp.side_j.entry_texts);
            const auto c = conclusion_for_masks(sp, mask_from(chosen_i, sp.side_i.n_exemplars),
                                                mask_from(chosen_j, sp.side_j.n_exemplars),
                                                &rec.error);
            if (!c) {
                rec.aborted = true;
                continue;
            }
            rec.conclusion = *c;
            rec.consistent = (*c == report.baseline);
        }
    });
    finalize(report);
    return report;
}

RobustnessReport set_size_trial(const extract::CorpusPartition& partition,
                                const lexicon::BiasLexicon& lexicon, sentiment::Scorer& scorer,
                                const TrialConfig& config, sentiment::ScoreCache* cache) {
    const ScoredPartition sp = score_for_trials(partition, lexicon, scorer, cache);
    const std::size_t k1_i = subset_size(config.fraction, sp.side_i.n_exemplars, "side i S1");
    const std::size_t k1_j = subset_size(config.fraction, sp.side_j.n_exemplars, "side j S1");
    const std::size_t k2_i = subset_size(config.fraction2, k1_i, "side i S2");
    const std::size_t k2_j = subset_size(config.fraction2, k1_j, "side j S2");

    RobustnessReport report;
    report.kind = "size";
    report.baseline = baseline_conclusion(sp);
    report.fraction = config.fraction;
    report.fraction2 = config.fraction2;
    report.seed = config.seed;
    report.lexicon_id = partition.lexicon_id;
    report.scorer_id = scorer.id();
    report.trials.resize(config.trials);

    parallel_for(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng = Rng::derive(config.seed, t);
            TrialRecord& rec = report.trials[t];
            rec.trial = t;
            const auto s1_i = rng.sample_indices(sp.side_i.n_exemplars, k1_i);
            const auto s1_j = rng.sample_indices(sp.side_j.n_exemplars, k1_j);
            // S2 is drawn from S1, per side
            auto draw_s2 = [&rng](const std::vector<std::size_t>& s1, std::size_t k2) {
                const auto picks = rng.sample_indices(s1.size(), k2);
                std::vector<std::size_t> out;
                out.reserve(picks.size());
                for (std::size_t p : picks) out.push_back(s1[p]);
                return out;
            };
            const auto s2_i = draw_s2(s1_i, k2_i);
            const auto s2_j = draw_s2(s1_j, k2_j);
            rec.subset_i = texts_from(s1_i, sp.side_i.entry_texts);
            rec.subset_j = texts_from(s1_j, sp.side_j.entry_texts);
            rec.subset2_i = texts_from(s2_i, sp.side_i.entry_texts);
            rec.subset2_j = texts_from(s2_j, sp.side_j.entry_texts);

            const auto c1 = conclusion_for_masks(sp, mask_from(s1_i, sp.side_i.n_exemplars),
                                                 mask_from(s1_j, sp.side_j.n_exemplars),
                                                 &rec.error);
            if (!c1) {
                rec.aborted = true;
                continue;
            }
            const auto c2 = conclusion_for_masks(sp, mask_from(s2_i, sp.side_i.n_exemplars),
                                                 mask_from(s2_j, sp.side_j.n_exemplars),
                                                 &rec.error);
            if (!c2) {
                rec.aborted = true;
                continue;
            }
            rec.conclusion = *c1;
            rec.conclusion_b = *c2;
            rec.compared = true;
            rec.consistent = (*c1 == *c2);
        }
    });
    finalize(report);
    return report;
}

RobustnessReport classifier_choice_trial(const extract::CorpusPartition& partition,
                                         const lexicon::BiasLexicon& lexicon,
                                         sentiment::Scorer& scorer_a, sentiment::Scorer& scorer_b,
                                         const TrialConfig& config,
                                         sentiment::ScoreCache* cache) {
    const ScoredPartition sp_a = score_for_trials(partition, lexicon, scorer_a, cache);
    const ScoredPartition sp_b = score_for_trials(partition, lexicon, scorer_b, cache);
    const std::size_t k_i = subset_size(config.fraction, sp_a.side_i.n_exemplars, "side i");
    const std::size_t k_j = subset_size(config.fraction, sp_a.side_j.n_exemplars, "side j");

    RobustnessReport report;
    report.kind = "classifier";
    report.baseline = baseline_conclusion(sp_a);
    report.fraction = config.fraction;
    report.seed = config.seed;
    report.lexicon_id = partition.lexicon_id;
    report.scorer_id = scorer_a.id();
    report.scorer_b_id = scorer_b.id();
    report.trials.resize(config.trials);

    parallel_for(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng = Rng::derive(config.seed, t);
            TrialRecord& rec = report.trials[t];
            rec.trial = t;
            const auto chosen_i = rng.sample_indices(sp_a.side_i.n_exemplars, k_i);
            const auto chosen_j = rng.sample_indices(sp_a.side_j.n_exemplars, k_j);
            rec.subset_i = texts_from(chosen_i, sp_a.side_i.entry_texts);
            rec.subset_j = texts_from(chosen_j, sp_a.side_j.entry_texts);
            const auto mask_i = mask_from(chosen_i, sp_a.side_i.n_exemplars);
            const auto mask_j = mask_from(chosen_j, sp_a.side_j.n_exemplars);
            const auto ca = conclusion_for_masks(sp_a, mask_i, mask_j, &rec.error);
            if (!ca) {
                rec.aborted = true;
                continue;
            }
            const auto cb = conclusion_for_masks(sp_b, mask_i, mask_j, &rec.error);
            if (!cb) {
                rec.aborted = true;
                continue;
            }
            rec.conclusion = *ca;
            rec.conclusion_b = *cb;
            rec.compared = true;
            rec.consistent = (*ca == *cb);
        }
    });
    finalize(report);
    return report;
}

}  // namespace biaslens::robustness
