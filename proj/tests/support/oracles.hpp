#pragma once

// Independent reference computations used to check the library. These share
// no code with the implementation paths they verify: accumulation is long
// double, enumeration is recursive, and means/std-devs are recomputed from
// first principles.

#include <cstdint>
#include <vector>

namespace oracle {

// mean(a) - mean(b) via long double accumulation
double mean_difference(const std::vector<int>& a, const std::vector<int>& b);

double cosine(const std::vector<double>& x, const std::vector<double>& y);

// mean_p cosine - mean_q cosine for one exemplar vector
double weat_s(const std::vector<double>& e, const std::vector<std::vector<double>>& aw_p,
              const std::vector<std::vector<double>>& aw_q);

double weat_statistic(const std::vector<std::vector<double>>& ew_i,
                      const std::vector<std::vector<double>>& ew_j,
                      const std::vector<std::vector<double>>& aw_p,
                      const std::vector<std::vector<double>>& aw_q);

double effect_size(const std::vector<std::vector<double>>& ew_i,
                   const std::vector<std::vector<double>>& ew_j,
                   const std::vector<std::vector<double>>& aw_p,
                   const std::vector<std::vector<double>>& aw_q, bool numerator_j_minus_i);

struct ExactPvalue {
    std::uint64_t count = 0;
    std::uint64_t greater = 0;
    std::uint64_t ties = 0;
    double p = 0.0;  // greater / count
};

// Exhaustive enumeration of equal-size partitions of the exemplar union.
ExactPvalue exact_weat_pvalue(const std::vector<std::vector<double>>& ew_i,
                              const std::vector<std::vector<double>>& ew_j,
                              const std::vector<std::vector<double>>& aw_p,
                              const std::vector<std::vector<double>>& aw_q);

// Exhaustive within-side permutation test for the explicit-vs-implicit
// difference: every way of re-dealing each side's pooled scores into groups
// of the original sizes. p = fraction with |T*| >= |T_observed|.
struct ExactDifference {
    std::uint64_t count = 0;
    std::uint64_t at_least = 0;
    double t_observed = 0.0;
    double p = 0.0;
};

ExactDifference exact_difference_pvalue(const std::vector<int>& cwi, const std::vector<int>& cwj,
                                        const std::vector<int>& ewi, const std::vector<int>& ewj);

}  // namespace oracle
