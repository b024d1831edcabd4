#include "support/oracles.hpp"

#include <cmath>

namespace oracle {

namespace {

long double ld_mean(const std::vector<int>& v) {
    long double s = 0.0L;
    for (int x : v) s += x;
    return s / static_cast<long double>(v.size());
}

std::vector<double> all_s(const std::vector<std::vector<double>>& ew_i,
                          const std::vector<std::vector<double>>& ew_j,
                          const std::vector<std::vector<double>>& aw_p,
                          const std::vector<std::vector<double>>& aw_q) {
    std::vector<double> s;
    for (const auto& e : ew_i) s.push_back(weat_s(e, aw_p, aw_q));
    for (const auto& e : ew_j) s.push_back(weat_s(e, aw_p, aw_q));
    return s;
}

// recursive subset enumeration: choose `need` more indices starting at `at`
void enumerate_subsets(const std::vector<double>& s, std::size_t at, std::size_t need, double sum,
                       double total, double observed, ExactPvalue& acc) {
    if (need == 0) {
        const double stat = 2.0 * sum - total;
        ++acc.count;
        if (stat > observed)
            ++acc.greater;
        else if (stat == observed)
            ++acc.ties;
        return;
    }
    if (at + need > s.size()) return;
    enumerate_subsets(s, at + 1, need - 1, sum + s[at], total, observed, acc);
    enumerate_subsets(s, at + 1, need, sum, total, observed, acc);
}

}  // namespace

double mean_difference(const std::vector<int>& a, const std::vector<int>& b) {
    return static_cast<double>(ld_mean(a) - ld_mean(b));
}

double cosine(const std::vector<double>& x, const std::vector<double>& y) {
    long double dot = 0.0L, nx = 0.0L, ny = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += static_cast<long double>(x[i]) * y[i];
        nx += static_cast<long double>(x[i]) * x[i];
        ny += static_cast<long double>(y[i]) * y[i];
    }
    return static_cast<double>(dot / (std::sqrt(nx) * std::sqrt(ny)));
}

double weat_s(const std::vector<double>& e, const std::vector<std::vector<double>>& aw_p,
              const std::vector<std::vector<double>>& aw_q) {
    long double sp = 0.0L;
    for (const auto& a : aw_p) sp += cosine(e, a);
    long double sq = 0.0L;
    for (const auto& a : aw_q) sq += cosine(e, a);
    return static_cast<double>(sp / aw_p.size() - sq / aw_q.size());
}

double weat_statistic(const std::vector<std::vector<double>>& ew_i,
                      const std::vector<std::vector<double>>& ew_j,
                      const std::vector<std::vector<double>>& aw_p,
                      const std::vector<std::vector<double>>& aw_q) {
    long double si = 0.0L;
    for (const auto& e : ew_i) si += weat_s(e, aw_p, aw_q);
    long double sj = 0.0L;
    for (const auto& e : ew_j) sj += weat_s(e, aw_p, aw_q);
    return static_cast<double>(si - sj);
}

double effect_size(const std::vector<std::vector<double>>& ew_i,
                   const std::vector<std::vector<double>>& ew_j,
                   const std::vector<std::vector<double>>& aw_p,
                   const std::vector<std::vector<double>>& aw_q, bool numerator_j_minus_i) {
    long double mi = 0.0L;
    for (const auto& e : ew_i) mi += weat_s(e, aw_p, aw_q);
    mi /= ew_i.size();
    long double mj = 0.0L;
    for (const auto& e : ew_j) mj += weat_s(e, aw_p, aw_q);
    mj /= ew_j.size();

    const std::vector<double> s = all_s(ew_i, ew_j, aw_p, aw_q);
    long double mean = 0.0L;
    for (double v : s) mean += v;
    mean /= s.size();
    long double ss = 0.0L;
    for (double v : s) ss += (v - mean) * (v - mean);
    const long double sd = std::sqrt(static_cast<double>(ss / (s.size() - 1)));
    const long double numerator = numerator_j_minus_i ? mj - mi : mi - mj;
    return static_cast<double>(numerator / sd);
}

ExactPvalue exact_weat_pvalue(const std::vector<std::vector<double>>& ew_i,
                              const std::vector<std::vector<double>>& ew_j,
                              const std::vector<std::vector<double>>& aw_p,
                              const std::vector<std::vector<double>>& aw_q) {
    const std::vector<double> s = all_s(ew_i, ew_j, aw_p, aw_q);
    double total = 0.0;
    for (double v : s) total += v;
    double obs_sum = 0.0;
    for (std::size_t k = 0; k < ew_i.size(); ++k) obs_sum += s[k];
    const double observed = 2.0 * obs_sum - total;

    ExactPvalue acc;
    enumerate_subsets(s, 0, ew_i.size(), 0.0, total, observed, acc);
    acc.p = static_cast<double>(acc.greater) / static_cast<double>(acc.count);
    return acc;
}

namespace {

// every way to choose which pool elements form the explicit group
void enumerate_deals(const std::vector<int>& pool, long pool_total, std::size_t n_explicit,
                     std::size_t at, std::size_t chosen, long sum_explicit,
                     std::vector<std::pair<double, double>>& out) {
    if (chosen == n_explicit) {
        const long sum_implicit = pool_total - sum_explicit;
        out.emplace_back(
            static_cast<double>(sum_explicit) / static_cast<double>(n_explicit),
            static_cast<double>(sum_implicit) / static_cast<double>(pool.size() - n_explicit));
        return;
    }
    if (at >= pool.size() || pool.size() - at < n_explicit - chosen) return;
    enumerate_deals(pool, pool_total, n_explicit, at + 1, chosen + 1, sum_explicit + pool[at], out);
    enumerate_deals(pool, pool_total, n_explicit, at + 1, chosen, sum_explicit, out);
}

long int_sum(const std::vector<int>& v) {
    long s = 0;
    for (int x : v) s += x;
    return s;
}

}  // namespace

ExactDifference exact_difference_pvalue(const std::vector<int>& cwi, const std::vector<int>& cwj,
                                        const std::vector<int>& ewi, const std::vector<int>& ewj) {
    const double observed = std::fabs((mean_difference(cwj, cwi)) - (mean_difference(ewj, ewi)));

    std::vector<int> pool_i(cwi);
    pool_i.insert(pool_i.end(), ewi.begin(), ewi.end());
    std::vector<int> pool_j(cwj);
    pool_j.insert(pool_j.end(), ewj.begin(), ewj.end());

    std::vector<std::pair<double, double>> deals_i, deals_j;
    enumerate_deals(pool_i, int_sum(pool_i), cwi.size(), 0, 0, 0, deals_i);
    enumerate_deals(pool_j, int_sum(pool_j), cwj.size(), 0, 0, 0, deals_j);

    ExactDifference result;
    result.t_observed = observed;
    for (const auto& [mean_cwi, mean_ewi] : deals_i) {
        for (const auto& [mean_cwj, mean_ewj] : deals_j) {
            const double t = std::fabs((mean_cwj - mean_cwi) - (mean_ewj - mean_ewi));
            ++result.count;
            if (t >= observed) ++result.at_least;
        }
    }
    result.p = static_cast<double>(result.at_least) / static_cast<double>(result.count);
    return result;
}

}  // namespace oracle
