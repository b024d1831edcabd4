#include "biaslens/weat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include "biaslens/error.hpp"
#include "biaslens/extract.hpp"
#include "biaslens/parallel.hpp"
#include "biaslens/rng.hpp"

namespace biaslens::weat {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("weat", code, msg);
}

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Summation in an order that depends only on (|x|, x) makes the result
// invariant under permutation of the inputs and exactly negated under
// pointwise negation; the swap symmetries of the effect size rely on this.
double canonical_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end(), [](double a, double b) {
        const double fa = std::fabs(a), fb = std::fabs(b);
        if (fa != fb) return fa < fb;
        return a < b;
    });
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

double plain_mean(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

std::vector<double> s_values(const std::vector<Vector>& exemplars,
                             const std::vector<Vector>& aw_p, const std::vector<Vector>& aw_q) {
    std::vector<double> out;
    out.reserve(exemplars.size());
    for (const auto& e : exemplars) out.push_back(weat_s(e, aw_p, aw_q));
    return out;
}

// C(n, k), saturating at cap + 1 to keep the comparison cheap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace

bool EmbeddingTable::insert(const std::string& word, Vector v) {
    if (dimension_ == 0) dimension_ = v.size();
    if (v.size() != dimension_)
        fail("dimension_mismatch", "vector for \"" + word + "\" has dimension " +
                                       std::to_string(v.size()) + ", table has " +
                                       std::to_string(dimension_));
    return entries_.emplace(word, std::move(v)).second;
}

const Vector* EmbeddingTable::find(const std::string& word) const {
    const auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) fail("bad_embedding", "cannot open embedding file: " + path.string());
    EmbeddingTable table;
    LoadStats local;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> values;
        std::string tok;
        bool parse_ok = true;
        while (ss >> tok) {
            try {
                std::size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                values.push_back(v);
            } catch (const std::exception&) {
                parse_ok = false;
                break;
            }
        }
        if (first_content_line) {
            first_content_line = false;
            // optional "V D" header: two integer tokens
            if (parse_ok && values.size() == 1) {
                double int_part;
                bool word_is_int = !word.empty() &&
                                   word.find_first_not_of("0123456789") == std::string::npos;
                if (word_is_int && std::modf(values[0], &int_part) == 0.0) continue;
            }
        }
        if (!parse_ok)
            fail("bad_embedding",
                 "unparseable number at line " + std::to_string(line_no) + " of " + path.string());
        if (values.empty())
            fail("bad_embedding",
                 "no vector values at line " + std::to_string(line_no) + " of " + path.string());
        if (table.dimension() != 0 && values.size() != table.dimension())
            fail("bad_embedding", "dimension " + std::to_string(values.size()) + " at line " +
                                      std::to_string(line_no) + " of " + path.string() +
                                      " (expected " + std::to_string(table.dimension()) + ")");
        if (!table.insert(word, std::move(values))) ++local.duplicates;
    }
    if (stats) *stats = local;
    return table;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::vector<const std::string*> words;
    words.reserve(table.size());
    for (const auto& [w, v] : table.entries()) words.push_back(&w);
    std::sort(words.begin(), words.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    std::ofstream out(path);
    if (!out) fail("bad_embedding", "cannot write embedding file: " + path.string());
    out << table.size() << " " << table.dimension() << "\n";
    char buf[64];
    for (const std::string* w : words) {
        out << *w;
        for (double v : *table.find(*w)) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            out << buf;
        }
        out << "\n";
    }
}

double cosine(const Vector& x, const Vector& y) {
    if (x.size() != y.size())
        fail("dimension_mismatch", "cosine of vectors with dimensions " +
                                       std::to_string(x.size()) + " and " +
                                       std::to_string(y.size()));
    const double nx = norm(x), ny = norm(y);
    if (nx == 0.0 || ny == 0.0) fail("zero_norm", "cosine of a zero-norm vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
    return dot / (nx * ny);
}

const char* sign_convention_name(SignConvention c) {
    return c == SignConvention::JMinusI ? "j_minus_i" : "caliskan_i_minus_j";
}

WeatInput resolve_weat_input(const lexicon::BiasLexicon& lex, const EmbeddingTable& emb) {
    WeatInput input;
    auto resolve = [&](const lexicon::WordSet& ws, const std::string& label,
                       std::vector<std::string>& words, std::vector<Vector>& vectors) {
        for (const auto& e : ws.entries) {
            const Vector* v = emb.find(e.text);
            if (!v) {
                input.oov.missing[label].push_back(e.text);
                continue;
            }
            if (norm(*v) == 0.0) {
                input.oov.zero_norm[label].push_back(e.text);
                continue;
            }
            words.push_back(e.text);
            vectors.push_back(*v);
        }
        if (vectors.empty())
            fail("oov", "set " + label + " has no resolvable words in the embedding table");
    };
    resolve(lex.concept_pair.exemplar_words_i, "ew_i", input.ew_i_words, input.ew_i);
    resolve(lex.concept_pair.exemplar_words_j, "ew_j", input.ew_j_words, input.ew_j);
    resolve(lex.attribute_pair.attribute_words_p, "aw_p", input.aw_p_words, input.aw_p);
    resolve(lex.attribute_pair.attribute_words_q, "aw_q", input.aw_q_words, input.aw_q);
    return input;
}

double weat_s(const Vector& e, const std::vector<Vector>& aw_p, const std::vector<Vector>& aw_q) {
    if (aw_p.empty() || aw_q.empty()) fail("oov", "empty attribute vector set");
    double sum_p = 0.0;
    for (const auto& a : aw_p) sum_p += cosine(e, a);
    double sum_q = 0.0;
    for (const auto& a : aw_q) sum_q += cosine(e, a);
    return sum_p / static_cast<double>(aw_p.size()) - sum_q / static_cast<double>(aw_q.size());
}

double weat_s(const std::string& word, const lexicon::WordSet& aw_p, const lexicon::WordSet& aw_q,
              const EmbeddingTable& emb) {
    auto lookup = [&](const std::string& w) -> const Vector& {
        const Vector* v = emb.find(w);
        if (!v) fail("oov", "word \"" + w + "\" not in embedding table");
        return *v;
    };
    std::vector<Vector> vp, vq;
    for (const auto& e : aw_p.entries) vp.push_back(lookup(e.text));
    for (const auto& e : aw_q.entries) vq.push_back(lookup(e.text));
    return weat_s(lookup(word), vp, vq);
}

double weat_statistic(const WeatInput& input) {
    double sum_i = 0.0;
    for (const auto& e : input.ew_i) sum_i += weat_s(e, input.aw_p, input.aw_q);
    double sum_j = 0.0;
    for (const auto& e : input.ew_j) sum_j += weat_s(e, input.aw_p, input.aw_q);
    return sum_i - sum_j;
}

double effect_size(const WeatInput& input, SignConvention convention) {
    const auto si = s_values(input.ew_i, input.aw_p, input.aw_q);
    const auto sj = s_values(input.ew_j, input.aw_p, input.aw_q);
    const std::size_t m = si.size() + sj.size();
    if (m < 2) fail("too_few_exemplars", "effect size needs >= 2 exemplars in the union");

    std::vector<double> all(si);
    all.insert(all.end(), sj.begin(), sj.end());
    const double mean_all = canonical_sum(all) / static_cast<double>(m);
    std::vector<double> squares;
    squares.reserve(m);
    for (double v : all) {
        const double d = v - mean_all;
        squares.push_back(d * d);
    }
    const double variance = canonical_sum(squares) / static_cast<double>(m - 1);
    const double sd = std::sqrt(variance);
    if (sd == 0.0) fail("zero_variance", "all exemplars have identical association values");

    const double mean_i = plain_mean(si);
    const double mean_j = plain_mean(sj);
    const double numerator =
        convention == SignConvention::JMinusI ? mean_j - mean_i : mean_i - mean_j;
    return numerator / sd;
}

PvalueResult weat_pvalue(const WeatInput& input, PvalueMode mode, std::uint64_t seed,
                         int workers) {
    const std::size_t n_i = input.ew_i.size();
    const std::size_t n_j = input.ew_j.size();
    const std::size_t total_n = n_i + n_j;

    // association values for the union, ew_i first
    std::vector<double> s(total_n);
    for (std::size_t k = 0; k < n_i; ++k) s[k] = weat_s(input.ew_i[k], input.aw_p, input.aw_q);
    for (std::size_t k = 0; k < n_j; ++k)
        s[n_i + k] = weat_s(input.ew_j[k], input.aw_p, input.aw_q);

    double total_sum = 0.0;
    for (double v : s) total_sum += v;

    // statistic of a partition given the ascending-index sum of its i side;
    // the observed value uses the identical arithmetic so tie detection is
    // stable
    auto stat_of = [&](double i_side_sum) { return 2.0 * i_side_sum - total_sum; };
    double observed_i_sum = 0.0;
    for (std::size_t k = 0; k < n_i; ++k) observed_i_sum += s[k];
    const double observed = stat_of(observed_i_sum);

    PvalueResult result;
    result.seed = seed;

    bool exact = false;
    if (mode == PvalueMode::Exact) {
        if (n_i != n_j)
            fail("unequal_sizes", "exact mode requires |ew_i| == |ew_j| (got " +
                                      std::to_string(n_i) + " and " + std::to_string(n_j) + ")");
        exact = binomial_capped(total_n, n_i, kExactPartitionLimit) <= kExactPartitionLimit;
    }

    if (exact) {
        // enumerate all equal-size partitions in lexicographic order
        std::vector<std::size_t> comb(n_i);
        for (std::size_t k = 0; k < n_i; ++k) comb[k] = k;
        std::uint64_t count = 0, greater = 0, ties = 0;
        while (true) {
            double sum = 0.0;
            for (std::size_t idx : comb) sum += s[idx];
            const double stat = stat_of(sum);
            ++count;
            if (stat > observed)
                ++greater;
            else if (stat == observed)
                ++ties;
            // next combination
            std::size_t k = n_i;
            while (k > 0) {
                --k;
                if (comb[k] != k + total_n - n_i) break;
                if (k == 0) {
                    k = n_i;  // done
                    break;
                }
            }
            if (k == n_i) break;
            ++comb[k];
            for (std::size_t j = k + 1; j < n_i; ++j) comb[j] = comb[j - 1] + 1;
        }
        result.method = "exact";
        result.n = count;
        result.greater = greater;
        result.ties = ties;
        result.p_value = static_cast<double>(greater) / static_cast<double>(count);
        return result;
    }

    // Monte-Carlo over random re-partitions into the original sizes
    const std::uint64_t samples = kMonteCarloSamples;
    std::atomic<std::uint64_t> greater{0}, ties{0};
    std::vector<std::size_t> base_idx(total_n);
    for (std::size_t k = 0; k < total_n; ++k) base_idx[k] = k;
    parallel_for(static_cast<std::size_t>(samples), workers,
                 [&](std::size_t begin, std::size_t end) {
                     std::uint64_t local_greater = 0, local_ties = 0;
                     std::vector<std::size_t> idx = base_idx;
                     for (std::size_t k = begin; k < end; ++k) {
                         Rng rng = Rng::derive(seed, k);
                         idx = base_idx;
                         rng.shuffle(idx);
                         std::sort(idx.begin(), idx.begin() + static_cast<long>(n_i));
                         double sum = 0.0;
                         for (std::size_t t = 0; t < n_i; ++t) sum += s[idx[t]];
                         const double stat = stat_of(sum);
                         if (stat > observed)
                             ++local_greater;
                         else if (stat == observed)
                             ++local_ties;
                     }
                     greater += local_greater;
                     ties += local_ties;
                 });
    result.method = "monte_carlo";
    result.n = samples;
    result.greater = greater.load();
    result.ties = ties.load();
    result.p_value =
        static_cast<double>(1 + result.greater) / static_cast<double>(1 + samples);
    return result;
}

WeatReport run_weat(const WeatInput& input, PvalueMode mode, std::uint64_t seed,
                    SignConvention convention, int workers) {
    WeatReport report;
    report.statistic = weat_statistic(input);
    report.effect_size = effect_size(input, convention);
    const PvalueResult p = weat_pvalue(input, mode, seed, workers);
    report.p_value = p.p_value;
    report.method = p.method;
    report.n = p.n;
    report.ties = p.ties;
    report.seed = seed;
    report.sign_convention = sign_convention_name(convention);
    report.oov = input.oov;
    report.n_ew_i = input.ew_i.size();
    report.n_ew_j = input.ew_j.size();
    report.n_aw_p = input.aw_p.size();
    report.n_aw_q = input.aw_q.size();
    return report;
}

namespace {

constexpr std::size_t kDenseSvdLimit = 1024;

struct Cooccurrence {
    std::vector<std::string> vocab;                    // index -> word
    std::unordered_map<std::string, std::size_t> ids;  // word -> index
    std::vector<Eigen::Triplet<double>> ppmi;          // sparse PPMI entries
};

Cooccurrence build_ppmi(const corpus::CorpusStream& corpus, const TrainParams& params) {
    if (corpus.empty()) fail("vocab_too_small", "cannot train embeddings on an empty corpus");

    // vocabulary: tokens meeting min_count, by (count desc, token asc)
    std::unordered_map<std::string, long long> freq;
    for (const auto& sent : corpus)
        for (const auto& tok : sent.tokens) ++freq[tok];
    std::vector<std::pair<std::string, long long>> by_freq(freq.begin(), freq.end());
    std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Cooccurrence co;
    for (const auto& [word, count] : by_freq) {
        if (count < static_cast<long long>(params.min_count)) break;
        if (co.vocab.size() >= params.max_vocab) break;
        co.ids.emplace(word, co.vocab.size());
        co.vocab.push_back(word);
    }
    const std::size_t v = co.vocab.size();
    if (v < 2) fail("vocab_too_small", "vocabulary after min-count filtering has " +
                                           std::to_string(v) + " words (need >= 2)");

    // symmetric-window pair counts; chunks merge with integer adds, so the
    // merged counts equal the sequential counts for every worker count
    const std::size_t n_sent = corpus.total_count();
    std::unordered_map<std::uint64_t, long long> counts;
    std::mutex merge_mu;
    parallel_for(n_sent, params.workers, [&](std::size_t begin, std::size_t end) {
        std::unordered_map<std::uint64_t, long long> local;
        std::vector<std::size_t> ids;
        static constexpr std::size_t kNotInVocab = static_cast<std::size_t>(-1);
        for (std::size_t si = begin; si < end; ++si) {
            const auto& tokens = corpus[si].tokens;
            ids.clear();
            ids.reserve(tokens.size());
            for (const auto& tok : tokens) {
                const auto it = co.ids.find(tok);
                ids.push_back(it == co.ids.end() ? kNotInVocab : it->second);
            }
            for (std::size_t p = 0; p < ids.size(); ++p) {
                if (ids[p] == kNotInVocab) continue;
                const std::size_t stop = std::min(ids.size(), p + params.window + 1);
                for (std::size_t q = p + 1; q < stop; ++q) {
                    if (ids[q] == kNotInVocab) continue;
                    local[static_cast<std::uint64_t>(ids[p]) * v + ids[q]] += 1;
                    local[static_cast<std::uint64_t>(ids[q]) * v + ids[p]] += 1;
                }
            }
        }
        std::lock_guard<std::mutex> lock(merge_mu);
        for (const auto& [key, c] : local) counts[key] += c;
    });

    if (counts.empty())
        fail("degenerate_ppmi", "no co-occurrences within the window; corpus too sparse");

    std::vector<long long> word_totals(v, 0);
    for (const auto& [key, c] : counts) word_totals[key / v] += c;
    // smoothed context distribution
    std::vector<double> context_pow(v, 0.0);
    double z_alpha = 0.0;
    for (std::size_t c = 0; c < v; ++c) {
        context_pow[c] = std::pow(static_cast<double>(word_totals[c]), params.context_smoothing);
        z_alpha += context_pow[c];
    }

    std::vector<std::uint64_t> keys;
    keys.reserve(counts.size());
    for (const auto& [key, c] : counts) keys.push_back(key);
    std::sort(keys.begin(), keys.end());  // deterministic fill order

    co.ppmi.reserve(keys.size());
    bool any_positive = false;
    for (std::uint64_t key : keys) {
        const std::size_t w = key / v, c = key % v;
        const double joint = static_cast<double>(counts[key]);
        const double pmi =
            std::log(joint * z_alpha / (static_cast<double>(word_totals[w]) * context_pow[c]));
        if (pmi > 0.0) {
            co.ppmi.emplace_back(static_cast<int>(w), static_cast<int>(c), pmi);
            any_positive = true;
        }
    }
    if (!any_positive)
        fail("degenerate_ppmi", "PPMI matrix is all zeros; corpus has no informative contexts");
    return co;
}

}  // namespace

EmbeddingTable train_embeddings(const corpus::CorpusStream& corpus, const TrainParams& params) {
    Cooccurrence co = build_ppmi(corpus, params);
    const std::size_t v = co.vocab.size();

    std::size_t dim = params.dimension;
    if (dim == 0) dim = std::min<std::size_t>(100, v - 1);
    if (dim < 1 || dim > v)
        fail("vocab_too_small", "dimension " + std::to_string(dim) +
                                    " exceeds vocabulary size " + std::to_string(v));

    Eigen::MatrixXd u;
    Eigen::VectorXd singular;
    if (v <= kDenseSvdLimit) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<long>(v), static_cast<long>(v));
        for (const auto& t : co.ppmi) m(t.row(), t.col()) = t.value();
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
        u = svd.matrixU().leftCols(static_cast<long>(dim));
        singular = svd.singularValues().head(static_cast<long>(dim));
    } else {
        // randomized range finder with power iterations; seeded, so the
        // result is deterministic
        Eigen::SparseMatrix<double> m(static_cast<long>(v), static_cast<long>(v));
        m.setFromTriplets(co.ppmi.begin(), co.ppmi.end());
        const long p = static_cast<long>(std::min(v, dim + 10));
        Rng rng(params.seed);
        Eigen::MatrixXd omega(static_cast<long>(v), p);
        for (long i = 0; i < omega.rows(); ++i)
            for (long j = 0; j < p; ++j) omega(i, j) = rng.gauss();
        Eigen::MatrixXd y = m * omega;
        for (int it = 0; it < 2; ++it) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
            Eigen::MatrixXd q =
                qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<long>(v), p);
            y = m * (m.transpose() * q);
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<long>(v), p);
        Eigen::MatrixXd b = q.transpose() * m;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
        u = (q * svd.matrixU()).leftCols(static_cast<long>(dim));
        singular = svd.singularValues().head(static_cast<long>(dim));
    }

    EmbeddingTable table(dim);
    for (std::size_t w = 0; w < v; ++w) {
        Vector vec(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const double x = u(static_cast<long>(w), static_cast<long>(d)) *
                             std::sqrt(std::max(0.0, singular(static_cast<long>(d))));
            if (!std::isfinite(x)) fail("degenerate_ppmi", "non-finite value in trained vectors");
            vec[d] = x;
        }
        table.insert(co.vocab[w], std::move(vec));
    }
    return table;
}

JointVsImplicitReport joint_vs_implicit(const corpus::CorpusStream& corpus,
                                        const lexicon::BiasLexicon& lex, const TrainParams& params,
                                        PvalueMode mode, std::uint64_t seed,
                                        SignConvention convention, int workers) {
    JointVsImplicitReport out;
    auto train_stage = [&](const corpus::CorpusStream& c, const char* stage) {
        try {
            return train_embeddings(c, params);
        } catch (const Error& e) {
            throw Error("weat", "too_small", std::string(stage) + " stage: " + e.what());
        }
    };
    const EmbeddingTable joint_table = train_stage(corpus, "joint");
    out.joint = run_weat(resolve_weat_input(lex, joint_table), mode, seed, convention, workers);

    corpus::CorpusStream filtered =
        extract::filter_explicit(corpus, {lex}, &out.removed_explicit, {.workers = workers});
    const EmbeddingTable impl_table = train_stage(filtered, "implicit_only");
    out.implicit_only =
        run_weat(resolve_weat_input(lex, impl_table), mode, seed, convention, workers);

    out.effect_size_difference = out.joint.effect_size - out.implicit_only.effect_size;
    return out;
}

}  // namespace biaslens::weat
