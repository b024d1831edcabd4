#include "biaslens/extract.hpp"

#include <algorithm>
#include <map>

#include "biaslens/error.hpp"
#include "biaslens/parallel.hpp"

namespace biaslens::extract {

namespace {

// Entries grouped by first token, longest first, for the greedy scan. Owns
// a copy of the entries; the index holds positions, so moving is safe.
struct MatchIndex {
    std::vector<lexicon::WordEntry> entries;
    std::map<std::string, std::vector<std::size_t>> by_first_token;

    explicit MatchIndex(const lexicon::WordSet& ws) : entries(ws.entries) {
        for (std::size_t k = 0; k < entries.size(); ++k)
            by_first_token[entries[k].tokens[0]].push_back(k);
        for (auto& [tok, ids] : by_first_token) {
            std::stable_sort(ids.begin(), ids.end(), [this](std::size_t a, std::size_t b) {
                if (entries[a].tokens.size() != entries[b].tokens.size())
                    return entries[a].tokens.size() > entries[b].tokens.size();
                return entries[a].text < entries[b].text;
            });
        }
    }

    std::vector<MatchSpan> match(const std::vector<std::string>& tokens) const {
        std::vector<MatchSpan> spans;
        std::size_t i = 0;
        while (i < tokens.size()) {
            const auto it = by_first_token.find(tokens[i]);
            bool advanced = false;
            if (it != by_first_token.end()) {
                for (std::size_t id : it->second) {
                    const lexicon::WordEntry& e = entries[id];
                    const std::size_t n = e.tokens.size();
                    if (i + n > tokens.size()) continue;
                    if (std::equal(e.tokens.begin(), e.tokens.end(), tokens.begin() + i)) {
                        spans.push_back({i, i + n, e.text});
                        i += n;
                        advanced = true;
                        break;
                    }
                }
            }
            if (!advanced) ++i;
        }
        return spans;
    }
};

// Token gap between two disjoint spans (0 when adjacent or overlapping).
long span_gap(const MatchSpan& a, const MatchSpan& b) {
    if (a.end <= b.begin) return static_cast<long>(b.begin - a.end);
    if (b.end <= a.begin) return static_cast<long>(a.begin - b.end);
    return 0;
}

// Target spans that have at least one attribute span within the distance
// limit; unlimited when limit < 0.
std::vector<MatchSpan> within_distance(const std::vector<MatchSpan>& targets,
                                       const std::vector<MatchSpan>& attributes,
                                       long limit) {
    if (limit < 0 || attributes.empty()) return targets;
    std::vector<MatchSpan> out;
    for (const auto& t : targets) {
        for (const auto& a : attributes) {
            if (span_gap(t, a) <= limit) {
                out.push_back(t);
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> entry_texts(const std::vector<MatchSpan>& spans) {
    std::vector<std::string> out;
    out.reserve(spans.size());
    for (const auto& s : spans) out.push_back(s.entry);
    return out;
}

struct Labeler {
    MatchIndex cwi, cwj, ewi, ewj, attr_union;
    long max_distance;

    Labeler(const lexicon::BiasLexicon& lex, long max_dist)
        : cwi(lex.concept_pair.concept_words_i),
          cwj(lex.concept_pair.concept_words_j),
          ewi(lex.concept_pair.exemplar_words_i),
          ewj(lex.concept_pair.exemplar_words_j),
          attr_union(merged_attributes(lex)),
          max_distance(max_dist) {}

    static lexicon::WordSet merged_attributes(const lexicon::BiasLexicon& lex) {
        // membership is gated by the union Aw_p + Aw_q; the attribute side
        // never matters for partitioning
        lexicon::WordSet u;
        u.label = "attribute_union";
        u.entries = lex.attribute_pair.attribute_words_p.entries;
        for (const auto& e : lex.attribute_pair.attribute_words_q.entries) u.entries.push_back(e);
        return u;
    }

    Statement label(const corpus::Sentence& sentence) const {
        Statement st;
        st.sentence = sentence;
        const auto attrs = attr_union.match(sentence.tokens);
        if (attrs.empty()) {
            st.label = PartitionLabel::Rest;
            return st;
        }
        const auto m_cwi = within_distance(cwi.match(sentence.tokens), attrs, max_distance);
        const auto m_cwj = within_distance(cwj.match(sentence.tokens), attrs, max_distance);
        const auto m_ewi = within_distance(ewi.match(sentence.tokens), attrs, max_distance);
        const auto m_ewj = within_distance(ewj.match(sentence.tokens), attrs, max_distance);

        std::vector<MatchSpan> winner;
        if (!m_cwi.empty() || !m_cwj.empty()) {
            // explicit beats implicit
            if (!m_cwi.empty() && !m_cwj.empty()) {
                st.label = PartitionLabel::Ambiguous;
                winner = m_cwi;
                winner.insert(winner.end(), m_cwj.begin(), m_cwj.end());
            } else if (!m_cwi.empty()) {
                st.label = PartitionLabel::ExplicitI;
                winner = m_cwi;
            } else {
                st.label = PartitionLabel::ExplicitJ;
                winner = m_cwj;
            }
        } else if (!m_ewi.empty() || !m_ewj.empty()) {
            if (!m_ewi.empty() && !m_ewj.empty()) {
                st.label = PartitionLabel::Ambiguous;
                winner = m_ewi;
                winner.insert(winner.end(), m_ewj.begin(), m_ewj.end());
            } else if (!m_ewi.empty()) {
                st.label = PartitionLabel::ImplicitI;
                winner = m_ewi;
            } else {
                st.label = PartitionLabel::ImplicitJ;
                winner = m_ewj;
            }
        } else {
            st.label = PartitionLabel::Rest;
            return st;
        }
        st.matched_target_words = entry_texts(winner);
        st.matched_attribute_words = entry_texts(attrs);
        return st;
    }
};

}  // namespace

const char* label_name(PartitionLabel label) {
    switch (label) {
        case PartitionLabel::ExplicitI: return "explicit_i";
        case PartitionLabel::ExplicitJ: return "explicit_j";
        case PartitionLabel::ImplicitI: return "implicit_i";
        case PartitionLabel::ImplicitJ: return "implicit_j";
        case PartitionLabel::Rest: return "rest";
        case PartitionLabel::Ambiguous: return "ambiguous";
    }
    return "?";
}

std::vector<MatchSpan> match_spans(const std::vector<std::string>& tokens,
                                   const lexicon::WordSet& word_set) {
    return MatchIndex(word_set).match(tokens);
}

CorpusPartition partition(const corpus::CorpusStream& corpus, const lexicon::BiasLexicon& lexicon,
                          const PartitionOptions& opts) {
    const Labeler labeler(lexicon, opts.max_token_distance);
    const std::size_t n = corpus.total_count();
    std::vector<Statement> labeled(n);
    parallel_for(n, opts.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) labeled[k] = labeler.label(corpus[k]);
    });

    CorpusPartition part;
    part.lexicon_id = lexicon.id;
    part.concept_i = lexicon.concept_pair.name_i;
    part.concept_j = lexicon.concept_pair.name_j;
    for (std::size_t k = 0; k < n; ++k) {
        Statement& st = labeled[k];
        switch (st.label) {
            case PartitionLabel::ExplicitI:
                ++part.counts.explicit_i;
                part.s_cwi.push_back(std::move(st));
                break;
            case PartitionLabel::ExplicitJ:
                ++part.counts.explicit_j;
                part.s_cwj.push_back(std::move(st));
                break;
            case PartitionLabel::ImplicitI:
                ++part.counts.implicit_i;
                part.s_ewi.push_back(std::move(st));
                break;
            case PartitionLabel::ImplicitJ:
                ++part.counts.implicit_j;
                part.s_ewj.push_back(std::move(st));
                break;
            case PartitionLabel::Ambiguous:
                ++part.counts.ambiguous;
                part.ambiguous.push_back(std::move(st));
                break;
            case PartitionLabel::Rest:
                ++part.counts.rest;
                part.rest.push(std::move(st.sentence));
                break;
        }
    }
    return part;
}

corpus::CorpusStream filter_explicit(const corpus::CorpusStream& corpus,
                                     const std::vector<lexicon::BiasLexicon>& lexicons,
                                     std::size_t* removed_count, const PartitionOptions& opts) {
    if (lexicons.empty()) throw Error("extract", "schema", "filter_explicit requires >= 1 lexicon");
    std::vector<Labeler> labelers;
    labelers.reserve(lexicons.size());
    for (const auto& lex : lexicons) labelers.emplace_back(lex, opts.max_token_distance);

    const std::size_t n = corpus.total_count();
    std::vector<char> is_explicit(n, 0);
    parallel_for(n, opts.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            for (const auto& labeler : labelers) {
                const PartitionLabel l = labeler.label(corpus[k]).label;
                if (l == PartitionLabel::ExplicitI || l == PartitionLabel::ExplicitJ) {
                    is_explicit[k] = 1;
                    break;
                }
            }
        }
    });

    corpus::CorpusStream out;
    std::size_t removed = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (is_explicit[k])
            ++removed;
        else
            out.push(corpus[k]);
    }
    if (removed_count) *removed_count = removed;
    return out;
}

}  // namespace biaslens::extract
