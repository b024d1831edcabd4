#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "biaslens/corpus.hpp"
#include "biaslens/lexicon.hpp"

namespace biaslens::extract {

// Every sentence receives exactly one label per lexicon. Precedence:
// concept (explicit) matches win over exemplar (implicit) matches; target
// matches from both sides of a pair make the sentence Ambiguous; without an
// attribute match a sentence is always Rest.
enum class PartitionLabel { ExplicitI, ExplicitJ, ImplicitI, ImplicitJ, Rest, Ambiguous };

const char* label_name(PartitionLabel label);  // "explicit_i", ...

struct MatchSpan {
    std::size_t begin;  // token index
    std::size_t end;    // exclusive
    std::string entry;  // canonical entry text
};

// All non-overlapping matches of word-set entries as consecutive token runs,
// scanning left to right and preferring the longest entry at each position.
// Matching is at token boundaries only.
std::vector<MatchSpan> match_spans(const std::vector<std::string>& tokens,
                                   const lexicon::WordSet& word_set);

struct Statement {
    corpus::Sentence sentence;
    std::vector<std::string> matched_target_words;
    std::vector<std::string> matched_attribute_words;
    PartitionLabel label = PartitionLabel::Rest;
};

struct PartitionCounts {
    std::size_t explicit_i = 0;
    std::size_t explicit_j = 0;
    std::size_t implicit_i = 0;
    std::size_t implicit_j = 0;
    std::size_t rest = 0;
    std::size_t ambiguous = 0;

    std::size_t total() const {
        return explicit_i + explicit_j + implicit_i + implicit_j + rest + ambiguous;
    }
};

struct CorpusPartition {
    std::string lexicon_id;
    std::string concept_i;  // lexicon concept names, carried for reports
    std::string concept_j;
    std::vector<Statement> s_cwi;  // explicit, concept i
    std::vector<Statement> s_cwj;  // explicit, concept j
    std::vector<Statement> s_ewi;  // implicit, exemplars of i
    std::vector<Statement> s_ewj;  // implicit, exemplars of j
    std::vector<Statement> ambiguous;
    corpus::CorpusStream rest;
    PartitionCounts counts;
};

struct PartitionOptions {
    // Maximum token gap allowed between a target match and an attribute
    // match for the pair to count; < 0 means unlimited.
    long max_token_distance = -1;
    int workers = 1;
};

CorpusPartition partition(const corpus::CorpusStream& corpus, const lexicon::BiasLexicon& lexicon,
                          const PartitionOptions& opts = {});

// Input minus every sentence labeled ExplicitI/ExplicitJ under ANY of the
// given lexicons; order preserved.
corpus::CorpusStream filter_explicit(const corpus::CorpusStream& corpus,
                                     const std::vector<lexicon::BiasLexicon>& lexicons,
                                     std::size_t* removed_count = nullptr,
                                     const PartitionOptions& opts = {});

}  // namespace biaslens::extract
