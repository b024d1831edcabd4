#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace biaslens::lexicon {

// One lexicon entry: a run of 1..5 normalized (lowercase, punctuation-
// trimmed) tokens. `text` is the canonical space-joined form used for
// display, dedup and set membership.
struct WordEntry {
    std::string text;
    std::vector<std::string> tokens;

    bool operator==(const WordEntry& other) const { return text == other.text; }
};

struct WordSet {
    std::string label;
    std::vector<WordEntry> entries;  // insertion order preserved, no duplicates

    bool contains(const std::string& canonical_text) const;
    std::size_t size() const { return entries.size(); }
};

struct ConceptPair {
    std::string name_i;
    std::string name_j;
    WordSet concept_words_i;
    WordSet concept_words_j;
    WordSet exemplar_words_i;
    WordSet exemplar_words_j;
    bool allow_overlap = false;  // concept/exemplar overlap on the same side
};

struct AttributePair {
    std::string name_p;
    std::string name_q;
    WordSet attribute_words_p;
    WordSet attribute_words_q;
};

// Immutable after load; safe to share across threads.
struct BiasLexicon {
    std::string id;
    ConceptPair concept_pair;
    AttributePair attribute_pair;
};

// Normalizes and validates raw strings into a WordSet. `field` names the
// config field in error messages. Errors: lexicon/empty_set, lexicon/bad_entry,
// lexicon/duplicate.
WordSet make_word_set(const std::string& field, const std::vector<std::string>& raw_words);

// Validates the document against the lexicon config schema. Every error
// names the offending field and, where applicable, the offending word.
BiasLexicon load_lexicon(const nlohmann::json& doc);
BiasLexicon load_lexicon_file(const std::filesystem::path& path);

nlohmann::json to_json(const BiasLexicon& lex);

// Audit pass over several lexicons: reports (does not reject) words shared
// across lexicons.
std::vector<std::string> validate_cross_lexicon(const std::vector<BiasLexicon>& lexicons);

}  // namespace biaslens::lexicon
