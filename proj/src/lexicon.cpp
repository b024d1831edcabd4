#include "biaslens/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "biaslens/corpus.hpp"
#include "biaslens/error.hpp"

namespace biaslens::lexicon {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("lexicon", code, msg);
}

constexpr std::size_t kMaxEntryTokens = 5;

std::unordered_set<std::string> entry_texts(const WordSet& ws) {
    std::unordered_set<std::string> out;
    for (const auto& e : ws.entries) out.insert(e.text);
    return out;
}

void check_disjoint(const WordSet& a, const WordSet& b, const std::string& field_a,
                    const std::string& field_b) {
    const auto in_b = entry_texts(b);
    for (const auto& e : a.entries) {
        if (in_b.count(e.text))
            fail("overlap", "word \"" + e.text + "\" appears in both " + field_a + " and " +
                                field_b);
    }
}

std::vector<std::string> get_string_array(const nlohmann::json& obj, const std::string& field,
                                          const std::string& path) {
    if (!obj.contains(field)) fail("schema", "missing field " + path);
    const auto& v = obj[field];
    if (!v.is_array()) fail("schema", path + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) fail("schema", path + " must contain only strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string get_string(const nlohmann::json& obj, const std::string& field,
                       const std::string& path) {
    if (!obj.contains(field) || !obj[field].is_string())
        fail("schema", "missing or non-string field " + path);
    return obj[field].get<std::string>();
}

}  // namespace

bool WordSet::contains(const std::string& canonical_text) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const WordEntry& e) { return e.text == canonical_text; });
}

WordSet make_word_set(const std::string& field, const std::vector<std::string>& raw_words) {
    if (raw_words.empty()) fail("empty_set", field + " empty");
    WordSet ws;
    ws.label = field;
    std::unordered_set<std::string> seen;
    for (const auto& raw : raw_words) {
        WordEntry entry;
        entry.tokens = corpus::tokenize(raw);
        if (entry.tokens.empty())
            fail("bad_entry", field + ": entry \"" + raw + "\" is empty after normalization");
        if (entry.tokens.size() > kMaxEntryTokens)
            fail("bad_entry", field + ": entry \"" + raw + "\" exceeds " +
                                  std::to_string(kMaxEntryTokens) + " tokens");
        entry.text = entry.tokens[0];
        for (std::size_t i = 1; i < entry.tokens.size(); ++i) entry.text += " " + entry.tokens[i];
        if (!seen.insert(entry.text).second)
            fail("bad_entry", field + ": duplicate entry \"" + entry.text + "\"");
        ws.entries.push_back(std::move(entry));
    }
    return ws;
}

BiasLexicon load_lexicon(const nlohmann::json& doc) {
    if (!doc.is_object()) fail("schema", "lexicon document must be a JSON object");
    BiasLexicon lex;
    lex.id = get_string(doc, "id", "id");

    if (!doc.contains("concept_pair") || !doc["concept_pair"].is_object())
        fail("schema", "missing object concept_pair");
    const auto& cp = doc["concept_pair"];
    lex.concept_pair.name_i = get_string(cp, "name_i", "concept_pair.name_i");
    lex.concept_pair.name_j = get_string(cp, "name_j", "concept_pair.name_j");
    lex.concept_pair.concept_words_i = make_word_set(
        "concept_words_i", get_string_array(cp, "concept_words_i", "concept_pair.concept_words_i"));
    lex.concept_pair.concept_words_j = make_word_set(
        "concept_words_j", get_string_array(cp, "concept_words_j", "concept_pair.concept_words_j"));
    lex.concept_pair.exemplar_words_i = make_word_set(
        "exemplar_words_i", get_string_array(cp, "exemplar_words_i", "concept_pair.exemplar_words_i"));
    lex.concept_pair.exemplar_words_j = make_word_set(
        "exemplar_words_j", get_string_array(cp, "exemplar_words_j", "concept_pair.exemplar_words_j"));
    if (cp.contains("allow_overlap")) {
        if (!cp["allow_overlap"].is_boolean())
            fail("schema", "concept_pair.allow_overlap must be a boolean");
        lex.concept_pair.allow_overlap = cp["allow_overlap"].get<bool>();
    }

    if (!doc.contains("attribute_pair") || !doc["attribute_pair"].is_object())
        fail("schema", "missing object attribute_pair");
    const auto& ap = doc["attribute_pair"];
    lex.attribute_pair.name_p = get_string(ap, "name_p", "attribute_pair.name_p");
    lex.attribute_pair.name_q = get_string(ap, "name_q", "attribute_pair.name_q");
    lex.attribute_pair.attribute_words_p = make_word_set(
        "attribute_words_p", get_string_array(ap, "attribute_words_p", "attribute_pair.attribute_words_p"));
    lex.attribute_pair.attribute_words_q = make_word_set(
        "attribute_words_q", get_string_array(ap, "attribute_words_q", "attribute_pair.attribute_words_q"));

    // an entry may not stimulate both sides
    check_disjoint(lex.concept_pair.concept_words_i, lex.concept_pair.concept_words_j,
                   "concept_words_i", "concept_words_j");
    check_disjoint(lex.concept_pair.exemplar_words_i, lex.concept_pair.exemplar_words_j,
                   "exemplar_words_i", "exemplar_words_j");
    check_disjoint(lex.attribute_pair.attribute_words_p, lex.attribute_pair.attribute_words_q,
                   "attribute_words_p", "attribute_words_q");

    if (!lex.concept_pair.allow_overlap) {
        check_disjoint(lex.concept_pair.concept_words_i, lex.concept_pair.exemplar_words_i,
                       "concept_words_i", "exemplar_words_i");
        check_disjoint(lex.concept_pair.concept_words_j, lex.concept_pair.exemplar_words_j,
                       "concept_words_j", "exemplar_words_j");
    }

    // no word may be both a target (concept/exemplar) word and an attribute word
    const WordSet* targets[] = {&lex.concept_pair.concept_words_i, &lex.concept_pair.concept_words_j,
                                &lex.concept_pair.exemplar_words_i, &lex.concept_pair.exemplar_words_j};
    const WordSet* attrs[] = {&lex.attribute_pair.attribute_words_p,
                              &lex.attribute_pair.attribute_words_q};
    for (const WordSet* t : targets)
        for (const WordSet* a : attrs) check_disjoint(*t, *a, t->label, a->label);

    return lex;
}

BiasLexicon load_lexicon_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open lexicon file: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) fail("schema", "invalid JSON in lexicon file: " + path.string());
    return load_lexicon(doc);
}

nlohmann::json to_json(const BiasLexicon& lex) {
    auto words = [](const WordSet& ws) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : ws.entries) arr.push_back(e.text);
        return arr;
    };
    return nlohmann::json{
        {"id", lex.id},
        {"concept_pair",
         {{"name_i", lex.concept_pair.name_i},
          {"name_j", lex.concept_pair.name_j},
          {"concept_words_i", words(lex.concept_pair.concept_words_i)},
          {"concept_words_j", words(lex.concept_pair.concept_words_j)},
          {"exemplar_words_i", words(lex.concept_pair.exemplar_words_i)},
          {"exemplar_words_j", words(lex.concept_pair.exemplar_words_j)},
          {"allow_overlap", lex.concept_pair.allow_overlap}}},
        {"attribute_pair",
         {{"name_p", lex.attribute_pair.name_p},
          {"name_q", lex.attribute_pair.name_q},
          {"attribute_words_p", words(lex.attribute_pair.attribute_words_p)},
          {"attribute_words_q", words(lex.attribute_pair.attribute_words_q)}}}};
}

std::vector<std::string> validate_cross_lexicon(const std::vector<BiasLexicon>& lexicons) {
    if (lexicons.empty()) fail("schema", "validate_cross_lexicon requires at least one lexicon");
    std::vector<std::string> warnings;
    // word -> set of "lexicon_id/field" users
    std::map<std::string, std::set<std::string>> users;
    auto collect = [&](const BiasLexicon& lex, const WordSet& ws) {
        for (const auto& e : ws.entries) users[e.text].insert(lex.id + "/" + ws.label);
    };
    for (const auto& lex : lexicons) {
        collect(lex, lex.concept_pair.concept_words_i);
        collect(lex, lex.concept_pair.concept_words_j);
        collect(lex, lex.concept_pair.exemplar_words_i);
        collect(lex, lex.concept_pair.exemplar_words_j);
        collect(lex, lex.attribute_pair.attribute_words_p);
        collect(lex, lex.attribute_pair.attribute_words_q);
    }
    for (const auto& [word, where] : users) {
        std::set<std::string> distinct_lexicons;
        for (const auto& u : where) distinct_lexicons.insert(u.substr(0, u.find('/')));
        if (distinct_lexicons.size() < 2) continue;
        std::string msg = "word \"" + word + "\" shared across lexicons:";
        for (const auto& u : where) msg += " " + u;
        warnings.push_back(std::move(msg));
    }
    return warnings;
}

}  // namespace biaslens::lexicon
