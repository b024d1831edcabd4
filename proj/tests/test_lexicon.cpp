#include <doctest.h>

#include "biaslens/error.hpp"
#include "biaslens/lexicon.hpp"
#include "support/synthetic.hpp"

using namespace biaslens;
using nlohmann::json;

namespace {

json valid_doc() { return synthetic::test_lexicon_json(); }

std::string error_message(const json& doc) {
    try {
        lexicon::load_lexicon(doc);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("load_lexicon accepts a valid config") {
    const auto lex = lexicon::load_lexicon(valid_doc());
    CHECK(lex.id == "insect_vs_flower");
    CHECK(lex.concept_pair.name_i == "insect");
    CHECK(lex.concept_pair.exemplar_words_j.contains("rose"));
    CHECK(lex.attribute_pair.attribute_words_p.size() == 2);
}

TEST_CASE("load_lexicon normalizes casing") {
    json doc = valid_doc();
    doc["concept_pair"]["exemplar_words_j"] = {"Rose", "TULIP", "lily", "Daisy", "ORCHID", "violet"};
    const auto lex = lexicon::load_lexicon(doc);
    CHECK(lex.concept_pair.exemplar_words_j.contains("rose"));
    CHECK(lex.concept_pair.exemplar_words_j.contains("tulip"));
    // casing does not change the result
    CHECK(lexicon::to_json(lex) == lexicon::to_json(lexicon::load_lexicon(valid_doc())));
}

TEST_CASE("load_lexicon round-trips through its own serialization") {
    const auto lex = lexicon::load_lexicon(valid_doc());
    const auto again = lexicon::load_lexicon(lexicon::to_json(lex));
    CHECK(lexicon::to_json(lex) == lexicon::to_json(again));
}

TEST_CASE("cross-side duplicates are rejected and named") {
    json doc = valid_doc();
    doc["concept_pair"]["exemplar_words_i"].push_back("rose");
    const std::string msg = error_message(doc);
    CHECK(msg.find("rose") != std::string::npos);
    CHECK(msg.find("overlap") != std::string::npos);
}

TEST_CASE("empty attribute set is rejected") {
    json doc = valid_doc();
    doc["attribute_pair"]["attribute_words_q"] = json::array();
    const std::string msg = error_message(doc);
    CHECK(msg.find("attribute_words_q") != std::string::npos);
    CHECK(msg.find("empty") != std::string::npos);
}

TEST_CASE("schema violations name the field") {
    json doc = valid_doc();
    doc["concept_pair"].erase("concept_words_i");
    CHECK(error_message(doc).find("concept_words_i") != std::string::npos);

    json doc2 = valid_doc();
    doc2["attribute_pair"]["attribute_words_p"] = "pleasant";
    CHECK(error_message(doc2).find("attribute_words_p") != std::string::npos);
}

TEST_CASE("entry constraints") {
    SUBCASE("duplicate entries within a set") {
        json doc = valid_doc();
        doc["concept_pair"]["concept_words_i"] = {"insect", "Insect"};
        CHECK(error_message(doc).find("duplicate") != std::string::npos);
    }
    SUBCASE("entry empty after normalization") {
        json doc = valid_doc();
        doc["concept_pair"]["concept_words_i"].push_back("!!!");
        CHECK(error_message(doc).find("empty after normalization") != std::string::npos);
    }
    SUBCASE("entries longer than five tokens") {
        json doc = valid_doc();
        doc["concept_pair"]["concept_words_i"].push_back("a b c d e f");
        CHECK(error_message(doc).find("exceeds") != std::string::npos);
    }
    SUBCASE("multiword entries are kept as token runs") {
        json doc = valid_doc();
        doc["concept_pair"]["exemplar_words_i"].push_back("fire ant");
        const auto lex = lexicon::load_lexicon(doc);
        CHECK(lex.concept_pair.exemplar_words_i.contains("fire ant"));
    }
}

TEST_CASE("target words may not double as attribute words") {
    json doc = valid_doc();
    doc["attribute_pair"]["attribute_words_p"].push_back("rose");
    const std::string msg = error_message(doc);
    CHECK(msg.find("rose") != std::string::npos);
}

TEST_CASE("same-side concept/exemplar overlap needs allow_overlap") {
    json doc = valid_doc();
    doc["concept_pair"]["exemplar_words_i"].push_back("insect");
    CHECK_THROWS_AS(lexicon::load_lexicon(doc), Error);
    doc["concept_pair"]["allow_overlap"] = true;
    CHECK_NOTHROW(lexicon::load_lexicon(doc));
}

TEST_CASE("validate_cross_lexicon") {
    const auto lex = lexicon::load_lexicon(valid_doc());
    SUBCASE("single lexicon -> no warnings") {
        CHECK(lexicon::validate_cross_lexicon({lex}).empty());
    }
    SUBCASE("shared attribute set is reported") {
        json doc = valid_doc();
        doc["id"] = "weapon_vs_instrument";
        doc["concept_pair"]["name_i"] = "weapon";
        doc["concept_pair"]["name_j"] = "instrument";
        doc["concept_pair"]["concept_words_i"] = {"weapon"};
        doc["concept_pair"]["concept_words_j"] = {"instrument"};
        doc["concept_pair"]["exemplar_words_i"] = {"sword", "rifle"};
        doc["concept_pair"]["exemplar_words_j"] = {"violin", "flute"};
        const auto other = lexicon::load_lexicon(doc);
        const auto warnings = lexicon::validate_cross_lexicon({lex, other});
        REQUIRE_FALSE(warnings.empty());
        bool mentions_pleasant = false;
        for (const auto& w : warnings)
            if (w.find("pleasant") != std::string::npos) mentions_pleasant = true;
        CHECK(mentions_pleasant);
    }
    SUBCASE("disjoint lexicons -> no warnings") {
        json doc = valid_doc();
        doc["id"] = "other";
        doc["concept_pair"]["concept_words_i"] = {"weapon"};
        doc["concept_pair"]["concept_words_j"] = {"instrument"};
        doc["concept_pair"]["exemplar_words_i"] = {"sword"};
        doc["concept_pair"]["exemplar_words_j"] = {"violin"};
        doc["attribute_pair"]["attribute_words_p"] = {"good"};
        doc["attribute_pair"]["attribute_words_q"] = {"bad"};
        const auto other = lexicon::load_lexicon(doc);
        CHECK(lexicon::validate_cross_lexicon({lex, other}).empty());
    }
}
