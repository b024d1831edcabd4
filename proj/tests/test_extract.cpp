#include <doctest.h>

#include "biaslens/extract.hpp"
#include "biaslens/rng.hpp"
#include "support/synthetic.hpp"

using namespace biaslens;

namespace {

corpus::CorpusStream one_liner(const std::string& text) {
    return synthetic::stream_from_lines({text});
}

extract::PartitionLabel label_of(const std::string& text, const lexicon::BiasLexicon& lex) {
    const auto part = extract::partition(one_liner(text), lex);
    if (!part.s_cwi.empty()) return extract::PartitionLabel::ExplicitI;
    if (!part.s_cwj.empty()) return extract::PartitionLabel::ExplicitJ;
    if (!part.s_ewi.empty()) return extract::PartitionLabel::ImplicitI;
    if (!part.s_ewj.empty()) return extract::PartitionLabel::ImplicitJ;
    if (!part.ambiguous.empty()) return extract::PartitionLabel::Ambiguous;
    return extract::PartitionLabel::Rest;
}

lexicon::BiasLexicon swapped_sides(const lexicon::BiasLexicon& lex) {
    auto doc = lexicon::to_json(lex);
    std::swap(doc["concept_pair"]["name_i"], doc["concept_pair"]["name_j"]);
    std::swap(doc["concept_pair"]["concept_words_i"], doc["concept_pair"]["concept_words_j"]);
    std::swap(doc["concept_pair"]["exemplar_words_i"], doc["concept_pair"]["exemplar_words_j"]);
    return lexicon::load_lexicon(doc);
}

}  // namespace

TEST_CASE("match_spans") {
    const auto set = lexicon::make_word_set("s", {"rose", "new york", "art"});
    SUBCASE("single word") {
        const auto spans = extract::match_spans({"rose", "is", "beautiful"}, set);
        REQUIRE(spans.size() == 1);
        CHECK(spans[0].entry == "rose");
        CHECK(spans[0].begin == 0);
        CHECK(spans[0].end == 1);
    }
    SUBCASE("multiword run") {
        const auto spans = extract::match_spans({"in", "new", "york", "city"}, set);
        REQUIRE(spans.size() == 1);
        CHECK(spans[0].entry == "new york");
        CHECK(spans[0].begin == 1);
        CHECK(spans[0].end == 3);
    }
    SUBCASE("token boundaries only") {
        CHECK(extract::match_spans({"party"}, set).empty());
    }
    SUBCASE("longest entry wins at a position") {
        const auto longset = lexicon::make_word_set("s", {"new", "new york"});
        const auto spans = extract::match_spans({"new", "york"}, longset);
        REQUIRE(spans.size() == 1);
        CHECK(spans[0].entry == "new york");
    }
    SUBCASE("non-overlapping matches") {
        const auto spans = extract::match_spans({"rose", "rose", "art"}, set);
        REQUIRE(spans.size() == 3);
    }
}

TEST_CASE("partition labels follow the declared rules") {
    const auto lex = synthetic::test_lexicon();
    // concept + attribute -> explicit
    CHECK(label_of("the flower is not pleasant", lex) == extract::PartitionLabel::ExplicitJ);
    CHECK(label_of("insects are unpleasant pests", lex) == extract::PartitionLabel::ExplicitI);
    // exemplar + attribute -> implicit
    CHECK(label_of("rose is pleasant", lex) == extract::PartitionLabel::ImplicitJ);
    CHECK(label_of("the spider is unpleasant", lex) == extract::PartitionLabel::ImplicitI);
    // no attribute word -> rest, even with targets present
    CHECK(label_of("ants crawl on the rose", lex) == extract::PartitionLabel::Rest);
    // both concepts -> ambiguous
    CHECK(label_of("the flower and the insect are pleasant", lex) ==
          extract::PartitionLabel::Ambiguous);
    // both exemplar sides -> ambiguous
    CHECK(label_of("the ant sits on the rose which is pleasant", lex) ==
          extract::PartitionLabel::Ambiguous);
    // explicit beats implicit: concept + exemplar + attribute
    CHECK(label_of("the flower like this rose is pleasant", lex) ==
          extract::PartitionLabel::ExplicitJ);
    // explicit precedence also silences exemplar-side ambiguity
    CHECK(label_of("the flower beats the ant and the rose when pleasant", lex) ==
          extract::PartitionLabel::ExplicitJ);
    CHECK(label_of("nothing relevant here", lex) == extract::PartitionLabel::Rest);
}

TEST_CASE("partition records matches and counts") {
    const auto lex = synthetic::test_lexicon();
    const auto part = extract::partition(one_liner("rose is pleasant"), lex);
    REQUIRE(part.counts.implicit_j == 1);
    REQUIRE(part.s_ewj.size() == 1);
    CHECK(part.s_ewj[0].matched_target_words == std::vector<std::string>{"rose"});
    CHECK(part.s_ewj[0].matched_attribute_words == std::vector<std::string>{"pleasant"});
    CHECK(part.lexicon_id == "insect_vs_flower");
    CHECK(part.concept_i == "insect");
}

TEST_CASE("partition completeness on random synthetic corpora") {
    const auto lex = synthetic::test_lexicon();
    synthetic::PlantSpec spec;
    spec.n_explicit_i = 40;
    spec.n_explicit_j = 35;
    spec.n_implicit_i = 50;
    spec.n_implicit_j = 45;
    spec.n_filler = 80;
    const auto stream = synthetic::stream_from_lines(synthetic::planted_sentences(spec, 7));
    const auto part = extract::partition(stream, lex);
    CHECK(part.counts.total() == stream.total_count());
    CHECK(part.counts.explicit_i == 40);
    CHECK(part.counts.explicit_j == 35);
    CHECK(part.counts.implicit_i == 50);
    CHECK(part.counts.implicit_j == 45);
    CHECK(part.counts.rest == 80);
    CHECK(part.counts.ambiguous == 0);
    // every sentence appears exactly once across the label classes
    std::size_t listed = part.s_cwi.size() + part.s_cwj.size() + part.s_ewi.size() +
                         part.s_ewj.size() + part.ambiguous.size() + part.rest.total_count();
    CHECK(listed == stream.total_count());
}

TEST_CASE("partition is deterministic and worker-count independent") {
    const auto lex = synthetic::test_lexicon();
    synthetic::PlantSpec spec;
    spec.n_explicit_i = 20;
    spec.n_explicit_j = 20;
    spec.n_implicit_i = 20;
    spec.n_implicit_j = 20;
    spec.n_filler = 40;
    const auto stream = synthetic::stream_from_lines(synthetic::planted_sentences(spec, 11));
    const auto p1 = extract::partition(stream, lex, {.workers = 1});
    const auto p8 = extract::partition(stream, lex, {.workers = 8});
    REQUIRE(p1.s_ewi.size() == p8.s_ewi.size());
    for (std::size_t k = 0; k < p1.s_ewi.size(); ++k)
        CHECK(p1.s_ewi[k].sentence.id == p8.s_ewi[k].sentence.id);
    CHECK(p1.counts.total() == p8.counts.total());
}

TEST_CASE("side symmetry: swapping i and j swaps the collections") {
    const auto lex = synthetic::test_lexicon();
    const auto swapped = swapped_sides(lex);
    synthetic::PlantSpec spec;
    spec.n_explicit_i = 15;
    spec.n_explicit_j = 10;
    spec.n_implicit_i = 12;
    spec.n_implicit_j = 18;
    spec.n_filler = 30;
    const auto stream = synthetic::stream_from_lines(synthetic::planted_sentences(spec, 23));
    const auto a = extract::partition(stream, lex);
    const auto b = extract::partition(stream, swapped);
    REQUIRE(a.s_cwi.size() == b.s_cwj.size());
    REQUIRE(a.s_ewi.size() == b.s_ewj.size());
    for (std::size_t k = 0; k < a.s_cwi.size(); ++k)
        CHECK(a.s_cwi[k].sentence.id == b.s_cwj[k].sentence.id);
    for (std::size_t k = 0; k < a.s_ewj.size(); ++k)
        CHECK(a.s_ewj[k].sentence.id == b.s_ewi[k].sentence.id);
    CHECK(a.counts.ambiguous == b.counts.ambiguous);
    CHECK(a.counts.rest == b.counts.rest);
}

TEST_CASE("monotonicity: enlarging an attribute set never shrinks collections") {
    const auto lex = synthetic::test_lexicon();
    auto doc = lexicon::to_json(lex);
    doc["attribute_pair"]["attribute_words_p"].push_back("perhaps");
    const auto larger = lexicon::load_lexicon(doc);

    synthetic::PlantSpec spec;
    spec.n_explicit_i = 25;
    spec.n_explicit_j = 25;
    spec.n_implicit_i = 25;
    spec.n_implicit_j = 25;
    spec.n_filler = 50;
    const auto stream = synthetic::stream_from_lines(synthetic::planted_sentences(spec, 31));
    const auto base = extract::partition(stream, lex);
    const auto grown = extract::partition(stream, larger);
    CHECK(grown.counts.explicit_i >= base.counts.explicit_i);
    CHECK(grown.counts.explicit_j >= base.counts.explicit_j);
    CHECK(grown.counts.implicit_i >= base.counts.implicit_i);
    CHECK(grown.counts.implicit_j >= base.counts.implicit_j);
    CHECK(grown.counts.rest <= base.counts.rest);
}

TEST_CASE("max token distance constrains matches") {
    const auto lex = synthetic::test_lexicon();
    const std::string text = "rose one two three four five six seven pleasant";
    CHECK(label_of(text, lex) == extract::PartitionLabel::ImplicitJ);
    const auto near = extract::partition(one_liner(text), lex, {.max_token_distance = 3});
    CHECK(near.counts.implicit_j == 0);
    CHECK(near.counts.rest == 1);
    const auto far = extract::partition(one_liner(text), lex, {.max_token_distance = 10});
    CHECK(far.counts.implicit_j == 1);
}

TEST_CASE("filter_explicit") {
    const auto lex = synthetic::test_lexicon();
    SUBCASE("only explicit statements are removed") {
        const auto stream = synthetic::stream_from_lines({
            "the flower is not pleasant today.",  // explicit
            "rose is pleasant.",                  // implicit, survives
            "nothing to see.",                    // rest, survives
        });
        std::size_t removed = 0;
        const auto filtered = extract::filter_explicit(stream, {lex}, &removed);
        CHECK(removed == 1);
        REQUIRE(filtered.total_count() == 2);
        CHECK(filtered[0].text == "rose is pleasant.");
        // re-partitioning the filtered corpus finds no explicit statements
        const auto repart = extract::partition(filtered, lex);
        CHECK(repart.counts.explicit_i == 0);
        CHECK(repart.counts.explicit_j == 0);
    }
    SUBCASE("corpus without concept words is untouched") {
        const auto stream = synthetic::stream_from_lines({"rose is pleasant.", "plain filler."});
        std::size_t removed = 0;
        const auto filtered = extract::filter_explicit(stream, {lex}, &removed);
        CHECK(removed == 0);
        CHECK(filtered.total_count() == 2);
    }
    SUBCASE("empty corpus") {
        std::size_t removed = 1;
        const auto filtered = extract::filter_explicit(corpus::CorpusStream(), {lex}, &removed);
        CHECK(removed == 0);
        CHECK(filtered.total_count() == 0);
    }
    SUBCASE("any lexicon can trigger removal") {
        auto doc = synthetic::test_lexicon_json();
        doc["id"] = "second";
        doc["concept_pair"]["concept_words_i"] = {"weapon"};
        doc["concept_pair"]["concept_words_j"] = {"instrument"};
        doc["concept_pair"]["exemplar_words_i"] = {"sword"};
        doc["concept_pair"]["exemplar_words_j"] = {"violin"};
        const auto second = lexicon::load_lexicon(doc);
        const auto stream = synthetic::stream_from_lines({
            "the weapon is unpleasant.",   // explicit under second only
            "the flower is pleasant.",     // explicit under first only
            "plain filler.",
        });
        std::size_t removed = 0;
        const auto filtered = extract::filter_explicit(stream, {lex, second}, &removed);
        CHECK(removed == 2);
        CHECK(filtered.total_count() == 1);
    }
}

TEST_CASE("filtered corpus re-partitioned under a planted corpus has no explicit statements") {
    const auto lex = synthetic::test_lexicon();
    synthetic::PlantSpec spec;
    spec.n_explicit_i = 30;
    spec.n_explicit_j = 30;
    spec.n_implicit_i = 30;
    spec.n_implicit_j = 30;
    spec.n_filler = 60;
    const auto stream = synthetic::stream_from_lines(synthetic::planted_sentences(spec, 41));
    std::size_t removed = 0;
    const auto filtered = extract::filter_explicit(stream, {lex}, &removed);
    CHECK(removed == 60);
    const auto repart = extract::partition(filtered, lex);
    CHECK(repart.counts.explicit_i == 0);
    CHECK(repart.counts.explicit_j == 0);
    CHECK(repart.counts.implicit_i == 30);
    CHECK(repart.counts.implicit_j == 30);
}
