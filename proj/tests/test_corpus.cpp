#include <doctest.h>

#include <fstream>

#include "biaslens/corpus.hpp"
#include "biaslens/error.hpp"
#include "support/synthetic.hpp"

using namespace biaslens;

TEST_CASE("tokenize basics") {
    CHECK(corpus::tokenize("Rose is beautiful!") ==
          std::vector<std::string>{"rose", "is", "beautiful"});
    CHECK(corpus::tokenize("") == std::vector<std::string>{});
    // internal punctuation is preserved, only edges are stripped
    CHECK(corpus::tokenize("don't-stop") == std::vector<std::string>{"don't-stop"});
    CHECK(corpus::tokenize("(rose), [tulip]...") == std::vector<std::string>{"rose", "tulip"});
    CHECK(corpus::tokenize("  A\tB\nC ") == std::vector<std::string>{"a", "b", "c"});
    CHECK(corpus::tokenize("!!! ...") == std::vector<std::string>{});
}

TEST_CASE("tokenize is a fixed point under join") {
    const std::vector<std::string> samples = {
        "Rose is beautiful.", "don't-stop NOW", "a  b   c", "ants, bees; wasps!",
    };
    for (const auto& s : samples) {
        const auto tokens = corpus::tokenize(s);
        std::string joined;
        for (const auto& t : tokens) joined += t + " ";
        CHECK(corpus::tokenize(joined) == tokens);
    }
}

TEST_CASE("sentence splitting") {
    CHECK(corpus::split_sentences("Rose is beautiful. Ants bite.") ==
          std::vector<std::string>{"Rose is beautiful.", "Ants bite."});
    CHECK(corpus::split_sentences("flowers are nice") ==
          std::vector<std::string>{"flowers are nice"});
    CHECK(corpus::split_sentences("What?! Yes.") == std::vector<std::string>{"What?!", "Yes."});
    // newline is a hard boundary even without a terminator
    CHECK(corpus::split_sentences("one two\nthree four") ==
          std::vector<std::string>{"one two", "three four"});
    CHECK(corpus::split_sentences("") == std::vector<std::string>{});
    // terminator not followed by whitespace does not split
    CHECK(corpus::split_sentences("pi is 3.14 ok") ==
          std::vector<std::string>{"pi is 3.14 ok"});
}

TEST_CASE("ingest_plaintext") {
    synthetic::TempDir tmp("plain");
    SUBCASE("two sentences") {
        std::ofstream(tmp.file("a.txt")) << "Rose is beautiful. Ants bite.\n";
        const auto stream = corpus::ingest_plaintext(tmp.file("a.txt"), {.source_tag = "a"});
        REQUIRE(stream.total_count() == 2);
        CHECK(stream[0].tokens == std::vector<std::string>{"rose", "is", "beautiful"});
        CHECK(stream[1].tokens == std::vector<std::string>{"ants", "bite"});
        CHECK(stream[0].id == "a:0");
        CHECK(stream[1].id == "a:1");
        CHECK_FALSE(stream[0].timestamp.has_value());
    }
    SUBCASE("empty file") {
        std::ofstream(tmp.file("empty.txt")) << "";
        CHECK(corpus::ingest_plaintext(tmp.file("empty.txt")).total_count() == 0);
    }
    SUBCASE("unterminated line") {
        std::ofstream(tmp.file("u.txt")) << "flowers are nice";
        CHECK(corpus::ingest_plaintext(tmp.file("u.txt")).total_count() == 1);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(corpus::ingest_plaintext(tmp.file("nope.txt")), Error);
    }
    SUBCASE("invalid utf8 is fatal unless lenient") {
        std::ofstream(tmp.file("bad.txt"), std::ios::binary) << "ok line\n\xff\xfe broken\nlast.\n";
        CHECK_THROWS_AS(corpus::ingest_plaintext(tmp.file("bad.txt")), Error);
        corpus::IngestStats stats;
        const auto stream =
            corpus::ingest_plaintext(tmp.file("bad.txt"), {.lenient = true}, &stats);
        CHECK(stream.total_count() == 2);
        CHECK(stats.skipped_invalid_utf8 == 1);
    }
    SUBCASE("determinism: same file ingested twice") {
        std::ofstream(tmp.file("d.txt")) << "A b. C d!\nE f?\n";
        const auto s1 = corpus::ingest_plaintext(tmp.file("d.txt"));
        const auto s2 = corpus::ingest_plaintext(tmp.file("d.txt"));
        REQUIRE(s1.total_count() == s2.total_count());
        for (std::size_t k = 0; k < s1.total_count(); ++k) {
            CHECK(s1[k].id == s2[k].id);
            CHECK(s1[k].text == s2[k].text);
            CHECK(s1[k].tokens == s2[k].tokens);
        }
    }
}

TEST_CASE("ingest_jsonl") {
    synthetic::TempDir tmp("jsonl");
    SUBCASE("timestamped record") {
        std::ofstream(tmp.file("a.jsonl"))
            << R"({"text":"Rose is beautiful","timestamp":"2015-03-14T00:00:00Z"})" << "\n";
        const auto stream = corpus::ingest_jsonl(tmp.file("a.jsonl"));
        REQUIRE(stream.total_count() == 1);
        REQUIRE(stream[0].timestamp.has_value());
        CHECK(corpus::month_key(*stream[0].timestamp) == "2015-03");
    }
    SUBCASE("record with two sentences shares the timestamp") {
        std::ofstream(tmp.file("b.jsonl"))
            << R"({"text":"One here. Two there.","timestamp":"2016-01-02"})" << "\n";
        const auto stream = corpus::ingest_jsonl(tmp.file("b.jsonl"));
        REQUIRE(stream.total_count() == 2);
        CHECK(stream[0].timestamp == stream[1].timestamp);
        CHECK(corpus::month_key(*stream[0].timestamp) == "2016-01");
    }
    SUBCASE("missing timestamp stays absent") {
        std::ofstream(tmp.file("c.jsonl")) << R"({"text":"no time"})" << "\n";
        corpus::IngestStats stats;
        const auto stream = corpus::ingest_jsonl(tmp.file("c.jsonl"), {}, &stats);
        REQUIRE(stream.total_count() == 1);
        CHECK_FALSE(stream[0].timestamp.has_value());
        CHECK(stats.missing_timestamps == 1);
    }
    SUBCASE("unparseable timestamp counted, not fatal") {
        std::ofstream(tmp.file("d.jsonl"))
            << R"({"text":"odd time","timestamp":"last tuesday"})" << "\n";
        corpus::IngestStats stats;
        const auto stream = corpus::ingest_jsonl(tmp.file("d.jsonl"), {}, &stats);
        REQUIRE(stream.total_count() == 1);
        CHECK_FALSE(stream[0].timestamp.has_value());
        CHECK(stats.unparseable_timestamps == 1);
    }
    SUBCASE("malformed line fatal unless lenient") {
        std::ofstream(tmp.file("e.jsonl")) << "{\"text\":\"fine\"}\nnot json\n";
        CHECK_THROWS_AS(corpus::ingest_jsonl(tmp.file("e.jsonl")), Error);
        corpus::IngestStats stats;
        const auto stream = corpus::ingest_jsonl(tmp.file("e.jsonl"), {.lenient = true}, &stats);
        CHECK(stream.total_count() == 1);
        CHECK(stats.skipped_bad_json == 1);
    }
    SUBCASE("record id is honored") {
        std::ofstream(tmp.file("f.jsonl")) << R"({"text":"named","id":"rec-7"})" << "\n";
        const auto stream = corpus::ingest_jsonl(tmp.file("f.jsonl"));
        REQUIRE(stream.total_count() == 1);
        CHECK(stream[0].id == "rec-7#0");
    }
}

TEST_CASE("timestamp parsing") {
    CHECK(corpus::parse_timestamp("2015-03-14T00:00:00Z").has_value());
    CHECK(corpus::format_timestamp(*corpus::parse_timestamp("2015-03-14T06:30:15Z")) ==
          "2015-03-14T06:30:15Z");
    // date-only means midnight UTC
    CHECK(*corpus::parse_timestamp("2015-03-14") ==
          *corpus::parse_timestamp("2015-03-14T00:00:00Z"));
    // offsets normalize to UTC
    CHECK(*corpus::parse_timestamp("2015-03-14T02:00:00+02:00") ==
          *corpus::parse_timestamp("2015-03-14T00:00:00Z"));
    CHECK(corpus::month_key(*corpus::parse_timestamp("2015-12-31T23:59:59Z")) == "2015-12");
    CHECK(corpus::month_key(*corpus::parse_timestamp("2016-01-01T00:00:00Z")) == "2016-01");
    CHECK_FALSE(corpus::parse_timestamp("not a time").has_value());
    CHECK_FALSE(corpus::parse_timestamp("2015-13-01").has_value());
    CHECK_FALSE(corpus::parse_timestamp("2015-02-30").has_value());
    CHECK(corpus::parse_timestamp("2016-02-29").has_value());  // leap year
}
