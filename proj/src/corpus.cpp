#include "biaslens/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "biaslens/error.hpp"
#include "biaslens/text.hpp"

namespace biaslens::corpus {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("corpus", code, msg);
}

// days since 1970-01-01 for a civil date (proleptic Gregorian)
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool is_leap(long long y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(long long y, unsigned m) {
    static const unsigned t[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return t[m - 1];
}

bool parse_uint(std::string_view s, std::size_t& i, std::size_t digits, long long& out) {
    if (i + digits > s.size()) return false;
    long long v = 0;
    for (std::size_t k = 0; k < digits; ++k) {
        const char c = s[i + k];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    i += digits;
    out = v;
    return true;
}

struct LineRange {
    std::size_t begin;  // byte offsets into the file buffer
    std::size_t end;
};

std::vector<LineRange> split_lines(std::string_view buf) {
    std::vector<LineRange> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        if (buf[i] == '\n') {
            std::size_t end = i;
            if (end > start && buf[end - 1] == '\r') --end;
            lines.push_back({start, end});
            start = i + 1;
        }
    }
    if (start < buf.size()) {
        std::size_t end = buf.size();
        if (end > start && buf[end - 1] == '\r') --end;
        lines.push_back({start, end});
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io", "cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view txt) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    auto flush = [&]() {
        if (current.empty()) return;
        // strip leading/trailing punctuation code points, keep internal ones
        std::string_view v(current);
        std::size_t b = 0;
        while (b < v.size()) {
            std::size_t j = b;
            if (!text::is_strip_punct(text::decode_utf8(v, j))) break;
            b = j;
        }
        std::size_t last_end = b;
        std::size_t scan = b;
        while (scan < v.size()) {
            if (!text::is_strip_punct(text::decode_utf8(v, scan))) last_end = scan;
        }
        if (last_end > b) tokens.emplace_back(v.substr(b, last_end - b));
        current.clear();
    };
    while (i < txt.size()) {
        const std::size_t start = i;
        const char32_t c = text::decode_utf8(txt, i);
        if (text::is_space(c)) {
            flush();
        } else {
            for (std::size_t k = start; k < i; ++k) {
                char ch = txt[k];
                if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
                current.push_back(ch);
            }
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> split_sentences(std::string_view txt) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&]() {
        std::string t = text::trim(current);
        if (!t.empty()) out.push_back(std::move(t));
        current.clear();
    };
    std::size_t i = 0;
    while (i < txt.size()) {
        const std::size_t start = i;
        const char32_t c = text::decode_utf8(txt, i);
        if (c == U'\n') {
            flush();
            continue;
        }
        current.append(txt.substr(start, i - start));
        if (text::is_sentence_terminator(c)) {
            // peek: terminator followed by whitespace or end of input
            if (i >= txt.size()) {
                flush();
            } else {
                std::size_t j = i;
                const char32_t next = text::decode_utf8(txt, j);
                if (text::is_space(next) || next == U'\n') flush();
            }
        }
    }
    flush();
    return out;
}

CorpusStream ingest_plaintext(const std::filesystem::path& path, const IngestOptions& opts,
                              IngestStats* stats) {
    const std::string buf = read_file(path);
    IngestStats local;
    std::vector<Sentence> sentences;
    std::size_t ordinal = 0;
    for (const LineRange& lr : split_lines(buf)) {
        std::string_view line(buf.data() + lr.begin, lr.end - lr.begin);
        if (auto bad = text::first_invalid_utf8(line)) {
            const std::size_t offset = lr.begin + *bad;
            if (!opts.lenient)
                fail("utf8", "invalid UTF-8 at byte offset " + std::to_string(offset) + " in " +
                                 path.string());
            ++local.skipped_invalid_utf8;
            continue;
        }
        ++local.records;
        for (std::string& s : split_sentences(line)) {
            Sentence sent;
            sent.id = opts.source_tag + ":" + std::to_string(ordinal++);
            sent.tokens = tokenize(s);
            sent.text = std::move(s);
            sent.source = opts.source_tag;
            sentences.push_back(std::move(sent));
        }
    }
    local.sentences = sentences.size();
    if (stats) *stats = local;
    return CorpusStream(std::move(sentences));
}

CorpusStream ingest_jsonl(const std::filesystem::path& path, const IngestOptions& opts,
                          IngestStats* stats) {
    const std::string buf = read_file(path);
    IngestStats local;
    std::vector<Sentence> sentences;
    std::unordered_set<std::string> seen_ids;
    std::size_t rec_no = 0;
    std::size_t line_no = 0;
    for (const LineRange& lr : split_lines(buf)) {
        ++line_no;
        std::string_view line(buf.data() + lr.begin, lr.end - lr.begin);
        if (text::trim(line).empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("text") ||
            !rec["text"].is_string()) {
            if (!opts.lenient)
                fail("bad_json", "malformed JSONL record at line " + std::to_string(line_no) +
                                     " in " + path.string());
            ++local.skipped_bad_json;
            continue;
        }
        const std::string txt = rec["text"].get<std::string>();
        if (auto bad = text::first_invalid_utf8(txt)) {
            if (!opts.lenient)
                fail("utf8", "invalid UTF-8 in record at line " + std::to_string(line_no) +
                                 " (byte " + std::to_string(*bad) + ") in " + path.string());
            ++local.skipped_invalid_utf8;
            continue;
        }
        std::optional<Timestamp> ts;
        if (rec.contains("timestamp") && !rec["timestamp"].is_null()) {
            if (rec["timestamp"].is_string())
                ts = parse_timestamp(rec["timestamp"].get<std::string>());
            if (!ts) ++local.unparseable_timestamps;
        } else {
            ++local.missing_timestamps;
        }
        std::string base_id;
        if (rec.contains("id") && rec["id"].is_string())
            base_id = rec["id"].get<std::string>();
        else
            base_id = opts.source_tag + ":" + std::to_string(rec_no);
        ++local.records;
        std::size_t k = 0;
        bool duplicate = false;
        std::vector<Sentence> record_sentences;
        for (std::string& s : split_sentences(txt)) {
            Sentence sent;
            sent.id = base_id + "#" + std::to_string(k++);
            if (!seen_ids.insert(sent.id).second) {
                duplicate = true;
                break;
            }
            sent.tokens = tokenize(s);
            sent.text = std::move(s);
            sent.timestamp = ts;
            sent.source = opts.source_tag;
            record_sentences.push_back(std::move(sent));
        }
        if (duplicate) {
            if (!opts.lenient)
                fail("duplicate_id", "duplicate record id \"" + base_id + "\" at line " +
                                         std::to_string(line_no) + " in " + path.string());
            ++local.skipped_duplicate_id;
            continue;
        }
        for (Sentence& s : record_sentences) sentences.push_back(std::move(s));
        ++rec_no;
    }
    local.sentences = sentences.size();
    if (stats) *stats = local;
    return CorpusStream(std::move(sentences));
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    std::size_t i = 0;
    long long year, month, day;
    if (!parse_uint(s, i, 4, year)) return std::nullopt;
    if (i >= s.size() || s[i] != '-') return std::nullopt;
    ++i;
    if (!parse_uint(s, i, 2, month)) return std::nullopt;
    if (i >= s.size() || s[i] != '-') return std::nullopt;
    ++i;
    if (!parse_uint(s, i, 2, day)) return std::nullopt;
    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) return std::nullopt;

    long long hour = 0, minute = 0, second = 0;
    long long offset_sec = 0;
    if (i < s.size()) {
        if (s[i] != 'T' && s[i] != 't' && s[i] != ' ') return std::nullopt;
        ++i;
        if (!parse_uint(s, i, 2, hour)) return std::nullopt;
        if (i >= s.size() || s[i] != ':') return std::nullopt;
        ++i;
        if (!parse_uint(s, i, 2, minute)) return std::nullopt;
        if (i < s.size() && s[i] == ':') {
            ++i;
            if (!parse_uint(s, i, 2, second)) return std::nullopt;
            if (i < s.size() && s[i] == '.') {
                ++i;  // fractional seconds: accepted, truncated
                if (i >= s.size() || s[i] < '0' || s[i] > '9') return std::nullopt;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
            }
        }
        if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
        if (second == 60) second = 59;  // leap second clamp
        if (i < s.size()) {
            const char z = s[i];
            if (z == 'Z' || z == 'z') {
                ++i;
            } else if (z == '+' || z == '-') {
                ++i;
                long long oh, om = 0;
                if (!parse_uint(s, i, 2, oh)) return std::nullopt;
                if (i < s.size() && s[i] == ':') ++i;
                if (i < s.size()) {
                    if (!parse_uint(s, i, 2, om)) return std::nullopt;
                }
                if (oh > 23 || om > 59) return std::nullopt;
                offset_sec = (oh * 3600 + om * 60) * (z == '+' ? 1 : -1);
            } else {
                return std::nullopt;
            }
        }
    }
    if (i != s.size()) return std::nullopt;
    const long long days = days_from_civil(year, static_cast<unsigned>(month),
                                           static_cast<unsigned>(day));
    const long long secs = days * 86400 + hour * 3600 + minute * 60 + second - offset_sec;
    return Timestamp(std::chrono::seconds(secs));
}

std::string format_timestamp(Timestamp t) {
    const long long total = t.time_since_epoch().count();
    long long days = total / 86400;
    long long rem = total % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    long long y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d, rem / 3600,
                  (rem % 3600) / 60, rem % 60);
    return buf;
}

std::string month_key(Timestamp t) {
    const long long total = t.time_since_epoch().count();
    long long days = total / 86400;
    if (total % 86400 < 0) --days;
    long long y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u", y, m);
    return buf;
}

}  // namespace biaslens::corpus
