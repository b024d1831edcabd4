#include "biaslens/sentiment.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "biaslens/corpus.hpp"
#include "biaslens/error.hpp"
#include "biaslens/hash.hpp"
#include "biaslens/parallel.hpp"

namespace biaslens::sentiment {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("sentiment", code, msg);
}

constexpr std::size_t kNegationWindow = 3;

int sign(long v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Counts hits of `words`, flipping any hit that begins within the negation
// window after a negator span.
long polarity_sum(const std::vector<std::string>& tokens, const lexicon::WordSet& words,
                  const std::vector<extract::MatchSpan>& negators, long unit) {
    long total = 0;
    for (const auto& hit : extract::match_spans(tokens, words)) {
        std::size_t negations = 0;
        for (const auto& neg : negators) {
            if (neg.end <= hit.begin && hit.begin - (neg.end - 1) <= kNegationWindow) ++negations;
        }
        total += (negations % 2 == 0) ? unit : -unit;
    }
    return total;
}

}  // namespace

lexicon::WordSet SentimentLexicon::default_negators() {
    return lexicon::make_word_set("negators", {"not", "no", "never", "n't", "hardly"});
}

SentimentLexicon SentimentLexicon::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("bad_lexicon", "cannot open sentiment lexicon: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        fail("bad_lexicon", "invalid JSON in sentiment lexicon: " + path.string());
    auto words = [&](const char* field) {
        if (!doc.contains(field) || !doc[field].is_array())
            fail("bad_lexicon", std::string("sentiment lexicon missing array \"") + field + "\"");
        std::vector<std::string> raw;
        for (const auto& w : doc[field]) {
            if (!w.is_string()) fail("bad_lexicon", std::string(field) + " must contain strings");
            raw.push_back(w.get<std::string>());
        }
        return raw;
    };
    SentimentLexicon lex;
    lex.positive_words = lexicon::make_word_set("positive", words("positive"));
    lex.negative_words = lexicon::make_word_set("negative", words("negative"));
    if (doc.contains("negators"))
        lex.negators = lexicon::make_word_set("negators", words("negators"));
    else
        lex.negators = default_negators();
    for (const auto& e : lex.positive_words.entries) {
        if (lex.negative_words.contains(e.text))
            fail("bad_lexicon", "word \"" + e.text + "\" is both positive and negative");
    }
    return lex;
}

ScorerSpec ScorerSpec::parse(const std::string& str) {
    ScorerSpec spec;
    const auto colon = str.find(':');
    const std::string kind = colon == std::string::npos ? str : str.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : str.substr(colon + 1);
    if (kind == "builtin") {
        spec.kind = Kind::BuiltinLexicon;
        spec.config = rest;
    } else if (kind == "external") {
        spec.kind = Kind::External;
        spec.config = rest;
        if (rest.empty()) fail("bad_lexicon", "external scorer spec has no command");
    } else {
        fail("bad_lexicon", "unknown scorer spec \"" + str + "\" (expected builtin:<path> or external:<command>)");
    }
    return spec;
}

Score score_builtin(const std::vector<std::string>& tokens, const SentimentLexicon& lex) {
    const auto negators = extract::match_spans(tokens, lex.negators);
    const long raw = polarity_sum(tokens, lex.positive_words, negators, +1) +
                     polarity_sum(tokens, lex.negative_words, negators, -1);
    return sign(raw);
}

BuiltinScorer::BuiltinScorer(SentimentLexicon lex, std::string id)
    : lex_(std::move(lex)), id_(std::move(id)) {}

std::vector<Score> BuiltinScorer::score_batch(const std::vector<const extract::Statement*>& batch) {
    std::vector<Score> out(batch.size());
    parallel_for(batch.size(), workers_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            out[k] = score_builtin(batch[k]->sentence.tokens, lex_);
    });
    return out;
}

namespace {

// Runs `command` through /bin/sh, feeding `input` to stdin and collecting
// stdout, with a wall-clock timeout over the whole exchange.
std::string run_subprocess(const std::string& command, const std::string& input,
                           long timeout_seconds) {
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
        fail("spawn", std::string("pipe failed: ") + std::strerror(errno));
    fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);

    const pid_t pid = fork();
    if (pid < 0) fail("spawn", std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0) {
        setpgid(0, 0);
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        const int err = errno;
        ssize_t ignored = write(err_pipe[1], &err, sizeof(err));
        (void)ignored;
        _exit(127);
    }

    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);

    // exec failure is reported through the close-on-exec pipe
    {
        int err = 0;
        const ssize_t n = read(err_pipe[0], &err, sizeof(err));
        close(err_pipe[0]);
        if (n > 0) {
            waitpid(pid, nullptr, 0);
            close(in_pipe[1]);
            close(out_pipe[0]);
            fail("spawn", "cannot execute adapter command: " + std::string(std::strerror(err)));
        }
    }

    fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);

    std::string output;
    std::size_t written = 0;
    bool write_open = true;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_seconds);

    auto timed_out = [&]() {
        kill(-pid, SIGKILL);
        int status;
        waitpid(pid, &status, 0);
        if (write_open) close(in_pipe[1]);
        close(out_pipe[0]);
        fail("timeout", "adapter exceeded " + std::to_string(timeout_seconds) + " s");
    };

    while (true) {
        struct pollfd fds[2];
        nfds_t nfds = 0;
        int out_slot = -1, in_slot = -1;
        fds[nfds] = {out_pipe[0], POLLIN, 0};
        out_slot = static_cast<int>(nfds++);
        if (write_open) {
            fds[nfds] = {in_pipe[1], POLLOUT, 0};
            in_slot = static_cast<int>(nfds++);
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) timed_out();
        const long remaining_ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        const int rc = poll(fds, nfds, static_cast<int>(std::min<long>(remaining_ms, 60000)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            kill(-pid, SIGKILL);
            waitpid(pid, nullptr, 0);
            fail("spawn", std::string("poll failed: ") + std::strerror(errno));
        }
        if (rc == 0) {
            if (std::chrono::steady_clock::now() >= deadline) timed_out();
            continue;
        }
        if (write_open && in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (fds[in_slot].revents & (POLLERR | POLLHUP)) {
                close(in_pipe[1]);
                write_open = false;
            } else {
                const ssize_t n =
                    write(in_pipe[1], input.data() + written, input.size() - written);
                if (n > 0) written += static_cast<std::size_t>(n);
                if (n < 0 && errno != EAGAIN && errno != EINTR) {
                    close(in_pipe[1]);
                    write_open = false;
                }
                if (written == input.size()) {
                    close(in_pipe[1]);
                    write_open = false;
                }
            }
        }
        if (fds[out_slot].revents & (POLLIN | POLLHUP)) {
            char buf[65536];
            const ssize_t n = read(out_pipe[0], buf, sizeof(buf));
            if (n > 0) {
                output.append(buf, static_cast<std::size_t>(n));
            } else if (n == 0) {
                break;  // EOF
            } else if (errno != EAGAIN && errno != EINTR) {
                break;
            }
        }
    }
    close(out_pipe[0]);
    if (write_open) close(in_pipe[1]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        const std::string detail = WIFEXITED(status)
                                       ? "exit status " + std::to_string(WEXITSTATUS(status))
                                       : "killed by signal " + std::to_string(WTERMSIG(status));
        fail("protocol", "adapter failed (" + detail + ")");
    }
    return output;
}

std::string escape_newlines(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '\n')
            out += "\\n";
        else
            out.push_back(c);
    }
    return out;
}

}  // namespace

ExternalScorer::ExternalScorer(std::string command, std::string id, long timeout_seconds)
    : command_(std::move(command)), id_(std::move(id)), timeout_seconds_(timeout_seconds) {}

std::vector<Score> ExternalScorer::score_batch(
    const std::vector<const extract::Statement*>& batch) {
    if (batch.empty()) return {};
    std::string input;
    for (const auto* st : batch) {
        input += escape_newlines(st->sentence.text);
        input.push_back('\n');
    }
    const std::string output = run_subprocess(command_, input, timeout_seconds_);

    std::vector<Score> scores;
    std::size_t start = 0;
    while (start < output.size()) {
        std::size_t nl = output.find('\n', start);
        if (nl == std::string::npos) nl = output.size();
        std::string line = output.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        start = nl + 1;
        if (line == "1")
            scores.push_back(1);
        else if (line == "0")
            scores.push_back(0);
        else if (line == "-1")
            scores.push_back(-1);
        else
            fail("protocol", "adapter reply line " + std::to_string(scores.size() + 1) +
                                 " is \"" + line + "\" (expected -1, 0 or 1)");
    }
    if (scores.size() != batch.size())
        fail("protocol", "adapter replied with " + std::to_string(scores.size()) +
                             " lines, expected " + std::to_string(batch.size()));
    return scores;
}

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec, int workers) {
    if (spec.kind == ScorerSpec::Kind::BuiltinLexicon) {
        if (spec.config.empty()) fail("bad_lexicon", "builtin scorer needs a lexicon path");
        std::ifstream in(spec.config, std::ios::binary);
        if (!in) fail("bad_lexicon", "cannot open sentiment lexicon: " + spec.config);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::string id = spec.id.empty() ? "builtin:" + hex64(fnv1a64(bytes)).substr(0, 8) : spec.id;
        auto scorer = std::make_unique<BuiltinScorer>(SentimentLexicon::load_file(spec.config),
                                                      std::move(id));
        scorer->set_workers(workers);
        return scorer;
    }
    if (spec.id.empty())
        fail("bad_lexicon", "external scorers require an explicit scorer id");
    return std::make_unique<ExternalScorer>(spec.config, spec.id, spec.timeout_seconds);
}

ScoreCache::ScoreCache(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(file_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("sid") || !rec.contains("scorer") ||
            !rec.contains("score"))
            continue;  // ignore torn lines from concurrent writers
        const int v = rec["score"].get<int>();
        if (v < -1 || v > 1) continue;
        entries_[key(rec["sid"].get<std::string>(), rec["scorer"].get<std::string>())] = v;
    }
}

std::string ScoreCache::key(const std::string& sid, const std::string& scorer_id) {
    return scorer_id + "\x1f" + sid;
}

std::optional<Score> ScoreCache::get(const std::string& sid, const std::string& scorer_id) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = entries_.find(key(sid, scorer_id));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::put(const std::string& sid, const std::string& scorer_id, Score score) {
    std::lock_guard<std::mutex> lock(mu_);
    const std::string k = key(sid, scorer_id);
    if (entries_.count(k)) return;
    entries_[k] = score;
    nlohmann::json rec{{"sid", sid}, {"scorer", scorer_id}, {"score", score}};
    pending_lines_.push_back(rec.dump());
}

void ScoreCache::flush() {
    std::lock_guard<std::mutex> lock(mu_);
    if (pending_lines_.empty()) return;
    std::filesystem::create_directories(file_.parent_path());
    std::ofstream out(file_, std::ios::app);
    for (const auto& line : pending_lines_) out << line << "\n";
    pending_lines_.clear();
}

std::unique_ptr<ScoreCache> ScoreCache::from_env() {
    const char* dir = std::getenv("BIASLENS_CACHE_DIR");
    if (!dir || !*dir) return nullptr;
    return std::make_unique<ScoreCache>(std::filesystem::path(dir) / "scores.jsonl");
}

std::vector<std::pair<std::string, Score>> score_collection(
    const std::vector<extract::Statement>& statements, Scorer& scorer, ScoreCache* cache) {
    std::vector<std::pair<std::string, Score>> out(statements.size());
    std::vector<const extract::Statement*> missing;
    std::vector<std::size_t> missing_index;
    for (std::size_t k = 0; k < statements.size(); ++k) {
        out[k].first = statements[k].sentence.id;
        std::optional<Score> cached;
        if (cache) cached = cache->get(statements[k].sentence.id, scorer.id());
        if (cached) {
            out[k].second = *cached;
        } else {
            missing.push_back(&statements[k]);
            missing_index.push_back(k);
        }
    }
    if (!missing.empty()) {
        const std::vector<Score> fresh = scorer.score_batch(missing);
        for (std::size_t m = 0; m < missing.size(); ++m) {
            out[missing_index[m]].second = fresh[m];
            if (cache) cache->put(missing[m]->sentence.id, scorer.id(), fresh[m]);
        }
        if (cache) cache->flush();
    }
    return out;
}

}  // namespace biaslens::sentiment
