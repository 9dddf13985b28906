#include "translator.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "parser.hpp"

namespace puzlog {

using nlohmann::json;

const char* to_string(TranslationMode mode) {
    return mode == TranslationMode::WholeText ? "whole" : "stepwise";
}

TranslationMode mode_from_string(std::string_view s) {
    if (s == "whole") return TranslationMode::WholeText;
    if (s == "stepwise") return TranslationMode::StatementAtATime;
    throw Error(ErrorCode::InvalidArgument, "unknown translation mode '" + std::string(s) + "'");
}

const char* to_string(FailureKind kind) {
    switch (kind) {
        case FailureKind::Parse: return "parse_error";
        case FailureKind::OutOfVocabulary: return "out_of_vocabulary";
        case FailureKind::NoFormulaFound: return "no_formula_found";
        case FailureKind::Refusal: return "refusal";
        case FailureKind::Transport: return "transport_error";
        case FailureKind::Auth: return "auth_error";
        case FailureKind::Timeout: return "timeout";
    }
    return "?";
}

namespace {

FailureKind failure_from_string(const std::string& s, const std::string& origin) {
    for (FailureKind k : {FailureKind::Parse, FailureKind::OutOfVocabulary,
                          FailureKind::NoFormulaFound, FailureKind::Refusal,
                          FailureKind::Transport, FailureKind::Auth, FailureKind::Timeout})
        if (s == to_string(k)) return k;
    throw Error(ErrorCode::Schema, origin + ": unknown failure kind '" + s + "'");
}

std::string now_iso() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

TranslatorConfig load_translator_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, path.string() + ": malformed JSON: " + e.what());
    }
    TranslatorConfig cfg;
    if (doc.contains("endpoint")) cfg.endpoint = doc["endpoint"].get<std::string>();
    if (doc.contains("model")) cfg.model = doc["model"].get<std::string>();
    if (doc.contains("api_key_env")) cfg.api_key_env = doc["api_key_env"].get<std::string>();
    if (doc.contains("temperature")) cfg.temperature = doc["temperature"].get<double>();
    if (doc.contains("max_retries")) cfg.max_retries = doc["max_retries"].get<int>();
    if (doc.contains("timeout_ms")) cfg.timeout_ms = doc["timeout_ms"].get<int>();
    if (doc.contains("parallelism")) cfg.parallelism = doc["parallelism"].get<int>();
    if (doc.contains("carry_history")) cfg.carry_history = doc["carry_history"].get<bool>();
    if (doc.contains("instruction")) cfg.instruction = doc["instruction"].get<std::string>();
    if (cfg.temperature < 0.0 || cfg.temperature > 2.0)
        throw Error(ErrorCode::Range, "temperature must be within [0, 2]");
    if (cfg.max_retries < 0) throw Error(ErrorCode::Range, "max_retries must be >= 0");
    if (cfg.parallelism < 1) throw Error(ErrorCode::Range, "parallelism must be >= 1");
    return cfg;
}

// ---------------------------------------------------------------------------
// Prompts

std::string build_prompt(const Puzzle& p, TranslationMode mode, const Statement* statement,
                         const std::string& instruction_override) {
    if (mode == TranslationMode::StatementAtATime) {
        if (!statement || !p.find_statement(statement->id))
            throw Error(ErrorCode::NotFound, "statement is not part of puzzle '" + p.name + "'");
    }
    std::string out = "Given the following propositional symbols:\n";
    for (const auto& s : p.vocab) {
        out += s.id;
        if (!s.gloss.empty()) out += " - " + s.gloss;
        out += '\n';
    }
    out += '\n';
    std::string instruction = instruction_override;
    if (instruction.empty()) {
        instruction = mode == TranslationMode::WholeText
                          ? "Express each of the numbered statements below in propositional "
                            "logic, using only these symbols."
                          : "Express the following statement in propositional logic, using "
                            "only these symbols.";
    }
    out += instruction;
    out += '\n';
    if (mode == TranslationMode::WholeText) {
        out += "\nText:\n" + p.narrative + "\n\nStatements:\n";
        for (const auto& s : p.statements) out += s.id + ". " + s.text + '\n';
        out +=
            "\nAnswer with one formula per statement, each on its own line, "
            "prefixed by the statement id.\n";
    } else {
        out += "\nStatement " + statement->id + ":\n" + statement->text + "\n";
        out +=
            "\nAnswer with a single formula on one line, prefixed by the "
            "statement id.\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    lines.push_back(current);
    return lines;
}

std::string_view ltrim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    return s;
}

std::string_view trim(std::string_view s) {
    s = ltrim(s);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// If `line` opens with a marker for one of `ids` ("3.", "3)", "3:", "3 -",
// optionally bulleted or prefixed with the word "statement"), returns the id
// and the text after the marker.
std::optional<std::pair<std::string, std::string>> match_marker(
    const std::string& line, const std::vector<std::string>& ids) {
    std::string_view s = ltrim(line);
    while (!s.empty() && (s.front() == '-' || s.front() == '*')) s = ltrim(s.substr(1));
    std::string lower = to_lower(s);
    if (lower.starts_with("statement")) s = ltrim(s.substr(9));
    for (const auto& id : ids) {
        if (!std::string_view(s).starts_with(id)) continue;
        std::string_view rest = std::string_view(s).substr(id.size());
        if (rest.empty()) return std::make_pair(id, std::string());
        char c = rest.front();
        bool delimited = c == '.' || c == ')' || c == ':' || c == '-';
        if (delimited) return std::make_pair(id, std::string(trim(rest.substr(1))));
        // "3 -> ..." would wrongly split a formula; require a hard delimiter
        // unless the id stands alone.
        if (std::isspace(static_cast<unsigned char>(c))) {
            std::string_view after = ltrim(rest);
            if (!after.empty() && (after.front() == '.' || after.front() == ')' ||
                                   after.front() == ':' || after.front() == '-'))
                return std::make_pair(id, std::string(trim(after.substr(1))));
        }
    }
    return std::nullopt;
}

// Uppercase connective keywords and operator glyphs count as evidence that a
// formula was attempted; TRUE/FALSE and lowercase prose words do not.
bool operator_evidence(const std::string& line) {
    for (const char* glyph : {"->", "<->", "&", "|", "!", "~", "^",
                              "¬", "∧", "∨", "⊕", "→", "↔"})
        if (line.find(glyph) != std::string::npos) return true;
    static const std::vector<std::string> words = {"AND", "OR", "NOT", "XOR", "IMPLIES", "IFF"};
    size_t i = 0;
    while (i < line.size()) {
        if (std::isalpha(static_cast<unsigned char>(line[i]))) {
            size_t j = i;
            while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) ||
                                       line[j] == '_'))
                ++j;
            std::string word = line.substr(i, j - i);
            for (const auto& w : words)
                if (word == w) return true;
            i = j;
        } else {
            ++i;
        }
    }
    return false;
}

bool refusal_evidence(const std::string& block) {
    std::string lower = to_lower(block);
    for (const char* needle : {"assum", "cannot", "can't", "unable", "refus", "declin"})
        if (lower.find(needle) != std::string::npos) return true;
    return false;
}

struct SpanScan {
    std::optional<Formula> formula;
    std::string formula_line;
    std::optional<std::string> oov_detail;
    bool operators = false;
    std::string parse_detail;
};

// Attempts one text span. Outcomes: a vocabulary-valid formula, an
// out-of-vocabulary note, or nothing.
void try_span(std::string_view span, const Vocabulary& vocab, const std::string& line,
              SpanScan& scan) {
    span = trim(span);
    if (span.empty()) return;
    Formula f = [&]() -> Formula {
        try {
            return parse(span, nullptr);
        } catch (const ParseError& e) {
            // Trailing prose: retry the longest parseable prefix.
            if (e.position() > 0 && e.position() < span.size() &&
                std::string_view(e.what()).find("after end of formula") != std::string_view::npos)
                return parse(span.substr(0, e.position()), nullptr);
            throw;
        }
    }();
    // A lone unknown word is prose, not a formula.
    if (f.kind() == Connective::Atom && !vocab.contains(f.atom_id())) return;
    for (const auto& id : free_symbols(f)) {
        if (!vocab.contains(id)) {
            scan.oov_detail = "undeclared symbol '" + id + "'";
            return;
        }
    }
    scan.formula = std::move(f);
    scan.formula_line = line;
}

void scan_line(const std::string& line, const Vocabulary& vocab, SpanScan& scan) {
    if (operator_evidence(line)) scan.operators = true;
    std::vector<std::string> spans;
    spans.emplace_back(line);
    size_t colon = line.rfind(':');
    if (colon != std::string::npos) spans.emplace_back(line.substr(colon + 1));
    size_t tick = line.find('`');
    if (tick != std::string::npos) {
        size_t end = line.find('`', tick + 1);
        if (end != std::string::npos) spans.emplace_back(line.substr(tick + 1, end - tick - 1));
    }
    for (const auto& span : spans) {
        try {
            try_span(span, vocab, line, scan);
            if (scan.formula) return;  // first working span of this line
        } catch (const ParseError& e) {
            scan.parse_detail = e.what();
        }
    }
}

CandidateEncoding classify_block(const std::string& statement_id,
                                 const std::vector<std::string>& lines, const Vocabulary& vocab) {
    CandidateEncoding c;
    c.statement_id = statement_id;
    std::string block;
    for (const auto& line : lines) {
        if (!block.empty()) block += '\n';
        block += line;
    }
    c.raw = block;

    SpanScan scan;
    for (const auto& line : lines) {
        SpanScan line_scan;
        line_scan.operators = scan.operators;
        line_scan.oov_detail = scan.oov_detail;
        line_scan.parse_detail = scan.parse_detail;
        scan_line(line, vocab, line_scan);
        if (line_scan.formula) {
            scan.formula = line_scan.formula;  // last parseable span wins
            scan.formula_line = line_scan.formula_line;
        }
        scan.operators = line_scan.operators;
        scan.oov_detail = line_scan.oov_detail;
        scan.parse_detail = line_scan.parse_detail;
    }

    if (scan.formula) {
        c.formula = scan.formula;
        return c;
    }
    if (scan.oov_detail) {
        c.error = ExtractionFailure{FailureKind::OutOfVocabulary, *scan.oov_detail};
        return c;
    }
    if (scan.operators) {
        c.error = ExtractionFailure{
            FailureKind::Parse,
            scan.parse_detail.empty() ? "formula-like text failed to parse" : scan.parse_detail};
        return c;
    }
    if (refusal_evidence(block) && !block.empty()) {
        c.error = ExtractionFailure{FailureKind::Refusal,
                                    "response declines or substitutes an assumption"};
        return c;
    }
    c.error = ExtractionFailure{FailureKind::NoFormulaFound, "no formula in the answer block"};
    return c;
}

}  // namespace

std::vector<CandidateEncoding> extract_candidates(const std::string& response, const Puzzle& p,
                                                  TranslationMode) {
    std::vector<std::string> ids;
    for (const auto& s : p.statements) ids.push_back(s.id);
    std::vector<std::string> lines = split_lines(response);

    std::map<std::string, std::vector<std::string>> blocks;
    std::string current;
    bool any_marker = false;
    for (const auto& line : lines) {
        if (auto m = match_marker(line, ids)) {
            any_marker = true;
            current = m->first;
            blocks[current].push_back(m->second);
        } else if (!current.empty()) {
            blocks[current].push_back(line);
        }
    }

    std::vector<CandidateEncoding> out;
    if (any_marker) {
        for (const auto& s : p.statements) {
            auto it = blocks.find(s.id);
            if (it == blocks.end()) {
                CandidateEncoding c;
                c.statement_id = s.id;
                c.error = ExtractionFailure{FailureKind::NoFormulaFound,
                                            "no answer block for this statement"};
                out.push_back(std::move(c));
            } else {
                out.push_back(classify_block(s.id, it->second, p.vocab));
            }
        }
        return out;
    }

    // No id markers anywhere: the k-th formula-bearing line answers the k-th
    // statement.
    std::vector<SpanScan> bearing;
    std::vector<std::string> bearing_lines;
    for (const auto& line : lines) {
        SpanScan scan;
        scan_line(line, p.vocab, scan);
        if (scan.formula || scan.oov_detail) {
            bearing.push_back(scan);
            bearing_lines.push_back(line);
        }
    }
    for (size_t k = 0; k < p.statements.size(); ++k) {
        CandidateEncoding c;
        c.statement_id = p.statements[k].id;
        if (k < bearing.size()) {
            c.raw = bearing_lines[k];
            if (bearing[k].formula) {
                c.formula = bearing[k].formula;
            } else {
                c.error = ExtractionFailure{FailureKind::OutOfVocabulary, *bearing[k].oov_detail};
            }
        } else {
            c.raw = response;
            if (refusal_evidence(response))
                c.error = ExtractionFailure{FailureKind::Refusal,
                                            "response declines or substitutes an assumption"};
            else
                c.error =
                    ExtractionFailure{FailureKind::NoFormulaFound, "no formula-bearing line left"};
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Clients

namespace {

class GoldMock : public Client {
public:
    Completion complete(const Request& request) override {
        if (!request.puzzle) return {"", ExtractionFailure{FailureKind::Transport, "no puzzle"}};
        const Puzzle& p = *request.puzzle;
        switch (request.kind) {
            case RequestKind::Statement:
                if (!request.statement) break;
                return {request.statement->id + ". " + print(request.statement->gold), {}};
            case RequestKind::WholeText: {
                std::string text;
                for (const auto& s : p.statements) text += s.id + ". " + print(s.gold) + "\n";
                return {text, {}};
            }
            case RequestKind::DirectQa:
                return {"This mock does not answer questions; run the symbolic solver instead.",
                        {}};
        }
        return {"", ExtractionFailure{FailureKind::Transport, "malformed request"}};
    }

    std::string model_name() const override { return "mock-gold"; }
};

class ScriptMock : public Client {
public:
    ScriptMock(const std::string& text, const std::string& origin) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::Schema, origin + ": malformed JSON: " + e.what());
        }
        if (doc.contains("model")) model_ = doc["model"].get<std::string>();
        if (doc.contains("responses"))
            for (auto& [key, value] : doc["responses"].items())
                responses_[key] = value.get<std::string>();
        if (doc.contains("whole_text")) whole_text_ = doc["whole_text"].get<std::string>();
        if (doc.contains("direct_qa")) direct_qa_ = doc["direct_qa"].get<std::string>();
    }

    Completion complete(const Request& request) override {
        switch (request.kind) {
            case RequestKind::Statement: {
                if (!request.statement) return {"", {}};
                auto it = responses_.find(request.statement->id);
                return {it == responses_.end() ? "" : it->second, {}};
            }
            case RequestKind::WholeText: {
                if (whole_text_) return {*whole_text_, {}};
                std::string text;
                if (request.puzzle) {
                    for (const auto& s : request.puzzle->statements) {
                        auto it = responses_.find(s.id);
                        if (it != responses_.end()) text += it->second + "\n";
                    }
                } else {
                    for (const auto& [id, value] : responses_) text += value + "\n";
                }
                return {text, {}};
            }
            case RequestKind::DirectQa:
                return {direct_qa_.value_or(""), {}};
        }
        return {"", {}};
    }

    std::string model_name() const override { return model_; }

private:
    std::string model_ = "mock-script";
    std::map<std::string, std::string> responses_;
    std::optional<std::string> whole_text_;
    std::optional<std::string> direct_qa_;
};

}  // namespace

std::unique_ptr<Client> make_gold_mock() { return std::make_unique<GoldMock>(); }

std::unique_ptr<Client> make_script_mock_json(const std::string& json_text,
                                              const std::string& origin) {
    return std::make_unique<ScriptMock>(json_text, origin);
}

std::unique_ptr<Client> make_script_mock(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read mock script '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return make_script_mock_json(buf.str(), path.string());
}

namespace {

class HttpClient : public Client {
public:
    explicit HttpClient(const TranslatorConfig& cfg) : cfg_(cfg) {
        const char* key = std::getenv(cfg.api_key_env.c_str());
        if (!key || !*key)
            throw Error(ErrorCode::Auth,
                        "environment variable " + cfg.api_key_env + " is not set");
        api_key_ = key;
        size_t scheme_end = cfg.endpoint.find("://");
        if (scheme_end == std::string::npos)
            throw Error(ErrorCode::InvalidArgument, "endpoint must be a http(s) URL");
        size_t path_start = cfg.endpoint.find('/', scheme_end + 3);
        base_ = path_start == std::string::npos ? cfg.endpoint : cfg.endpoint.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : cfg.endpoint.substr(path_start);
    }

    Completion complete(const Request& request) override {
        json body;
        body["model"] = cfg_.model;
        body["temperature"] = cfg_.temperature;
        json messages = json::array();
        for (const auto& m : request.history)
            messages.push_back({{"role", m.role}, {"content", m.content}});
        messages.push_back({{"role", "user"}, {"content", request.prompt}});
        body["messages"] = std::move(messages);
        const std::string payload = body.dump();

        ExtractionFailure last{FailureKind::Transport, "request not attempted"};
        for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(50L * attempt));
            // One connection per call keeps concurrent stepwise requests
            // independent.
            httplib::Client http(base_);
            auto timeout = std::chrono::milliseconds(cfg_.timeout_ms);
            http.set_connection_timeout(timeout);
            http.set_read_timeout(timeout);
            http.set_write_timeout(timeout);
            httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
            auto res = http.Post(path_, headers, payload, "application/json");
            if (!res) {
                bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                                 res.error() == httplib::Error::Read;
                last = {timed_out ? FailureKind::Timeout : FailureKind::Transport,
                        "http error: " + httplib::to_string(res.error())};
                continue;
            }
            if (res->status == 401 || res->status == 403)
                return {"", ExtractionFailure{FailureKind::Auth,
                                              "server rejected credentials (status " +
                                                  std::to_string(res->status) + ")"}};
            if (res->status == 429 || res->status >= 500) {
                last = {FailureKind::Transport, "status " + std::to_string(res->status)};
                continue;
            }
            if (res->status != 200)
                return {"", ExtractionFailure{FailureKind::Transport,
                                              "status " + std::to_string(res->status)}};
            try {
                json doc = json::parse(res->body);
                return {doc.at("choices").at(0).at("message").at("content").get<std::string>(),
                        {}};
            } catch (const json::exception& e) {
                return {"", ExtractionFailure{FailureKind::Transport,
                                              std::string("malformed chat response: ") + e.what()}};
            }
        }
        return {"", last};
    }

    std::string model_name() const override { return cfg_.model; }

private:
    TranslatorConfig cfg_;
    std::string api_key_;
    std::string base_;
    std::string path_;
};

}  // namespace

std::unique_ptr<Client> make_http_client(const TranslatorConfig& cfg) {
    return std::make_unique<HttpClient>(cfg);
}

// ---------------------------------------------------------------------------
// Translation driver

namespace {

// Extraction for one statement's own response: the block after the
// statement's id marker when present, the whole response otherwise.
CandidateEncoding classify_single(const std::string& response, const Puzzle& p,
                                  const Statement& s) {
    std::vector<std::string> lines = split_lines(response);
    std::vector<std::string> ids = {s.id};
    std::vector<std::string> block;
    bool found = false;
    for (const auto& line : lines) {
        if (auto m = match_marker(line, ids)) {
            found = true;
            block.push_back(m->second);
        } else if (found) {
            block.push_back(line);
        }
    }
    if (!found) block = std::move(lines);
    CandidateEncoding c = classify_block(s.id, block, p.vocab);
    c.raw = response;
    return c;
}

TranscriptRecord make_record(const std::string& mode, const Request& req, const Completion& c,
                             const std::string& model) {
    return TranscriptRecord{now_iso(), mode, req.prompt, c.text, model};
}

CandidateEncoding failure_candidate(const std::string& id, const ExtractionFailure& failure) {
    CandidateEncoding c;
    c.statement_id = id;
    c.error = failure;
    return c;
}

void persist_transcripts(const std::filesystem::path& run_dir, const Puzzle& p,
                         const std::string& mode, const std::vector<TranscriptRecord>& records) {
    std::filesystem::create_directories(run_dir);
    auto path = run_dir / (p.name + "." + mode + ".jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write transcript '" + path.string() + "'");
    for (const auto& r : records) {
        json line = {{"timestamp", r.timestamp},
                     {"mode", r.mode},
                     {"prompt", r.prompt},
                     {"response", r.response},
                     {"model", r.model}};
        out << line.dump() << '\n';
    }
}

}  // namespace

TranslationRun translate(const Puzzle& p, TranslationMode mode, const TranslatorConfig& cfg,
                         Client& client, const std::optional<std::filesystem::path>& run_dir) {
    TranslationRun run;
    run.mode = mode;
    const std::string mode_str = to_string(mode);

    if (mode == TranslationMode::WholeText) {
        Request req{RequestKind::WholeText, build_prompt(p, mode, nullptr, cfg.instruction), &p,
                    nullptr, {}};
        Completion c = client.complete(req);
        run.transcripts.push_back(make_record(mode_str, req, c, client.model_name()));
        if (c.error) {
            for (const auto& s : p.statements)
                run.candidates.push_back(failure_candidate(s.id, *c.error));
        } else {
            run.candidates = extract_candidates(c.text, p, mode);
        }
    } else if (cfg.carry_history) {
        // One conversation, statements in order.
        std::vector<ChatMessage> history;
        for (const auto& s : p.statements) {
            Request req{RequestKind::Statement, build_prompt(p, mode, &s, cfg.instruction), &p, &s,
                        history};
            Completion c = client.complete(req);
            run.transcripts.push_back(make_record(mode_str, req, c, client.model_name()));
            if (c.error) {
                run.candidates.push_back(failure_candidate(s.id, *c.error));
            } else {
                run.candidates.push_back(classify_single(c.text, p, s));
                history.push_back({"user", req.prompt});
                history.push_back({"assistant", c.text});
            }
        }
    } else {
        // Fresh session per statement; requests may run concurrently.
        const size_t n = p.statements.size();
        run.candidates.resize(n);
        run.transcripts.resize(n);
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                const Statement& s = p.statements[i];
                Request req{RequestKind::Statement, build_prompt(p, mode, &s, cfg.instruction), &p,
                            &s, {}};
                Completion c = client.complete(req);
                run.transcripts[i] = make_record(mode_str, req, c, client.model_name());
                run.candidates[i] =
                    c.error ? failure_candidate(s.id, *c.error) : classify_single(c.text, p, s);
            }
        };
        size_t threads = std::min<size_t>(std::max(cfg.parallelism, 1), n == 0 ? 1 : n);
        if (threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
    }

    if (run_dir) {
        persist_transcripts(*run_dir, p, mode_str, run.transcripts);
        save_candidates(*run_dir / (p.name + "." + mode_str + ".candidates.json"), p, mode,
                        run.candidates);
    }
    return run;
}

TranscriptRecord direct_qa(const Puzzle& p, const TranslatorConfig&, Client& client,
                           const std::optional<std::filesystem::path>& run_dir) {
    std::string prompt = p.narrative + "\n\n";
    for (const auto& q : p.queries) prompt += q.question + "\n";
    Request req{RequestKind::DirectQa, prompt, &p, nullptr, {}};
    Completion c = client.complete(req);
    TranscriptRecord record = make_record("direct-qa", req, c, client.model_name());
    if (run_dir) persist_transcripts(*run_dir, p, "direct-qa", {record});
    if (c.error)
        throw Error(c.error->kind == FailureKind::Auth      ? ErrorCode::Auth
                    : c.error->kind == FailureKind::Timeout ? ErrorCode::Timeout
                                                            : ErrorCode::Transport,
                    c.error->detail);
    return record;
}

// ---------------------------------------------------------------------------
// Candidate persistence

void save_candidates(const std::filesystem::path& path, const Puzzle& p, TranslationMode mode,
                     const std::vector<CandidateEncoding>& candidates) {
    json list = json::array();
    for (const auto& c : candidates) {
        json entry;
        entry["statement"] = c.statement_id;
        entry["raw"] = c.raw;
        if (c.formula) entry["formula"] = print(*c.formula);
        if (c.error)
            entry["error"] = {{"kind", to_string(c.error->kind)}, {"detail", c.error->detail}};
        list.push_back(std::move(entry));
    }
    json doc = {{"puzzle", p.name}, {"mode", to_string(mode)}, {"candidates", std::move(list)}};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write candidates '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

LoadedCandidates load_candidates(const std::filesystem::path& path, const Puzzle& p) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read candidates '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, path.string() + ": malformed JSON: " + e.what());
    }
    const std::string origin = path.string();
    if (!doc.contains("puzzle") || doc["puzzle"].get<std::string>() != p.name)
        throw Error(ErrorCode::Schema,
                    origin + ": candidates file does not belong to puzzle '" + p.name + "'");
    LoadedCandidates out;
    out.mode = mode_from_string(doc.value("mode", "whole"));
    if (!doc.contains("candidates") || !doc["candidates"].is_array())
        throw Error(ErrorCode::Schema, origin + ": missing 'candidates' array");
    for (const auto& entry : doc["candidates"]) {
        CandidateEncoding c;
        c.statement_id = entry.at("statement").get<std::string>();
        if (!p.find_statement(c.statement_id))
            throw Error(ErrorCode::Schema,
                        origin + ": unknown statement id '" + c.statement_id + "'");
        c.raw = entry.value("raw", "");
        if (entry.contains("formula")) {
            try {
                c.formula = parse(entry["formula"].get<std::string>(), &p.vocab);
            } catch (const ParseError& e) {
                throw Error(ErrorCode::Schema, origin + ": statement '" + c.statement_id +
                                                   "': " + e.what());
            }
        } else if (entry.contains("error")) {
            c.error = ExtractionFailure{
                failure_from_string(entry["error"].at("kind").get<std::string>(), origin),
                entry["error"].value("detail", "")};
        } else {
            throw Error(ErrorCode::Schema, origin + ": candidate for statement '" +
                                               c.statement_id + "' has neither formula nor error");
        }
        out.candidates.push_back(std::move(c));
    }
    return out;
}

}  // namespace puzlog
