#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "puzzle.hpp"

namespace puzlog {

enum class TranslationMode { WholeText, StatementAtATime };

const char* to_string(TranslationMode mode);  // "whole" / "stepwise"
TranslationMode mode_from_string(std::string_view s);

struct TranslatorConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4";
    // The key is read from this environment variable, never from files or
    // flags.
    std::string api_key_env = "PUZLOG_API_KEY";
    double temperature = 0.0;
    int max_retries = 2;
    int timeout_ms = 30000;
    int parallelism = 1;
    // Sequential single-conversation stepwise runs instead of a fresh
    // session per statement.
    bool carry_history = false;
    // Optional override of the instruction line in prompts.
    std::string instruction;
};

TranslatorConfig load_translator_config(const std::filesystem::path& path);

enum class FailureKind {
    Parse,
    OutOfVocabulary,
    NoFormulaFound,
    Refusal,
    Transport,
    Auth,
    Timeout,
};

const char* to_string(FailureKind kind);

struct ExtractionFailure {
    FailureKind kind;
    std::string detail;
};

// One per statement, always: either a vocabulary-valid formula or a
// classified failure, never a silent drop.
struct CandidateEncoding {
    std::string statement_id;
    std::string raw;  // the response text this candidate was read from
    std::optional<Formula> formula;
    std::optional<ExtractionFailure> error;
};

struct TranscriptRecord {
    std::string timestamp;  // ISO 8601 UTC
    std::string mode;       // "whole" | "stepwise" | "direct-qa"
    std::string prompt;
    std::string response;
    std::string model;
};

struct ChatMessage {
    std::string role;
    std::string content;
};

enum class RequestKind { WholeText, Statement, DirectQa };

struct Request {
    RequestKind kind = RequestKind::WholeText;
    std::string prompt;
    const Puzzle* puzzle = nullptr;
    const Statement* statement = nullptr;       // Statement requests only
    std::vector<ChatMessage> history;           // carry_history runs only
};

struct Completion {
    std::string text;
    std::optional<ExtractionFailure> error;  // transport/auth/timeout
};

class Client {
public:
    virtual ~Client() = default;
    virtual Completion complete(const Request& request) = 0;
    virtual std::string model_name() const = 0;
};

// Echoes each statement's gold encoding; makes the whole pipeline
// deterministic and offline.
std::unique_ptr<Client> make_gold_mock();

// Scripted responses from a JSON file: {"model": ..., "responses": {id:
// text}, "whole_text": optional, "direct_qa": optional}. Whole-text
// responses default to the per-statement texts joined with newlines.
std::unique_ptr<Client> make_script_mock(const std::filesystem::path& path);
std::unique_ptr<Client> make_script_mock_json(const std::string& json_text,
                                              const std::string& origin);

// Chat-completion HTTP client. Throws Error(Auth) immediately when the
// configured key variable is not set.
std::unique_ptr<Client> make_http_client(const TranslatorConfig& cfg);

// Prompt construction: symbol list one per line as "<id> - <gloss>", the
// encoding instruction, the narrative (whole-text) or the single statement
// (statement-at-a-time), and the id-prefixed output format request.
std::string build_prompt(const Puzzle& p, TranslationMode mode,
                         const Statement* statement = nullptr,
                         const std::string& instruction_override = "");

// Pulls one candidate per statement out of a free-text response. Blocks are
// located by statement-id markers ("3.", "3)", "3:"), and the last
// parseable formula span in a block wins; when no id marker appears
// anywhere, the k-th formula-bearing line answers the k-th statement.
// Failures are classified per candidate.
std::vector<CandidateEncoding> extract_candidates(const std::string& response, const Puzzle& p,
                                                  TranslationMode mode);

struct TranslationRun {
    TranslationMode mode = TranslationMode::WholeText;
    std::vector<CandidateEncoding> candidates;
    std::vector<TranscriptRecord> transcripts;
};

// Issues the requests for one puzzle (one for whole-text, one per statement
// for stepwise, each in a fresh session unless cfg.carry_history), extracts
// candidates, and persists transcripts under run_dir when given
// (<run_dir>/<puzzle>.<mode>.jsonl plus a .candidates.json next to it).
// Transport failures are recorded per candidate; the batch never throws for
// them.
TranslationRun translate(const Puzzle& p, TranslationMode mode, const TranslatorConfig& cfg,
                         Client& client, const std::optional<std::filesystem::path>& run_dir);

// Sends the narrative plus the query questions verbatim and records the
// free-text answer. No scoring: direct answers are graded by humans.
TranscriptRecord direct_qa(const Puzzle& p, const TranslatorConfig& cfg, Client& client,
                           const std::optional<std::filesystem::path>& run_dir);

void save_candidates(const std::filesystem::path& path, const Puzzle& p, TranslationMode mode,
                     const std::vector<CandidateEncoding>& candidates);

struct LoadedCandidates {
    TranslationMode mode;
    std::vector<CandidateEncoding> candidates;
};

LoadedCandidates load_candidates(const std::filesystem::path& path, const Puzzle& p);

}  // namespace puzlog
