#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"
#include "reasoner.hpp"

namespace puzlog {

struct Statement {
    std::string id;
    std::string text;
    Formula gold;
    // The corpus deliberately leaves some readings open; disputed golds are
    // reported in a separate ratio rather than folded into the headline.
    bool disputed = false;
};

struct Query {
    std::string question;
    Formula target;
    QueryStatus expected = QueryStatus::Unknown;
};

struct Puzzle {
    std::string name;
    std::string narrative;
    Vocabulary vocab;
    std::vector<Statement> statements;
    std::vector<Query> queries;
    std::vector<std::string> notes;

    const Statement* find_statement(std::string_view id) const;

    // A puzzle without queries is a translation exercise set: its statements
    // are independent alternatives, not one scenario, so consistency is
    // judged per statement rather than on the conjunction.
    bool translation_only() const { return queries.empty(); }

    // Vocabulary plus one fact per statement, labelled by statement id.
    KnowledgeBase gold_kb() const;
};

// Loads and fully parses a puzzle file. Formula strings are parsed against
// the declared vocabulary; an undeclared symbol raises
// Error(VocabViolation), malformed JSON or missing fields raise
// Error(Schema), unreadable files raise Error(Io).
Puzzle load_puzzle(const std::filesystem::path& path);

// Same, from an in-memory JSON document. `origin` names the source in error
// messages.
Puzzle parse_puzzle_json(const std::string& text, const std::string& origin);

struct Violation {
    std::string kind;     // InconsistentGoldKb | ExpectationMismatch | DuplicateStatementId | VocabViolation
    std::string subject;  // statement id or query question, may be empty
    std::string detail;
};

// Invariant check; violations are data, not exceptions. Empty result means
// the puzzle is self-consistent: unique ids, a satisfiable gold encoding,
// and every expected query status reproduced on the gold KB.
std::vector<Violation> validate_puzzle(const Puzzle& p);

// The puzzles compiled into the library, parsed once on first use.
const std::vector<Puzzle>& bundled();
const Puzzle& bundled(std::string_view name);  // throws Error(NotFound)

// CLI-style resolution: an existing file path, then <corpus_dir>/<name>.json,
// then a bundled name.
Puzzle open_puzzle(const std::string& name_or_path,
                   const std::optional<std::filesystem::path>& corpus_dir);

}  // namespace puzlog
