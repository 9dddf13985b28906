#include "puzzle.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corpus_data.hpp"
#include "parser.hpp"

namespace puzlog {

using nlohmann::json;

const Statement* Puzzle::find_statement(std::string_view id) const {
    for (const auto& s : statements)
        if (s.id == id) return &s;
    return nullptr;
}

KnowledgeBase Puzzle::gold_kb() const {
    KnowledgeBase kb(vocab);
    for (const auto& s : statements) kb.add_fact(s.id, s.gold);
    return kb;
}

namespace {

QueryStatus status_from_string(const std::string& s, const std::string& origin) {
    if (s == "entailed") return QueryStatus::Entailed;
    if (s == "refuted") return QueryStatus::Refuted;
    if (s == "unknown") return QueryStatus::Unknown;
    if (s == "kb_inconsistent") return QueryStatus::KbInconsistent;
    throw Error(ErrorCode::Schema, origin + ": unknown query status '" + s + "'");
}

const json& require_field(const json& obj, const char* field, const std::string& origin) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw Error(ErrorCode::Schema, origin + ": missing field '" + field + "'");
    return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& origin) {
    const json& v = require_field(obj, field, origin);
    if (!v.is_string())
        throw Error(ErrorCode::Schema, origin + ": field '" + field + "' must be a string");
    return v.get<std::string>();
}

Formula parse_in_context(const std::string& text, const Vocabulary& vocab,
                         const std::string& context) {
    try {
        return parse(text, &vocab);
    } catch (const ParseError& e) {
        if (e.parse_kind() == ParseError::Kind::UnknownSymbol)
            throw Error(ErrorCode::VocabViolation, context + ": " + e.what());
        throw ParseError(e.parse_kind(), e.position(), context + ": " + e.what(), e.offending());
    }
}

}  // namespace

Puzzle parse_puzzle_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema,
                    origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        throw Error(ErrorCode::Schema, origin + ": top level must be an object");

    Puzzle p;
    p.name = require_string(doc, "name", origin);
    p.narrative = require_string(doc, "narrative", origin);

    const json& symbols = require_field(doc, "symbols", origin);
    if (!symbols.is_array())
        throw Error(ErrorCode::Schema, origin + ": 'symbols' must be an array");
    for (const auto& s : symbols) {
        std::string id = require_string(s, "id", origin + " symbols");
        std::string gloss = s.contains("gloss") ? s["gloss"].get<std::string>() : "";
        try {
            p.vocab.add(std::move(id), std::move(gloss));
        } catch (const Error& e) {
            throw Error(ErrorCode::Schema, origin + ": " + e.what());
        }
    }

    const json& statements = require_field(doc, "statements", origin);
    if (!statements.is_array())
        throw Error(ErrorCode::Schema, origin + ": 'statements' must be an array");
    for (const auto& s : statements) {
        Statement st;
        st.id = require_string(s, "id", origin + " statements");
        st.text = require_string(s, "text", origin + " statements");
        std::string gold = require_string(s, "gold", origin + " statements");
        st.gold = parse_in_context(gold, p.vocab, origin + ": statement '" + st.id + "'");
        if (s.contains("disputed")) st.disputed = s["disputed"].get<bool>();
        p.statements.push_back(std::move(st));
    }

    if (doc.contains("queries")) {
        const json& queries = doc["queries"];
        if (!queries.is_array())
            throw Error(ErrorCode::Schema, origin + ": 'queries' must be an array");
        for (const auto& q : queries) {
            Query query;
            query.question = require_string(q, "question", origin + " queries");
            std::string target = require_string(q, "target", origin + " queries");
            query.target =
                parse_in_context(target, p.vocab, origin + ": query '" + query.question + "'");
            query.expected = status_from_string(require_string(q, "expected", origin + " queries"),
                                                origin);
            p.queries.push_back(std::move(query));
        }
    }

    if (doc.contains("notes")) {
        for (const auto& n : doc["notes"]) p.notes.push_back(n.get<std::string>());
    }
    return p;
}

Puzzle load_puzzle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot read puzzle file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_puzzle_json(buf.str(), path.filename().string());
}

std::vector<Violation> validate_puzzle(const Puzzle& p) {
    std::vector<Violation> out;

    std::set<std::string> ids;
    for (const auto& s : p.statements)
        if (!ids.insert(s.id).second)
            out.push_back({"DuplicateStatementId", s.id, "statement id repeats"});

    for (const auto& s : p.statements)
        for (const auto& sym : free_symbols(s.gold))
            if (!p.vocab.contains(sym))
                out.push_back({"VocabViolation", s.id, "gold uses undeclared symbol '" + sym + "'"});
    for (const auto& q : p.queries)
        for (const auto& sym : free_symbols(q.target))
            if (!p.vocab.contains(sym))
                out.push_back(
                    {"VocabViolation", q.question, "target uses undeclared symbol '" + sym + "'"});
    if (!out.empty()) return out;  // KB checks need well-formed ids and symbols

    if (p.translation_only()) {
        // Independent entries: each gold must be satisfiable on its own.
        for (const auto& s : p.statements) {
            if (!solve(to_cnf(s.gold, p.vocab)).sat)
                out.push_back({"InconsistentGoldKb", s.id, "gold encoding is unsatisfiable"});
        }
        return out;
    }

    KnowledgeBase kb = p.gold_kb();
    if (!consistent(kb)) {
        out.push_back({"InconsistentGoldKb", "", "conjunction of gold encodings is unsatisfiable"});
        return out;
    }
    for (const auto& q : p.queries) {
        QueryStatus got = classify(kb, q.target);
        if (got != q.expected)
            out.push_back({"ExpectationMismatch", q.question,
                           std::string("expected ") + to_string(q.expected) + ", gold KB gives " +
                               to_string(got)});
    }
    return out;
}

const std::vector<Puzzle>& bundled() {
    static const std::vector<Puzzle> puzzles = [] {
        std::vector<Puzzle> out;
        for (int i = 0; i < detail::kEmbeddedCorpusCount; ++i) {
            const auto& entry = detail::kEmbeddedCorpus[i];
            out.push_back(parse_puzzle_json(entry.json, std::string("bundled:") + entry.name));
        }
        return out;
    }();
    return puzzles;
}

const Puzzle& bundled(std::string_view name) {
    for (const auto& p : bundled())
        if (p.name == name) return p;
    throw Error(ErrorCode::NotFound, "no bundled puzzle named '" + std::string(name) + "'");
}

Puzzle open_puzzle(const std::string& name_or_path,
                   const std::optional<std::filesystem::path>& corpus_dir) {
    std::error_code ec;
    if (std::filesystem::exists(name_or_path, ec)) return load_puzzle(name_or_path);
    if (corpus_dir) {
        auto candidate = *corpus_dir / (name_or_path + ".json");
        if (std::filesystem::exists(candidate, ec)) return load_puzzle(candidate);
    }
    for (const auto& p : bundled())
        if (p.name == name_or_path) return p;
    throw Error(ErrorCode::NotFound,
                "no puzzle '" + name_or_path + "' (not a file, not in the corpus directory, not bundled)");
}

}  // namespace puzlog
