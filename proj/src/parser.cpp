#include "parser.hpp"

#include <array>
#include <cctype>
#include <cstring>

namespace puzlog {

ParseError::ParseError(Kind kind, std::size_t position, std::string detail,
                       std::optional<std::string> offending)
    : Error(kind == Kind::UnknownSymbol ? ErrorCode::UnknownSymbol : ErrorCode::Parse,
            std::move(detail)),
      kind_(kind),
      position_(position),
      offending_(std::move(offending)) {}

namespace {

enum class Tok { End, LParen, RParen, Not, And, Or, Xor, Implies, Iff, True, False, Ident };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::size_t pos = 0;
};

bool iequal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(a[i])) !=
            std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& current() const { return current_; }

    void advance() {
        skip_space();
        current_.pos = pos_;
        if (pos_ >= text_.size()) {
            current_ = Token{Tok::End, "", pos_};
            return;
        }
        // Multi-byte glyphs first.
        static constexpr std::array<std::pair<std::string_view, Tok>, 11> glyphs{{
            {"<->", Tok::Iff},
            {"->", Tok::Implies},
            {"¬", Tok::Not},      // ¬
            {"∧", Tok::And},      // ∧
            {"∨", Tok::Or},       // ∨
            {"⊕", Tok::Xor},      // ⊕
            {"→", Tok::Implies},  // →
            {"↔", Tok::Iff},      // ↔
            {"&&", Tok::And},
            {"||", Tok::Or},
            {"~", Tok::Not},
        }};
        std::string_view rest = text_.substr(pos_);
        for (const auto& [spelling, tok] : glyphs) {
            if (rest.starts_with(spelling)) {
                current_ = Token{tok, std::string(spelling), pos_};
                pos_ += spelling.size();
                return;
            }
        }
        char c = text_[pos_];
        switch (c) {
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case '!': single(Tok::Not); return;
            case '&': single(Tok::And); return;
            case '|': single(Tok::Or); return;
            case '^': single(Tok::Xor); return;
            default: break;
        }
        if (c == '_' || std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (text_[pos_] == '_' || std::isalnum(static_cast<unsigned char>(text_[pos_]))))
                ++pos_;
            std::string word(text_.substr(start, pos_ - start));
            Tok type = Tok::Ident;
            if (iequal(word, "NOT")) type = Tok::Not;
            else if (iequal(word, "AND")) type = Tok::And;
            else if (iequal(word, "OR")) type = Tok::Or;
            else if (iequal(word, "XOR")) type = Tok::Xor;
            else if (iequal(word, "IMPLIES")) type = Tok::Implies;
            else if (iequal(word, "IFF")) type = Tok::Iff;
            else if (iequal(word, "TRUE")) type = Tok::True;
            else if (iequal(word, "FALSE")) type = Tok::False;
            current_ = Token{type, std::move(word), start};
            return;
        }
        throw ParseError(ParseError::Kind::Syntax, pos_, "unexpected character",
                         std::string(1, c));
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void single(Tok type) {
        current_ = Token{type, std::string(1, text_[pos_]), pos_};
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(std::string_view text, const Vocabulary* vocab) : lexer_(text), vocab_(vocab) {}

    Formula run() {
        if (lexer_.current().type == Tok::End)
            throw ParseError(ParseError::Kind::Empty, 0, "empty formula");
        Formula f = parse_iff();
        if (lexer_.current().type != Tok::End)
            throw ParseError(ParseError::Kind::Syntax, lexer_.current().pos,
                             "unexpected token after end of formula", lexer_.current().text);
        return f;
    }

private:
    // iff := implies (IFF implies)*
    Formula parse_iff() {
        Formula f = parse_implies();
        while (lexer_.current().type == Tok::Iff) {
            lexer_.advance();
            f = Formula::iff(std::move(f), parse_implies());
        }
        return f;
    }

    // implies := xor (IMPLIES implies)?   right-associative
    Formula parse_implies() {
        Formula f = parse_xor();
        if (lexer_.current().type == Tok::Implies) {
            lexer_.advance();
            return Formula::implies(std::move(f), parse_implies());
        }
        return f;
    }

    // xor := or (XOR or)*   left-associative
    Formula parse_xor() {
        Formula f = parse_or();
        while (lexer_.current().type == Tok::Xor) {
            lexer_.advance();
            f = Formula::exclusive_or(std::move(f), parse_or());
        }
        return f;
    }

    // or := and (OR and)*   collected into one n-ary node
    Formula parse_or() {
        Formula f = parse_and();
        if (lexer_.current().type != Tok::Or) return f;
        std::vector<Formula> args;
        args.push_back(std::move(f));
        while (lexer_.current().type == Tok::Or) {
            lexer_.advance();
            args.push_back(parse_and());
        }
        return Formula::disjunction(std::move(args));
    }

    // and := unary (AND unary)*   collected into one n-ary node
    Formula parse_and() {
        Formula f = parse_unary();
        if (lexer_.current().type != Tok::And) return f;
        std::vector<Formula> args;
        args.push_back(std::move(f));
        while (lexer_.current().type == Tok::And) {
            lexer_.advance();
            args.push_back(parse_unary());
        }
        return Formula::conjunction(std::move(args));
    }

    Formula parse_unary() {
        if (lexer_.current().type == Tok::Not) {
            lexer_.advance();
            return Formula::negate(parse_unary());
        }
        return parse_primary();
    }

    Formula parse_primary() {
        const Token tok = lexer_.current();
        switch (tok.type) {
            case Tok::Ident: {
                if (vocab_ && !vocab_->contains(tok.text))
                    throw ParseError(ParseError::Kind::UnknownSymbol, tok.pos,
                                     "undeclared symbol '" + tok.text + "'", tok.text);
                lexer_.advance();
                return Formula::atom(tok.text);
            }
            case Tok::True:
                lexer_.advance();
                return Formula::constant(true);
            case Tok::False:
                lexer_.advance();
                return Formula::constant(false);
            case Tok::LParen: {
                lexer_.advance();
                Formula f = parse_iff();
                if (lexer_.current().type != Tok::RParen)
                    throw ParseError(ParseError::Kind::Syntax, lexer_.current().pos,
                                     "expected ')'", lexer_.current().text);
                lexer_.advance();
                return f;
            }
            case Tok::End:
                throw ParseError(ParseError::Kind::Syntax, tok.pos, "unexpected end of input");
            default:
                throw ParseError(ParseError::Kind::Syntax, tok.pos,
                                 "expected an atom, constant, NOT or '('", tok.text);
        }
    }

    Lexer lexer_;
    const Vocabulary* vocab_;
};

// Binding strength, tighter = larger.
int level(const Formula& f) {
    switch (f.kind()) {
        case Connective::Atom:
        case Connective::Const: return 6;
        case Connective::Not: return 5;
        case Connective::And: return 4;
        case Connective::Or: return 3;
        case Connective::Xor: return 2;
        case Connective::Implies: return 1;
        case Connective::Iff: return 0;
    }
    return 6;
}

void print_into(const Formula& f, std::string& out);

// Parenthesize when the child binds no tighter than required. Same-level
// children of n-ary nodes stay parenthesized so nesting survives reparsing.
void print_child(const Formula& child, int min_level, std::string& out) {
    if (level(child) < min_level) {
        out += '(';
        print_into(child, out);
        out += ')';
    } else {
        print_into(child, out);
    }
}

void print_into(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case Connective::Atom:
            out += f.atom_id();
            return;
        case Connective::Const:
            out += f.const_value() ? "TRUE" : "FALSE";
            return;
        case Connective::Not:
            out += "NOT ";
            print_child(f.args()[0], 5, out);
            return;
        case Connective::And:
            for (size_t i = 0; i < f.args().size(); ++i) {
                if (i) out += " AND ";
                print_child(f.args()[i], 5, out);
            }
            return;
        case Connective::Or:
            for (size_t i = 0; i < f.args().size(); ++i) {
                if (i) out += " OR ";
                print_child(f.args()[i], 4, out);
            }
            return;
        case Connective::Xor:
            print_child(f.args()[0], 2, out);  // left-associative: same level ok
            out += " XOR ";
            print_child(f.args()[1], 3, out);
            return;
        case Connective::Implies:
            print_child(f.args()[0], 2, out);
            out += " -> ";
            print_child(f.args()[1], 1, out);  // right-associative: same level ok
            return;
        case Connective::Iff:
            print_child(f.args()[0], 0, out);  // left-associative
            out += " <-> ";
            print_child(f.args()[1], 1, out);
            return;
    }
}

}  // namespace

Formula parse(std::string_view text, const Vocabulary* vocab) {
    return Parser(text, vocab).run();
}

std::string print(const Formula& f) {
    std::string out;
    print_into(f, out);
    return out;
}

}  // namespace puzlog
