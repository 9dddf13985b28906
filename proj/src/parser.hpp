#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "formula.hpp"

namespace puzlog {

// Textual formula grammar (documented as EBNF in docs/formats.md):
//
//   formula := iff
//   iff     := implies (IFF implies)*        left-associative
//   implies := xor (IMPLIES implies)?        right-associative
//   xor     := or (XOR or)*                  left-associative
//   or      := and (OR and)*                 n-ary
//   and     := unary (AND unary)*            n-ary
//   unary   := NOT unary | primary
//   primary := identifier | TRUE | FALSE | '(' formula ')'
//
// Operator aliases (keywords case-insensitive):
//   NOT ! ~ ¬   AND & && ∧   OR | || ∨   XOR ^ ⊕   -> → IMPLIES   <-> ↔ IFF

class ParseError : public Error {
public:
    enum class Kind { Syntax, UnknownSymbol, Empty };

    ParseError(Kind kind, std::size_t position, std::string detail,
               std::optional<std::string> offending = std::nullopt);

    Kind parse_kind() const { return kind_; }
    std::size_t position() const { return position_; }
    const std::optional<std::string>& offending() const { return offending_; }

private:
    Kind kind_;
    std::size_t position_;  // byte offset into the input
    std::optional<std::string> offending_;
};

// Parses `text` into a formula. When `vocab` is given, every atom must be
// declared in it; an undeclared atom raises ParseError::UnknownSymbol (the
// out-of-vocabulary signal the evaluator relies on).
Formula parse(std::string_view text, const Vocabulary* vocab = nullptr);

// ASCII keyword rendering with minimal parentheses. parse(print(f)) is
// structurally identical to f; a child printed at the same precedence level
// as its parent keeps its parentheses precisely so that reassociation can
// never happen on the round trip.
std::string print(const Formula& f);

}  // namespace puzlog
