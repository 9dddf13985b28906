#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace puzlog {

// Truth assignment, symbol id -> value. Must cover every atom of a formula
// it is evaluated against.
using Assignment = std::map<std::string, bool>;

struct Symbol {
    std::string id;
    std::string gloss;
};

// True iff `id` matches [A-Za-z_][A-Za-z0-9_]*.
bool valid_identifier(std::string_view id);

// Ordered set of declared symbols. Declaration order is significant: it is
// the tie-breaking order used by the solver and the printing order of
// reports.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<Symbol> symbols);

    // Throws Error(Duplicate) on redeclaration, Error(InvalidArgument) on a
    // malformed id.
    void add(std::string id, std::string gloss = "");

    bool contains(std::string_view id) const;
    // Index in declaration order, -1 if absent.
    int index_of(std::string_view id) const;
    const Symbol& at(int index) const { return symbols_.at(index); }
    int size() const { return static_cast<int>(symbols_.size()); }
    bool empty() const { return symbols_.empty(); }

    auto begin() const { return symbols_.begin(); }
    auto end() const { return symbols_.end(); }

private:
    std::vector<Symbol> symbols_;
    std::map<std::string, int, std::less<>> index_;
};

enum class Connective { Atom, Const, Not, And, Or, Xor, Implies, Iff };

// Immutable propositional formula. Copies share structure; all access is
// read-only after construction, so values can be shared across threads.
//
// And/Or are n-ary with at least two arguments; Xor/Implies/Iff are binary;
// Not is unary. Nested And-in-And (etc.) is permitted and preserved: the
// parser and printer never silently reassociate.
class Formula {
public:
    static Formula atom(std::string id);
    static Formula constant(bool value);
    static Formula negate(Formula f);
    static Formula conjunction(std::vector<Formula> args);
    static Formula disjunction(std::vector<Formula> args);
    static Formula exclusive_or(Formula lhs, Formula rhs);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula iff(Formula lhs, Formula rhs);

    Connective kind() const { return node_->kind; }
    bool const_value() const;
    const std::string& atom_id() const;
    const std::vector<Formula>& args() const { return node_->args; }

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

private:
    struct Node {
        Connective kind;
        bool value = false;      // Const
        std::string atom;        // Atom
        std::vector<Formula> args;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

// Classical truth value of `f` under `a`. Throws Error(UnknownSymbol) if an
// atom of `f` is unbound.
bool eval(const Formula& f, const Assignment& a);

// Atoms of `f` in first-occurrence order.
std::vector<std::string> free_symbols(const Formula& f);

// Cardinality builders for the counting phrases that show up in puzzle
// statements. Canonical shapes are chosen for readability at small n:
// exactly_one is the disjunction of the n one-hot cases, at_most(k) the
// conjunction of negated (k+1)-subsets, at_least(k) the disjunction of
// k-subsets (so at_least(1) collapses to a plain Or).
Formula exactly_one(const std::vector<std::string>& atoms);
Formula at_least(int k, const std::vector<std::string>& atoms);
Formula at_most(int k, const std::vector<std::string>& atoms);

}  // namespace puzlog
