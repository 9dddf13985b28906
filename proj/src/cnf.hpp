#pragma once

#include <string>
#include <vector>

#include "formula.hpp"

namespace puzlog {

// Variable indices start at 1, DIMACS style.
struct Lit {
    int var = 0;
    bool neg = false;

    friend bool operator==(const Lit&, const Lit&) = default;
};

inline Lit pos(int var) { return {var, false}; }
inline Lit negl(int var) { return {var, true}; }

using Clause = std::vector<Lit>;

// CNF with the source symbols pinned to a prefix of the variable range:
// vars 1..original_count are the declared symbols in declaration order,
// everything above original_count is a Tseitin auxiliary.
struct CnfInstance {
    int original_count = 0;
    int aux_count = 0;
    std::vector<std::string> names;  // names[i] is the symbol of var i+1
    std::vector<Clause> clauses;

    int var_count() const { return original_count + aux_count; }
    // 0 if the symbol is not an original of this instance.
    int var_of(const std::string& id) const;
};

// Accumulates asserted formulas over one shared variable space. Encoding is
// definitional Tseitin: every non-atom subformula gets one auxiliary with
// full biconditional defining clauses, so CNF models projected onto the
// original variables are exactly the models of the asserted conjunction.
class CnfBuilder {
public:
    explicit CnfBuilder(const Vocabulary& vocab);
    explicit CnfBuilder(const std::vector<std::string>& names);

    // Asserts f. Every free symbol of f must be a declared original.
    void require(const Formula& f);
    // Raw clause over existing variables (used for model blocking).
    void add_clause(Clause clause);

    const CnfInstance& instance() const { return inst_; }
    CnfInstance take() { return std::move(inst_); }

private:
    int new_aux();
    // Returns the literal representing f, emitting defining clauses.
    Lit encode(const Formula& f);
    void emit(Clause clause);

    CnfInstance inst_;
};

// Equisatisfiable CNF of f; originals are free_symbols(f) in
// first-occurrence order, or the given vocabulary's declaration order.
CnfInstance to_cnf(const Formula& f);
CnfInstance to_cnf(const Formula& f, const Vocabulary& vocab);

// DIMACS rendering: `c` comments naming the original variables, a
// `p cnf <vars> <clauses>` header, one zero-terminated clause per line.
std::string to_dimacs(const CnfInstance& inst);

}  // namespace puzlog
