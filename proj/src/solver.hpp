#pragma once

#include <vector>

#include "cnf.hpp"
#include "formula.hpp"

namespace puzlog {

struct SolveResult {
    bool sat = false;
    // Total over the instance originals; empty when unsat.
    Assignment model;
    // Full internal assignment (originals + auxiliaries), full[v-1] is the
    // value of var v. Exposed so callers can re-check every clause.
    std::vector<bool> full;
};

// DPLL with unit propagation and pure-literal elimination. Deterministic:
// branching picks the unassigned variable with the highest occurrence count
// among not-yet-satisfied clauses, ties broken by lowest index, and tries
// false before true. Unconstrained variables come out false.
SolveResult solve(const CnfInstance& inst, const std::vector<Lit>& assumptions = {});

struct ModelEnumeration {
    std::vector<Assignment> models;
    bool limit_exceeded = false;
};

// All distinct models of f projected onto `projection`, in solver order, up
// to `limit`. Symbols of f outside the projection behave like auxiliaries:
// they are solved for but never blocked, so each projected model appears
// once. limit_exceeded is set when at least one further model exists.
ModelEnumeration enumerate_models(const Formula& f, const Vocabulary& projection, int limit);

}  // namespace puzlog
