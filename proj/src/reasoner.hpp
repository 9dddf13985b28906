#pragma once

#include <map>
#include <string>
#include <vector>

#include "formula.hpp"
#include "solver.hpp"

namespace puzlog {

struct Fact {
    std::string label;
    Formula formula;
};

// A vocabulary plus labelled facts. Facts may only mention declared
// symbols; labels are unique.
class KnowledgeBase {
public:
    explicit KnowledgeBase(Vocabulary vocab) : vocab_(std::move(vocab)) {}

    void add_fact(std::string label, Formula f);

    const Vocabulary& vocab() const { return vocab_; }
    const std::vector<Fact>& facts() const { return facts_; }

private:
    Vocabulary vocab_;
    std::vector<Fact> facts_;
};

enum class QueryStatus { Entailed, Refuted, Unknown, KbInconsistent };

enum class BackboneStatus { ForcedTrue, ForcedFalse, Free };

// Symbol id -> forced/free status; only defined for consistent KBs.
using BackboneReport = std::map<std::string, BackboneStatus>;

// Candidate-vs-gold relation, graded rather than binary so that a wrong
// translation can be described (too strong, too weak, inconsistent, ...).
enum class EncodingRelation {
    Equivalent,
    CandidateStronger,
    CandidateWeaker,
    Overlapping,
    Disjoint,
    CandidateContradictory,
    CandidateTautological,
};

// True iff the conjunction of facts is satisfiable (an empty KB is).
bool consistent(const KnowledgeBase& kb);

// True iff kb ∧ ¬q is unsatisfiable. q must stay within kb's vocabulary.
bool entails(const KnowledgeBase& kb, const Formula& q);

// Three-valued query answer; an inconsistent KB is reported as such instead
// of letting it vacuously entail everything.
QueryStatus classify(const KnowledgeBase& kb, const Formula& q);

// Forced/free status of every declared symbol. Throws
// Error(InconsistentKb) when the KB has no models. Implemented with one
// initial model plus at most one entailment check per symbol: a symbol can
// only be forced to the value the first model gives it.
BackboneReport backbone(const KnowledgeBase& kb);

// True iff ¬(f ↔ g) is unsatisfiable over the union of their symbols.
bool equivalent(const Formula& f, const Formula& g);

// Classifies candidate against gold. Cases are tested in declaration
// order of EncodingRelation's conditions, which makes them exclusive:
// contradictory, tautological (unless gold is too), equivalent, strictly
// stronger, strictly weaker, disjoint, overlapping.
EncodingRelation relation(const Formula& candidate, const Formula& gold);

const char* to_string(QueryStatus s);
const char* to_string(BackboneStatus s);
const char* to_string(EncodingRelation r);

}  // namespace puzlog
