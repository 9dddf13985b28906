#include "reasoner.hpp"

#include <set>

namespace puzlog {

void KnowledgeBase::add_fact(std::string label, Formula f) {
    for (const auto& fact : facts_)
        if (fact.label == label)
            throw Error(ErrorCode::Duplicate, "duplicate fact label '" + label + "'");
    for (const auto& id : free_symbols(f))
        if (!vocab_.contains(id))
            throw Error(ErrorCode::VocabViolation,
                        "fact '" + label + "' uses undeclared symbol '" + id + "'");
    facts_.push_back(Fact{std::move(label), std::move(f)});
}

namespace {

CnfBuilder kb_builder(const KnowledgeBase& kb) {
    CnfBuilder builder(kb.vocab());
    for (const auto& fact : kb.facts()) builder.require(fact.formula);
    return builder;
}

bool sat(const CnfBuilder& builder) { return solve(builder.instance()).sat; }

void check_query_symbols(const KnowledgeBase& kb, const Formula& q) {
    for (const auto& id : free_symbols(q))
        if (!kb.vocab().contains(id))
            throw Error(ErrorCode::UnknownSymbol,
                        "query uses undeclared symbol '" + id + "'");
}

}  // namespace

bool consistent(const KnowledgeBase& kb) {
    return sat(kb_builder(kb));
}

bool entails(const KnowledgeBase& kb, const Formula& q) {
    check_query_symbols(kb, q);
    CnfBuilder builder = kb_builder(kb);
    builder.require(Formula::negate(q));
    return !sat(builder);
}

QueryStatus classify(const KnowledgeBase& kb, const Formula& q) {
    check_query_symbols(kb, q);
    if (!consistent(kb)) return QueryStatus::KbInconsistent;
    if (entails(kb, q)) return QueryStatus::Entailed;
    if (entails(kb, Formula::negate(q))) return QueryStatus::Refuted;
    return QueryStatus::Unknown;
}

BackboneReport backbone(const KnowledgeBase& kb) {
    CnfBuilder builder = kb_builder(kb);
    SolveResult first = solve(builder.instance());
    if (!first.sat)
        throw Error(ErrorCode::InconsistentKb, "backbone of an inconsistent KB");

    BackboneReport report;
    for (const auto& symbol : kb.vocab()) {
        bool seed = first.model.at(symbol.id);
        // Only the polarity seen in the first model can be forced.
        Formula flipped = seed ? Formula::negate(Formula::atom(symbol.id))
                               : Formula::atom(symbol.id);
        CnfBuilder probe = kb_builder(kb);
        probe.require(flipped);
        if (sat(probe)) {
            report[symbol.id] = BackboneStatus::Free;
        } else {
            report[symbol.id] = seed ? BackboneStatus::ForcedTrue : BackboneStatus::ForcedFalse;
        }
    }
    return report;
}

bool equivalent(const Formula& f, const Formula& g) {
    CnfInstance inst = to_cnf(Formula::negate(Formula::iff(f, g)));
    return !solve(inst).sat;
}

EncodingRelation relation(const Formula& candidate, const Formula& gold) {
    auto satisfiable = [](const Formula& f) { return solve(to_cnf(f)).sat; };

    bool cand_sat = satisfiable(candidate);
    if (!cand_sat) return EncodingRelation::CandidateContradictory;

    bool cand_taut = !satisfiable(Formula::negate(candidate));
    bool gold_taut = !satisfiable(Formula::negate(gold));
    if (cand_taut && !gold_taut) return EncodingRelation::CandidateTautological;

    if (equivalent(candidate, gold)) return EncodingRelation::Equivalent;

    auto entails_ff = [&](const Formula& a, const Formula& b) {
        return !satisfiable(Formula::conjunction(
            {a, Formula::negate(b)}));
    };
    if (entails_ff(candidate, gold)) return EncodingRelation::CandidateStronger;
    if (entails_ff(gold, candidate)) return EncodingRelation::CandidateWeaker;

    if (!satisfiable(Formula::conjunction({candidate, gold})))
        return EncodingRelation::Disjoint;
    return EncodingRelation::Overlapping;
}

const char* to_string(QueryStatus s) {
    switch (s) {
        case QueryStatus::Entailed: return "entailed";
        case QueryStatus::Refuted: return "refuted";
        case QueryStatus::Unknown: return "unknown";
        case QueryStatus::KbInconsistent: return "kb_inconsistent";
    }
    return "?";
}

const char* to_string(BackboneStatus s) {
    switch (s) {
        case BackboneStatus::ForcedTrue: return "forced_true";
        case BackboneStatus::ForcedFalse: return "forced_false";
        case BackboneStatus::Free: return "free";
    }
    return "?";
}

const char* to_string(EncodingRelation r) {
    switch (r) {
        case EncodingRelation::Equivalent: return "equivalent";
        case EncodingRelation::CandidateStronger: return "candidate_stronger";
        case EncodingRelation::CandidateWeaker: return "candidate_weaker";
        case EncodingRelation::Overlapping: return "overlapping";
        case EncodingRelation::Disjoint: return "disjoint";
        case EncodingRelation::CandidateContradictory: return "candidate_contradictory";
        case EncodingRelation::CandidateTautological: return "candidate_tautological";
    }
    return "?";
}

}  // namespace puzlog
