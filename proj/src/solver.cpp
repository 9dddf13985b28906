#include "solver.hpp"

#include <algorithm>
#include <set>

namespace puzlog {

namespace {

constexpr int8_t kUnknown = -1;

class Dpll {
public:
    explicit Dpll(const CnfInstance& inst)
        : inst_(inst), val_(static_cast<size_t>(inst.var_count()) + 1, kUnknown) {}

    bool run(const std::vector<Lit>& assumptions) {
        for (const Lit& l : assumptions) {
            if (l.var < 1 || l.var > inst_.var_count())
                throw Error(ErrorCode::InvalidArgument, "assumption literal out of range");
            if (!assign(l)) return false;
        }
        return search();
    }

    bool value_or_false(int var) const { return val_[var] == 1; }

private:
    // Makes the literal true; false on contradiction with the current trail.
    bool assign(const Lit& l) {
        int8_t want = l.neg ? 0 : 1;
        if (val_[l.var] != kUnknown) return val_[l.var] == want;
        val_[l.var] = want;
        trail_.push_back(l.var);
        return true;
    }

    void undo_to(size_t mark) {
        while (trail_.size() > mark) {
            val_[trail_.back()] = kUnknown;
            trail_.pop_back();
        }
    }

    bool lit_true(const Lit& l) const { return val_[l.var] == (l.neg ? 0 : 1); }
    bool lit_false(const Lit& l) const { return val_[l.var] == (l.neg ? 1 : 0); }

    // Unit propagation to fixpoint; false on an empty clause.
    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Clause& clause : inst_.clauses) {
                const Lit* unit = nullptr;
                bool satisfied = false;
                int unassigned = 0;
                for (const Lit& l : clause) {
                    if (lit_true(l)) { satisfied = true; break; }
                    if (val_[l.var] == kUnknown) {
                        ++unassigned;
                        unit = &l;
                    }
                }
                if (satisfied) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    assign(*unit);
                    changed = true;
                }
            }
        }
        return true;
    }

    // Assigns every variable that occurs with a single polarity among
    // not-yet-satisfied clauses. Cannot conflict or create units.
    bool pure_pass() {
        int n = inst_.var_count();
        std::vector<uint8_t> seen(static_cast<size_t>(n) + 1, 0);  // bit0 pos, bit1 neg
        for (const Clause& clause : inst_.clauses) {
            bool satisfied = std::any_of(clause.begin(), clause.end(),
                                         [&](const Lit& l) { return lit_true(l); });
            if (satisfied) continue;
            for (const Lit& l : clause)
                if (val_[l.var] == kUnknown) seen[l.var] |= l.neg ? 2 : 1;
        }
        bool any = false;
        for (int v = 1; v <= n; ++v) {
            if (val_[v] != kUnknown) continue;
            if (seen[v] == 1) { assign(pos(v)); any = true; }
            else if (seen[v] == 2) { assign(negl(v)); any = true; }
        }
        return any;
    }

    bool all_satisfied() const {
        for (const Clause& clause : inst_.clauses) {
            bool satisfied = std::any_of(clause.begin(), clause.end(),
                                         [&](const Lit& l) { return lit_true(l); });
            if (!satisfied) return false;
        }
        return true;
    }

    int pick_branch() const {
        int n = inst_.var_count();
        std::vector<int> count(static_cast<size_t>(n) + 1, 0);
        for (const Clause& clause : inst_.clauses) {
            bool satisfied = std::any_of(clause.begin(), clause.end(),
                                         [&](const Lit& l) { return lit_true(l); });
            if (satisfied) continue;
            for (const Lit& l : clause)
                if (val_[l.var] == kUnknown) ++count[l.var];
        }
        int best = 0, best_count = 0;
        for (int v = 1; v <= n; ++v) {
            if (val_[v] == kUnknown && count[v] > best_count) {
                best = v;
                best_count = count[v];
            }
        }
        return best;  // 0 only if every clause is satisfied
    }

    bool search() {
        if (!propagate()) return false;
        while (pure_pass()) {
            if (!propagate()) return false;  // defensive; pures cannot conflict
        }
        if (all_satisfied()) return true;
        int v = pick_branch();
        size_t mark = trail_.size();
        assign(negl(v));
        if (search()) return true;
        undo_to(mark);
        assign(pos(v));
        if (search()) return true;
        undo_to(mark);
        return false;
    }

    const CnfInstance& inst_;
    std::vector<int8_t> val_;
    std::vector<int> trail_;
};

}  // namespace

SolveResult solve(const CnfInstance& inst, const std::vector<Lit>& assumptions) {
    Dpll dpll(inst);
    SolveResult result;
    result.sat = dpll.run(assumptions);
    if (!result.sat) return result;
    result.full.resize(inst.var_count());
    for (int v = 1; v <= inst.var_count(); ++v) result.full[v - 1] = dpll.value_or_false(v);
    for (int i = 0; i < inst.original_count; ++i)
        result.model[inst.names[i]] = result.full[i];
    return result;
}

ModelEnumeration enumerate_models(const Formula& f, const Vocabulary& projection, int limit) {
    if (limit < 1) throw Error(ErrorCode::Range, "enumerate_models: limit must be >= 1");

    std::vector<std::string> names;
    for (const auto& s : projection) names.push_back(s.id);
    std::set<std::string> known(names.begin(), names.end());
    for (const auto& id : free_symbols(f))
        if (!known.contains(id)) names.push_back(id);
    const int projected = projection.size();

    CnfBuilder builder(names);
    builder.require(f);
    CnfInstance inst = builder.take();

    ModelEnumeration out;
    while (true) {
        SolveResult r = solve(inst);
        if (!r.sat) break;
        if (static_cast<int>(out.models.size()) == limit) {
            out.limit_exceeded = true;
            break;
        }
        Assignment model;
        Clause block;
        for (int i = 0; i < projected; ++i) {
            model[names[i]] = r.full[i];
            block.push_back(r.full[i] ? negl(i + 1) : pos(i + 1));
        }
        out.models.push_back(std::move(model));
        if (projected == 0) break;  // single empty model; nothing to block
        inst.clauses.push_back(std::move(block));
    }
    return out;
}

}  // namespace puzlog
