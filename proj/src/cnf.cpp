#include "cnf.hpp"

#include <algorithm>
#include <map>

namespace puzlog {

int CnfInstance::var_of(const std::string& id) const {
    for (int i = 0; i < original_count; ++i)
        if (names[i] == id) return i + 1;
    return 0;
}

CnfBuilder::CnfBuilder(const Vocabulary& vocab) {
    for (const auto& s : vocab) inst_.names.push_back(s.id);
    inst_.original_count = static_cast<int>(inst_.names.size());
}

CnfBuilder::CnfBuilder(const std::vector<std::string>& names) {
    inst_.names = names;
    inst_.original_count = static_cast<int>(names.size());
}

int CnfBuilder::new_aux() {
    ++inst_.aux_count;
    return inst_.var_count();
}

void CnfBuilder::emit(Clause clause) {
    // Drop duplicate literals (And(p, p) and friends).
    Clause out;
    for (const Lit& l : clause)
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    inst_.clauses.push_back(std::move(out));
}

void CnfBuilder::add_clause(Clause clause) {
    for (const Lit& l : clause)
        if (l.var < 1 || l.var > inst_.var_count())
            throw Error(ErrorCode::InvalidArgument, "clause literal out of range");
    inst_.clauses.push_back(std::move(clause));
}

Lit CnfBuilder::encode(const Formula& f) {
    switch (f.kind()) {
        case Connective::Atom: {
            int v = inst_.var_of(f.atom_id());
            if (v == 0)
                throw Error(ErrorCode::UnknownSymbol,
                            "symbol '" + f.atom_id() + "' is not declared in this instance");
            return pos(v);
        }
        case Connective::Const: {
            int a = new_aux();
            emit({f.const_value() ? pos(a) : negl(a)});
            return pos(a);
        }
        case Connective::Not: {
            Lit c = encode(f.args()[0]);
            int a = new_aux();
            emit({negl(a), {c.var, !c.neg}});
            emit({pos(a), c});
            return pos(a);
        }
        case Connective::And: {
            std::vector<Lit> cs;
            for (const auto& g : f.args()) cs.push_back(encode(g));
            int a = new_aux();
            Clause back{pos(a)};
            for (Lit c : cs) {
                emit({negl(a), c});
                back.push_back({c.var, !c.neg});
            }
            emit(std::move(back));
            return pos(a);
        }
        case Connective::Or: {
            std::vector<Lit> cs;
            for (const auto& g : f.args()) cs.push_back(encode(g));
            int a = new_aux();
            Clause fwd{negl(a)};
            for (Lit c : cs) {
                emit({pos(a), {c.var, !c.neg}});
                fwd.push_back(c);
            }
            emit(std::move(fwd));
            return pos(a);
        }
        case Connective::Xor: {
            Lit p = encode(f.args()[0]);
            Lit q = encode(f.args()[1]);
            Lit np{p.var, !p.neg}, nq{q.var, !q.neg};
            int a = new_aux();
            emit({negl(a), p, q});
            emit({negl(a), np, nq});
            emit({pos(a), np, q});
            emit({pos(a), p, nq});
            return pos(a);
        }
        case Connective::Implies: {
            Lit p = encode(f.args()[0]);
            Lit q = encode(f.args()[1]);
            Lit np{p.var, !p.neg}, nq{q.var, !q.neg};
            int a = new_aux();
            emit({negl(a), np, q});
            emit({pos(a), p});
            emit({pos(a), nq});
            return pos(a);
        }
        case Connective::Iff: {
            Lit p = encode(f.args()[0]);
            Lit q = encode(f.args()[1]);
            Lit np{p.var, !p.neg}, nq{q.var, !q.neg};
            int a = new_aux();
            emit({negl(a), np, q});
            emit({negl(a), p, nq});
            emit({pos(a), p, q});
            emit({pos(a), np, nq});
            return pos(a);
        }
    }
    throw Error(ErrorCode::Internal, "unreachable connective");
}

void CnfBuilder::require(const Formula& f) {
    emit({encode(f)});
}

CnfInstance to_cnf(const Formula& f) {
    CnfBuilder builder(free_symbols(f));
    builder.require(f);
    return builder.take();
}

CnfInstance to_cnf(const Formula& f, const Vocabulary& vocab) {
    CnfBuilder builder(vocab);
    builder.require(f);
    return builder.take();
}

std::string to_dimacs(const CnfInstance& inst) {
    std::string out;
    for (int i = 0; i < inst.original_count; ++i)
        out += "c var " + std::to_string(i + 1) + " = " + inst.names[i] + "\n";
    out += "p cnf " + std::to_string(inst.var_count()) + " " +
           std::to_string(inst.clauses.size()) + "\n";
    for (const auto& clause : inst.clauses) {
        for (const Lit& l : clause) {
            if (l.neg) out += '-';
            out += std::to_string(l.var);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

}  // namespace puzlog
