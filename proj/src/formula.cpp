#include "formula.hpp"

#include <algorithm>
#include <set>

namespace puzlog {

bool valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    auto head = [](char c) { return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(id.front())) return false;
    return std::all_of(id.begin() + 1, id.end(), tail);
}

Vocabulary::Vocabulary(std::vector<Symbol> symbols) {
    for (auto& s : symbols) add(std::move(s.id), std::move(s.gloss));
}

void Vocabulary::add(std::string id, std::string gloss) {
    if (!valid_identifier(id))
        throw Error(ErrorCode::InvalidArgument, "invalid symbol id '" + id + "'");
    if (index_.contains(id))
        throw Error(ErrorCode::Duplicate, "duplicate symbol id '" + id + "'");
    index_.emplace(id, static_cast<int>(symbols_.size()));
    symbols_.push_back(Symbol{std::move(id), std::move(gloss)});
}

bool Vocabulary::contains(std::string_view id) const {
    return index_.find(id) != index_.end();
}

int Vocabulary::index_of(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

Formula Formula::atom(std::string id) {
    if (!valid_identifier(id))
        throw Error(ErrorCode::InvalidArgument, "invalid atom id '" + id + "'");
    auto node = std::make_shared<Node>();
    node->kind = Connective::Atom;
    node->atom = std::move(id);
    return Formula(std::move(node));
}

Formula Formula::constant(bool value) {
    auto node = std::make_shared<Node>();
    node->kind = Connective::Const;
    node->value = value;
    return Formula(std::move(node));
}

Formula Formula::negate(Formula f) {
    auto node = std::make_shared<Node>();
    node->kind = Connective::Not;
    node->args.push_back(std::move(f));
    return Formula(std::move(node));
}

Formula Formula::conjunction(std::vector<Formula> args) {
    if (args.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "And requires at least two arguments");
    auto node = std::make_shared<Node>();
    node->kind = Connective::And;
    node->args = std::move(args);
    return Formula(std::move(node));
}

Formula Formula::disjunction(std::vector<Formula> args) {
    if (args.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "Or requires at least two arguments");
    auto node = std::make_shared<Node>();
    node->kind = Connective::Or;
    node->args = std::move(args);
    return Formula(std::move(node));
}

Formula Formula::exclusive_or(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Connective::Xor;
    node->args = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Connective::Implies;
    node->args = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::iff(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Connective::Iff;
    node->args = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

bool Formula::const_value() const {
    if (node_->kind != Connective::Const)
        throw Error(ErrorCode::Internal, "const_value() on a non-constant formula");
    return node_->value;
}

const std::string& Formula::atom_id() const {
    if (node_->kind != Connective::Atom)
        throw Error(ErrorCode::Internal, "atom_id() on a non-atom formula");
    return node_->atom;
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (node_->kind != other.node_->kind) return false;
    switch (node_->kind) {
        case Connective::Atom:
            return node_->atom == other.node_->atom;
        case Connective::Const:
            return node_->value == other.node_->value;
        default:
            return node_->args == other.node_->args;
    }
}

bool eval(const Formula& f, const Assignment& a) {
    switch (f.kind()) {
        case Connective::Atom: {
            auto it = a.find(f.atom_id());
            if (it == a.end())
                throw Error(ErrorCode::UnknownSymbol, "unbound symbol '" + f.atom_id() + "'");
            return it->second;
        }
        case Connective::Const:
            return f.const_value();
        case Connective::Not:
            return !eval(f.args()[0], a);
        case Connective::And:
            for (const auto& g : f.args())
                if (!eval(g, a)) return false;
            return true;
        case Connective::Or:
            for (const auto& g : f.args())
                if (eval(g, a)) return true;
            return false;
        case Connective::Xor:
            return eval(f.args()[0], a) != eval(f.args()[1], a);
        case Connective::Implies:
            return !eval(f.args()[0], a) || eval(f.args()[1], a);
        case Connective::Iff:
            return eval(f.args()[0], a) == eval(f.args()[1], a);
    }
    throw Error(ErrorCode::Internal, "unreachable connective");
}

static void collect_symbols(const Formula& f, std::vector<std::string>& out,
                            std::set<std::string>& seen) {
    if (f.kind() == Connective::Atom) {
        if (seen.insert(f.atom_id()).second) out.push_back(f.atom_id());
        return;
    }
    for (const auto& g : f.args()) collect_symbols(g, out, seen);
}

std::vector<std::string> free_symbols(const Formula& f) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_symbols(f, out, seen);
    return out;
}

static void check_atom_list(const std::vector<std::string>& atoms) {
    std::set<std::string> seen;
    for (const auto& id : atoms) {
        if (!valid_identifier(id))
            throw Error(ErrorCode::InvalidArgument, "invalid atom id '" + id + "'");
        if (!seen.insert(id).second)
            throw Error(ErrorCode::Duplicate, "duplicate atom '" + id + "'");
    }
}

// Disjunction that tolerates a single disjunct.
static Formula any_of(std::vector<Formula> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::disjunction(std::move(parts));
}

static Formula all_of(std::vector<Formula> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::conjunction(std::move(parts));
}

// Calls fn once per k-subset of {0..n-1}, indices ascending, subsets in
// lexicographic order.
template <typename Fn>
static void for_each_subset(int n, int k, Fn&& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

Formula exactly_one(const std::vector<std::string>& atoms) {
    if (atoms.empty())
        throw Error(ErrorCode::InvalidArgument, "exactly_one: empty atom list");
    check_atom_list(atoms);
    std::vector<Formula> cases;
    for (size_t i = 0; i < atoms.size(); ++i) {
        std::vector<Formula> lits;
        for (size_t j = 0; j < atoms.size(); ++j) {
            Formula a = Formula::atom(atoms[j]);
            lits.push_back(i == j ? std::move(a) : Formula::negate(std::move(a)));
        }
        cases.push_back(all_of(std::move(lits)));
    }
    return any_of(std::move(cases));
}

Formula at_least(int k, const std::vector<std::string>& atoms) {
    check_atom_list(atoms);
    const int n = static_cast<int>(atoms.size());
    if (k < 0 || k > n)
        throw Error(ErrorCode::Range, "at_least: k out of range");
    if (k == 0) return Formula::constant(true);
    std::vector<Formula> cases;
    for_each_subset(n, k, [&](const std::vector<int>& idx) {
        std::vector<Formula> lits;
        for (int i : idx) lits.push_back(Formula::atom(atoms[i]));
        cases.push_back(all_of(std::move(lits)));
    });
    return any_of(std::move(cases));
}

Formula at_most(int k, const std::vector<std::string>& atoms) {
    check_atom_list(atoms);
    const int n = static_cast<int>(atoms.size());
    if (k < 0 || k > n)
        throw Error(ErrorCode::Range, "at_most: k out of range");
    if (k == n) return Formula::constant(true);
    std::vector<Formula> bans;
    for_each_subset(n, k + 1, [&](const std::vector<int>& idx) {
        std::vector<Formula> lits;
        for (int i : idx) lits.push_back(Formula::atom(atoms[i]));
        bans.push_back(Formula::negate(all_of(std::move(lits))));
    });
    return all_of(std::move(bans));
}

}  // namespace puzlog
