/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/chc.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <climits>
#include <numeric>

namespace tempohorn::chc {

// ---------------------------------------------------------------------------
// LinearTerm

LinearTerm LinearTerm::var(const std::string & name, Int coeff) {
    LinearTerm t;
    t.insert(name, coeff);
    return t;
}

void LinearTerm::insert(const std::string & v, Int c) {
    if (c == 0) return;
    auto [it, fresh] = coeffs_.try_emplace(v, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) coeffs_.erase(it);
    }
}

Int LinearTerm::coefficient(const std::string & v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0 : it->second;
}

LinearTerm LinearTerm::operator+(const LinearTerm & o) const {
    LinearTerm t = *this;
    t.constant_ += o.constant_;
    for (auto const & [v, c] : o.coeffs_) t.insert(v, c);
    return t;
}

LinearTerm LinearTerm::operator-(const LinearTerm & o) const { return *this + o.scaled(-1); }

LinearTerm LinearTerm::scaled(Int k) const {
    LinearTerm t;
    if (k == 0) return t;
    t.constant_ = constant_ * k;
    for (auto const & [v, c] : coeffs_) t.coeffs_[v] = c * k;
    return t;
}

LinearTerm LinearTerm::substituted(const std::string & v, const LinearTerm & repl) const {
    auto it = coeffs_.find(v);
    if (it == coeffs_.end()) return *this;
    Int k = it->second;
    LinearTerm t = *this;
    t.coeffs_.erase(v);
    return t + repl.scaled(k);
}

LinearTerm LinearTerm::renamed(const std::map<std::string, std::string> & renaming) const {
    LinearTerm t;
    t.constant_ = constant_;
    for (auto const & [v, c] : coeffs_) {
        auto it = renaming.find(v);
        t.insert(it == renaming.end() ? v : it->second, c);
    }
    return t;
}

Int LinearTerm::evaluate(const std::map<std::string, Int> & env) const {
    Int acc = constant_;
    for (auto const & [v, c] : coeffs_) {
        auto it = env.find(v);
        if (it == env.end()) throw std::logic_error("evaluate: unbound variable " + v);
        acc += c * it->second;
    }
    return acc;
}

void LinearTerm::collectVars(std::set<std::string> & out) const {
    for (auto const & [v, c] : coeffs_) out.insert(v);
}

// ---------------------------------------------------------------------------
// LinearConstraint

namespace {

Int floorDiv(Int a, Int b) {
    assert(b > 0);
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

// Canonicalizes one conjunct in place. Returns false if it is a ground
// contradiction; returns true with ok=false meaning "drop, trivially true".
enum class ConjunctState { Keep, DropTrue, False };

ConjunctState canonicalizeConjunct(Conjunct & c) {
    LinearTerm & p = c.poly;
    if (p.isConstant()) {
        if (c.kind == Conjunct::Kind::Ge0)
            return p.constant() >= 0 ? ConjunctState::DropTrue : ConjunctState::False;
        return p.constant() == 0 ? ConjunctState::DropTrue : ConjunctState::False;
    }
    Int g = 0;
    for (auto const & [v, k] : p.coefficients()) g = std::gcd(g, k < 0 ? -k : k);
    if (c.kind == Conjunct::Kind::Eq0) {
        if (p.constant() % g != 0) return ConjunctState::False; // no integer solution
        LinearTerm q;
        for (auto const & [v, k] : p.coefficients()) q = q + LinearTerm::var(v, k / g);
        q = q + LinearTerm(p.constant() / g);
        // sign convention: leading (first in variable order) coefficient positive
        if (q.coefficients().begin()->second < 0) q = q.scaled(-1);
        p = q;
    } else {
        // integer tightening: (g*q + c >= 0) <=> (q + floor(c/g) >= 0)
        LinearTerm q;
        for (auto const & [v, k] : p.coefficients()) q = q + LinearTerm::var(v, k / g);
        q = q + LinearTerm(floorDiv(p.constant(), g));
        p = q;
    }
    return ConjunctState::Keep;
}

} // namespace

LinearConstraint LinearConstraint::falsum() {
    LinearConstraint c;
    c.conjuncts_.push_back({Conjunct::Kind::Ge0, LinearTerm(-1)});
    return c;
}

void LinearConstraint::add(const AtomicConstraint & a) {
    LinearTerm d = a.lhs - a.rhs;
    switch (a.rel) {
        case Rel::Eq: conjuncts_.push_back({Conjunct::Kind::Eq0, d}); break;
        case Rel::Neq: disequalities_.push_back(d); break;
        case Rel::Ge: conjuncts_.push_back({Conjunct::Kind::Ge0, d}); break;
        case Rel::Le: conjuncts_.push_back({Conjunct::Kind::Ge0, -d}); break;
        // strict inequalities are exact over Z after tightening by one
        case Rel::Gt: conjuncts_.push_back({Conjunct::Kind::Ge0, d - LinearTerm(1)}); break;
        case Rel::Lt: conjuncts_.push_back({Conjunct::Kind::Ge0, (-d) - LinearTerm(1)}); break;
    }
}

void LinearConstraint::addConjunct(Conjunct c) { conjuncts_.push_back(std::move(c)); }

LinearConstraint LinearConstraint::conjoin(const LinearConstraint & o) const {
    LinearConstraint c = *this;
    c.conjuncts_.insert(c.conjuncts_.end(), o.conjuncts_.begin(), o.conjuncts_.end());
    c.disequalities_.insert(c.disequalities_.end(), o.disequalities_.begin(),
                            o.disequalities_.end());
    c.approximate_ = approximate_ || o.approximate_;
    return c;
}

void LinearConstraint::normalize() {
    std::vector<Conjunct> out;
    for (Conjunct c : conjuncts_) {
        switch (canonicalizeConjunct(c)) {
            case ConjunctState::Keep: out.push_back(std::move(c)); break;
            case ConjunctState::DropTrue: break;
            case ConjunctState::False:
                conjuncts_ = falsum().conjuncts_;
                disequalities_.clear();
                return;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    conjuncts_ = std::move(out);

    std::vector<LinearTerm> ds;
    for (auto & d : disequalities_) {
        if (d.isConstant()) {
            if (d.constant() == 0) { // 0 != 0
                conjuncts_ = falsum().conjuncts_;
                disequalities_.clear();
                return;
            }
            continue;
        }
        LinearTerm q = d;
        if (q.coefficients().begin()->second < 0) q = q.scaled(-1);
        ds.push_back(std::move(q));
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    disequalities_ = std::move(ds);
}

LinearConstraint LinearConstraint::normalized() const {
    LinearConstraint c = *this;
    c.normalize();
    return c;
}

bool LinearConstraint::isTriviallyFalse() const {
    for (auto const & c : conjuncts_) {
        if (!c.poly.isConstant()) continue;
        if (c.kind == Conjunct::Kind::Ge0 && c.poly.constant() < 0) return true;
        if (c.kind == Conjunct::Kind::Eq0 && c.poly.constant() != 0) return true;
    }
    return false;
}

std::set<std::string> LinearConstraint::variables() const {
    std::set<std::string> vs;
    for (auto const & c : conjuncts_) c.poly.collectVars(vs);
    for (auto const & d : disequalities_) d.collectVars(vs);
    return vs;
}

bool LinearConstraint::evaluate(const std::map<std::string, Int> & env) const {
    for (auto const & c : conjuncts_) {
        Int v = c.poly.evaluate(env);
        if (c.kind == Conjunct::Kind::Ge0 ? v < 0 : v != 0) return false;
    }
    for (auto const & d : disequalities_)
        if (d.evaluate(env) == 0) return false;
    return true;
}

LinearConstraint LinearConstraint::substituted(const std::string & v,
                                               const LinearTerm & repl) const {
    LinearConstraint c;
    c.approximate_ = approximate_;
    for (auto const & cj : conjuncts_) c.conjuncts_.push_back({cj.kind, cj.poly.substituted(v, repl)});
    for (auto const & d : disequalities_) c.disequalities_.push_back(d.substituted(v, repl));
    return c;
}

LinearConstraint LinearConstraint::renamed(const std::map<std::string, std::string> & r) const {
    LinearConstraint c;
    c.approximate_ = approximate_;
    for (auto const & cj : conjuncts_) c.conjuncts_.push_back({cj.kind, cj.poly.renamed(r)});
    for (auto const & d : disequalities_) c.disequalities_.push_back(d.renamed(r));
    return c;
}

// ---------------------------------------------------------------------------
// Satisfiability and projection

std::vector<LinearConstraint> splitDisequalities(const LinearConstraint & c) {
    std::vector<LinearConstraint> cases;
    LinearConstraint base;
    for (auto const & cj : c.conjuncts()) base.addConjunct(cj);
    if (c.approximate()) base.markApproximate();
    cases.push_back(std::move(base));
    for (auto const & d : c.disequalities()) {
        std::vector<LinearConstraint> next;
        for (auto const & k : cases) {
            LinearConstraint lo = k, hi = k;
            lo.addConjunct({Conjunct::Kind::Ge0, d - LinearTerm(1)});        // d >= 1
            hi.addConjunct({Conjunct::Kind::Ge0, (-d) - LinearTerm(1)});     // d <= -1
            next.push_back(std::move(lo));
            next.push_back(std::move(hi));
        }
        cases = std::move(next);
    }
    for (auto & k : cases) k.normalize();
    return cases;
}

namespace {

constexpr std::size_t kFmConjunctCap = 20000;

// Fourier-Motzkin satisfiability over the integers on a convex, normalized
// constraint. Exact as long as every elimination pairs a unit coefficient;
// otherwise the sat answer degrades to SatLikely (unsat stays exact: the
// real shadow over-approximates the integer solution set).
SatResult satConvex(LinearConstraint work) {
    bool exact = true;
    for (;;) {
        work.normalize();
        if (work.isTriviallyFalse()) return SatResult::UnsatExact;

        // substitute away a variable defined by a unit-coefficient equality
        bool substituted = false;
        for (auto const & cj : work.conjuncts()) {
            if (cj.kind != Conjunct::Kind::Eq0) continue;
            for (auto const & [v, k] : cj.poly.coefficients()) {
                if (k != 1 && k != -1) continue;
                // poly = k*v + rest = 0  =>  v = -rest/k
                LinearTerm rest = cj.poly - LinearTerm::var(v, k);
                LinearTerm repl = rest.scaled(k == 1 ? -1 : 1);
                work = work.substituted(v, repl);
                substituted = true;
                break;
            }
            if (substituted) break;
        }
        if (substituted) continue;

        // remaining non-unit equalities: keep both bounds, exactness is lost
        // (the gcd divisibility test already ran during normalization)
        {
            LinearConstraint rewritten;
            bool any = false;
            for (auto const & cj : work.conjuncts()) {
                if (cj.kind == Conjunct::Kind::Eq0 && !cj.poly.isConstant()) {
                    rewritten.addConjunct({Conjunct::Kind::Ge0, cj.poly});
                    rewritten.addConjunct({Conjunct::Kind::Ge0, -cj.poly});
                    any = true;
                    exact = false;
                } else {
                    rewritten.addConjunct(cj);
                }
            }
            if (any) {
                work = rewritten;
                continue;
            }
        }
        break;
    }

    // pure inequalities: eliminate variables one at a time
    std::vector<Conjunct> cs(work.conjuncts().begin(), work.conjuncts().end());
    for (;;) {
        std::set<std::string> vars;
        for (auto const & c : cs) c.poly.collectVars(vars);
        if (vars.empty()) break;

        // pick the variable with the fewest occurrences
        std::string best;
        std::size_t bestCount = SIZE_MAX;
        for (auto const & v : vars) {
            std::size_t n = 0;
            for (auto const & c : cs)
                if (c.poly.coefficient(v) != 0) ++n;
            if (n < bestCount) {
                bestCount = n;
                best = v;
            }
        }

        std::vector<std::pair<Int, LinearTerm>> lowers, uppers; // (coeff>0, rest)
        std::vector<Conjunct> rest;
        for (auto const & c : cs) {
            Int k = c.poly.coefficient(best);
            if (k == 0) {
                rest.push_back(c);
            } else if (k > 0) {
                lowers.emplace_back(k, c.poly - LinearTerm::var(best, k));
            } else {
                uppers.emplace_back(-k, c.poly - LinearTerm::var(best, k));
            }
        }
        for (auto const & [a, p] : lowers) {
            for (auto const & [b, q] : uppers) {
                if (a != 1 && b != 1) exact = false;
                Conjunct c{Conjunct::Kind::Ge0, p.scaled(b) + q.scaled(a)};
                switch (canonicalizeConjunct(c)) {
                    case ConjunctState::Keep: rest.push_back(std::move(c)); break;
                    case ConjunctState::DropTrue: break;
                    case ConjunctState::False: return SatResult::UnsatExact;
                }
            }
        }
        std::sort(rest.begin(), rest.end());
        rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
        if (rest.size() > kFmConjunctCap) return SatResult::SatLikely; // give up, stay sound
        cs = std::move(rest);
    }
    for (auto const & c : cs) {
        assert(c.poly.isConstant());
        if (c.kind == Conjunct::Kind::Ge0 ? c.poly.constant() < 0 : c.poly.constant() != 0)
            return SatResult::UnsatExact;
    }
    return exact ? SatResult::SatExact : SatResult::SatLikely;
}

} // namespace

SatResult is_satisfiable(const LinearConstraint & c) {
    SatResult ret = SatResult::UnsatExact;
    for (auto const & k : splitDisequalities(c)) {
        switch (satConvex(k)) {
            case SatResult::SatExact: return SatResult::SatExact;
            case SatResult::SatLikely: ret = SatResult::SatLikely; break;
            case SatResult::UnsatExact: break;
        }
    }
    return ret;
}

bool implies(const LinearConstraint & a, const LinearConstraint & b) {
    if (!b.disequalities().empty())
        throw std::logic_error("implies: right-hand side must be disequality-free");
    for (auto const & acase : splitDisequalities(a)) {
        for (auto const & cj : b.conjuncts()) {
            if (cj.kind == Conjunct::Kind::Ge0) {
                LinearConstraint neg = acase;
                neg.addConjunct({Conjunct::Kind::Ge0, (-cj.poly) - LinearTerm(1)});
                if (is_satisfiable(neg) != SatResult::UnsatExact) return false;
            } else {
                LinearConstraint above = acase, below = acase;
                above.addConjunct({Conjunct::Kind::Ge0, cj.poly - LinearTerm(1)});
                below.addConjunct({Conjunct::Kind::Ge0, (-cj.poly) - LinearTerm(1)});
                if (is_satisfiable(above) != SatResult::UnsatExact) return false;
                if (is_satisfiable(below) != SatResult::UnsatExact) return false;
            }
        }
    }
    return true;
}

bool equivalent(const LinearConstraint & a, const LinearConstraint & b) {
    return implies(a, b) && implies(b, a);
}

LinearConstraint project(const LinearConstraint & c, const std::set<std::string> & keep) {
    if (!c.disequalities().empty())
        throw std::logic_error("project: constraint must be disequality-free");
    LinearConstraint work = c.normalized();
    bool approx = c.approximate();
    if (work.isTriviallyFalse()) return LinearConstraint::falsum();

    // phase 1: eliminate by substituting unit-coefficient equalities (exact)
    for (;;) {
        bool substituted = false;
        for (auto const & cj : work.conjuncts()) {
            if (cj.kind != Conjunct::Kind::Eq0) continue;
            for (auto const & [v, k] : cj.poly.coefficients()) {
                if (keep.count(v) || (k != 1 && k != -1)) continue;
                LinearTerm rest = cj.poly - LinearTerm::var(v, k);
                work = work.substituted(v, rest.scaled(k == 1 ? -1 : 1));
                work.normalize();
                if (work.isTriviallyFalse()) return LinearConstraint::falsum();
                substituted = true;
                break;
            }
            if (substituted) break;
        }
        if (!substituted) break;
    }

    // phase 2: remaining eliminable variables go through Fourier-Motzkin;
    // non-unit coefficients make the result an over-approximation
    std::vector<Conjunct> cs(work.conjuncts().begin(), work.conjuncts().end());
    for (;;) {
        std::set<std::string> vars;
        for (auto const & cj : cs) cj.poly.collectVars(vars);
        std::string victim;
        for (auto const & v : vars)
            if (!keep.count(v)) {
                victim = v;
                break;
            }
        if (victim.empty()) break;

        std::vector<Conjunct> rewritten;
        for (auto const & cj : cs) {
            if (cj.kind == Conjunct::Kind::Eq0 && cj.poly.coefficient(victim) != 0) {
                rewritten.push_back({Conjunct::Kind::Ge0, cj.poly});
                rewritten.push_back({Conjunct::Kind::Ge0, -cj.poly});
                approx = true; // integer divisibility information is dropped
            } else {
                rewritten.push_back(cj);
            }
        }
        std::vector<std::pair<Int, LinearTerm>> lowers, uppers;
        std::vector<Conjunct> rest;
        for (auto const & cj : rewritten) {
            Int k = cj.poly.coefficient(victim);
            if (k == 0)
                rest.push_back(cj);
            else if (k > 0)
                lowers.emplace_back(k, cj.poly - LinearTerm::var(victim, k));
            else
                uppers.emplace_back(-k, cj.poly - LinearTerm::var(victim, k));
        }
        for (auto const & [a, p] : lowers)
            for (auto const & [b, q] : uppers) {
                if (a != 1 && b != 1) approx = true;
                Conjunct combined{Conjunct::Kind::Ge0, p.scaled(b) + q.scaled(a)};
                switch (canonicalizeConjunct(combined)) {
                    case ConjunctState::Keep: rest.push_back(std::move(combined)); break;
                    case ConjunctState::DropTrue: break;
                    case ConjunctState::False: return LinearConstraint::falsum();
                }
            }
        cs = std::move(rest);
        if (cs.size() > kFmConjunctCap)
            throw std::logic_error("project: constraint blow-up");
    }

    LinearConstraint out;
    for (auto & cj : cs) out.addConjunct(std::move(cj));
    out.normalize();
    if (approx) out.markApproximate();
    return out;
}

// ---------------------------------------------------------------------------
// ClauseSet

void ClauseSet::declare(const std::string & pred, int arity) {
    auto [it, fresh] = declaredArity.try_emplace(pred, arity);
    if (!fresh && it->second != arity)
        throw std::logic_error("predicate " + pred + " used with arities "
                               + std::to_string(it->second) + " and " + std::to_string(arity));
}

void ClauseSet::collectDeclarations() {
    for (auto const & cl : clauses) {
        if (cl.head) declare(cl.head->pred, static_cast<int>(cl.head->args.size()));
        for (auto const & a : cl.body) declare(a.pred, static_cast<int>(a.args.size()));
    }
}

std::vector<std::string> ClauseSet::predicates() const {
    std::vector<std::string> ps;
    for (auto const & [p, a] : declaredArity) ps.push_back(p);
    return ps;
}

// ---------------------------------------------------------------------------
// Clause normalization

namespace {

HornClause renameClause(const HornClause & cl, const std::map<std::string, std::string> & r) {
    HornClause out;
    auto mapAtom = [&](const Atom & a) {
        Atom b;
        b.pred = a.pred;
        for (auto const & arg : a.args) {
            if (argIsVar(arg)) {
                auto it = r.find(argVar(arg));
                b.args.push_back(it == r.end() ? arg : Arg(it->second));
            } else {
                b.args.push_back(arg);
            }
        }
        return b;
    };
    if (cl.head) out.head = mapAtom(*cl.head);
    for (auto const & a : cl.body) out.body.push_back(mapAtom(a));
    out.constraint = cl.constraint.renamed(r);
    return out;
}

// Renames every variable to V1..Vn in first-occurrence order (head, then body
// atoms, then constraint in canonical conjunct order).
HornClause canonicalRename(const HornClause & cl) {
    std::map<std::string, std::string> r;
    int n = 0;
    auto visit = [&](const std::string & v) {
        if (!r.count(v)) r[v] = "V" + std::to_string(++n);
    };
    auto visitAtom = [&](const Atom & a) {
        for (auto const & arg : a.args)
            if (argIsVar(arg)) visit(argVar(arg));
    };
    if (cl.head) visitAtom(*cl.head);
    for (auto const & a : cl.body) visitAtom(a);
    LinearConstraint norm = cl.constraint.normalized();
    for (auto const & cj : norm.conjuncts())
        for (auto const & [v, k] : cj.poly.coefficients()) visit(v);
    for (auto const & d : norm.disequalities())
        for (auto const & [v, k] : d.coefficients()) visit(v);
    HornClause out = renameClause(cl, r);
    out.constraint.normalize();
    return out;
}

} // namespace

HornClause normalize_clause(const HornClause & cl) {
    HornClause work = cl;
    VarGen gen("_h");

    // purify the head: arguments become distinct variables
    if (work.head) {
        std::set<std::string> seen;
        for (auto & arg : work.head->args) {
            if (argIsVar(arg) && !seen.count(argVar(arg))) {
                seen.insert(argVar(arg));
                continue;
            }
            std::string fresh = gen.fresh();
            LinearTerm rhs = argIsVar(arg) ? LinearTerm::var(argVar(arg)) : LinearTerm(argInt(arg));
            work.constraint.addEq(LinearTerm::var(fresh), rhs);
            arg = fresh;
            seen.insert(fresh);
        }
    }

    std::set<std::string> headVars;
    if (work.head)
        for (auto const & arg : work.head->args) headVars.insert(argVar(arg));
    std::set<std::string> atomVars;
    for (auto const & a : work.body)
        for (auto const & arg : a.args)
            if (argIsVar(arg)) atomVars.insert(argVar(arg));

    work.constraint.normalize();

    // substitute away equality-defined local variables: locals not used as atom
    // arguments can take any defining term; locals that are atom arguments may
    // only be renamed to another variable
    for (;;) {
        bool changed = false;
        for (auto const & cj : work.constraint.conjuncts()) {
            if (cj.kind != Conjunct::Kind::Eq0) continue;
            for (auto const & [v, k] : cj.poly.coefficients()) {
                if (headVars.count(v) || (k != 1 && k != -1)) continue;
                LinearTerm repl = (cj.poly - LinearTerm::var(v, k)).scaled(k == 1 ? -1 : 1);
                if (atomVars.count(v)) {
                    // only a pure variable rename keeps atom arguments well-formed
                    if (repl.constant() != 0 || repl.coefficients().size() != 1
                        || repl.coefficients().begin()->second != 1)
                        continue;
                    const std::string & w = repl.coefficients().begin()->first;
                    if (v == w) continue;
                    std::map<std::string, std::string> r{{v, w}};
                    work = renameClause(work, r);
                    atomVars.erase(v);
                    atomVars.insert(w);
                } else {
                    work.constraint = work.constraint.substituted(v, repl);
                }
                work.constraint.normalize();
                changed = true;
                break;
            }
            if (changed) break;
        }
        if (!changed) break;
    }

    std::stable_sort(work.body.begin(), work.body.end(), [](const Atom & a, const Atom & b) {
        if (a.pred != b.pred) return a.pred < b.pred;
        return a.args.size() < b.args.size();
    });
    return canonicalRename(work);
}

void normalizeClauseSet(ClauseSet & cs) {
    std::vector<HornClause> out;
    for (auto const & cl : cs.clauses) {
        HornClause norm = normalize_clause(cl);
        if (norm.constraint.disequalities().empty()) {
            out.push_back(std::move(norm));
            continue;
        }
        for (auto const & k : splitDisequalities(norm.constraint)) {
            HornClause copy = norm;
            copy.constraint = k;
            out.push_back(normalize_clause(copy));
        }
    }
    cs.clauses = std::move(out);
    cs.collectDeclarations();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Pretty variable names A, B, ..., Z, A1, B1, ... assigned per clause in
// first-occurrence order, mirroring the usual clause listings.
class NamePool {
public:
    const std::string & name(const std::string & internal) {
        auto it = names_.find(internal);
        if (it != names_.end()) return it->second;
        int i = n_++;
        std::string pretty(1, static_cast<char>('A' + i % 26));
        if (i >= 26) pretty += std::to_string(i / 26);
        return names_.emplace(internal, std::move(pretty)).first->second;
    }

private:
    std::map<std::string, std::string> names_;
    int n_ = 0;
};

std::string printMonomials(const std::vector<std::pair<std::string, Int>> & ms, Int c,
                           NamePool & pool) {
    std::string s;
    bool first = true;
    for (auto const & [v, k] : ms) {
        if (!first) s += "+";
        if (k != 1) s += std::to_string(k) + "*";
        s += pool.name(v);
        first = false;
    }
    if (c != 0 || first) {
        if (!first && c > 0) s += "+";
        s += std::to_string(c);
    }
    return s;
}

// Renders poly R 0 in the var-on-the-left style: B-C=0 prints as B=C,
// -D+6>=0 prints as D=<6.
std::string printConjunct(const Conjunct & cj, NamePool & pool) {
    std::vector<std::pair<std::string, Int>> pos, neg;
    for (auto const & [v, k] : cj.poly.coefficients())
        (k > 0 ? pos : neg).emplace_back(v, k > 0 ? k : -k);
    Int c = cj.poly.constant();
    Int posC = c > 0 ? c : 0, negC = c < 0 ? -c : 0;
    const char * rel = cj.kind == Conjunct::Kind::Eq0 ? "=" : ">=";
    if (cj.kind == Conjunct::Kind::Ge0 && pos.empty() && !neg.empty()) {
        // keep variables on the left: neg =< posC
        return printMonomials(neg, 0, pool) + "=<" + std::to_string(posC);
    }
    std::string lhs = printMonomials(pos, posC, pool);
    std::string rhs = printMonomials(neg, negC, pool);
    return lhs + rel + rhs;
}

std::string printDisequality(const LinearTerm & d, NamePool & pool) {
    std::vector<std::pair<std::string, Int>> pos, neg;
    for (auto const & [v, k] : d.coefficients()) (k > 0 ? pos : neg).emplace_back(v, k > 0 ? k : -k);
    Int c = d.constant();
    std::string lhs = printMonomials(pos, c > 0 ? c : 0, pool);
    std::string rhs = printMonomials(neg, c < 0 ? -c : 0, pool);
    return lhs + "=\\=" + rhs;
}

std::string printAtom(const Atom & a, NamePool & pool) {
    std::string s = a.pred;
    if (a.args.empty()) return s;
    s += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ",";
        s += argIsVar(a.args[i]) ? pool.name(argVar(a.args[i])) : std::to_string(argInt(a.args[i]));
    }
    s += ")";
    return s;
}

} // namespace

std::string printClause(const HornClause & cl) {
    NamePool pool;
    std::string s = cl.head ? printAtom(*cl.head, pool) : "false";
    std::vector<std::string> items;
    for (auto const & cj : cl.constraint.conjuncts()) items.push_back(printConjunct(cj, pool));
    for (auto const & d : cl.constraint.disequalities()) items.push_back(printDisequality(d, pool));
    for (auto const & a : cl.body) items.push_back(printAtom(a, pool));
    if (items.empty()) return s + ".";
    s += " :- ";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += items[i];
    }
    return s + ".";
}

std::string printClauseSet(const ClauseSet & cs) {
    std::string s;
    for (auto const & cl : cs.clauses) {
        s += printClause(cl);
        s += "\n";
    }
    return s;
}

std::string printConstraint(const LinearConstraint & c) {
    NamePool pool;
    // keep original variable names readable in diagnostics
    std::string s;
    std::vector<std::string> items;
    for (auto const & cj : c.conjuncts()) items.push_back(printConjunct(cj, pool));
    for (auto const & d : c.disequalities()) items.push_back(printDisequality(d, pool));
    if (items.empty()) return "true";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += items[i];
    }
    return s;
}

std::string canonicalKey(const HornClause & cl) {
    HornClause norm = normalize_clause(cl);
    // resolve orderings among body atoms with identical predicate and arity
    auto render = [](const HornClause & c) {
        return printClause(canonicalRename(c));
    };
    std::string best = render(norm);
    // try adjacent swaps of same-predicate atoms to find the least key
    bool improved = true;
    HornClause cur = norm;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 1 < cur.body.size(); ++i) {
            if (cur.body[i].pred != cur.body[i + 1].pred
                || cur.body[i].args.size() != cur.body[i + 1].args.size())
                continue;
            HornClause swapped = cur;
            std::swap(swapped.body[i], swapped.body[i + 1]);
            std::string key = render(swapped);
            if (key < best) {
                best = key;
                cur = swapped;
                improved = true;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Kind { Ident, Var, Int, LParen, RParen, LBracket, RBracket, Comma, Dot, If,
                      RelEq, RelNeq, RelLe, RelGe, RelLt, RelGt, Plus, Minus, Star, End };
    Kind kind;
    std::string text;
    Int value = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) { advance(); }

    const Token & peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;

    char cur() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char la(std::size_t k) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
    void bump() {
        if (cur() == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance() {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(cur()))) {
                bump();
            } else if (cur() == '%') {
                while (pos_ < s_.size() && cur() != '\n') bump();
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text.clear();
            return;
        }
        char c = cur();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (std::isdigit(static_cast<unsigned char>(cur()))) {
                num += cur();
                bump();
            }
            tok_.kind = Token::Kind::Int;
            tok_.text = num;
            tok_.value = std::stoll(num);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
                id += cur();
                bump();
            }
            tok_.kind = (std::isupper(static_cast<unsigned char>(id[0])) || id[0] == '_')
                            ? Token::Kind::Var
                            : Token::Kind::Ident;
            tok_.text = id;
            return;
        }
        auto two = [&](Token::Kind k, const char * t) {
            tok_.kind = k;
            tok_.text = t;
            bump();
            bump();
        };
        switch (c) {
            case '(': tok_.kind = Token::Kind::LParen; bump(); return;
            case ')': tok_.kind = Token::Kind::RParen; bump(); return;
            case '[': tok_.kind = Token::Kind::LBracket; bump(); return;
            case ']': tok_.kind = Token::Kind::RBracket; bump(); return;
            case ',': tok_.kind = Token::Kind::Comma; bump(); return;
            case '.': tok_.kind = Token::Kind::Dot; bump(); return;
            case '+': tok_.kind = Token::Kind::Plus; bump(); return;
            case '-': tok_.kind = Token::Kind::Minus; bump(); return;
            case '*': tok_.kind = Token::Kind::Star; bump(); return;
            case ':':
                if (la(1) == '-') {
                    two(Token::Kind::If, ":-");
                    return;
                }
                break;
            case '=':
                if (la(1) == '<') {
                    two(Token::Kind::RelLe, "=<");
                    return;
                }
                if (la(1) == '\\' && la(2) == '=') {
                    tok_.kind = Token::Kind::RelNeq;
                    tok_.text = "=\\=";
                    bump();
                    bump();
                    bump();
                    return;
                }
                tok_.kind = Token::Kind::RelEq;
                tok_.text = "=";
                bump();
                return;
            case '>':
                if (la(1) == '=') {
                    two(Token::Kind::RelGe, ">=");
                    return;
                }
                tok_.kind = Token::Kind::RelGt;
                tok_.text = ">";
                bump();
                return;
            case '<':
                tok_.kind = Token::Kind::RelLt;
                tok_.text = "<";
                bump();
                return;
            default: break;
        }
        throw ClauseParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
};

class ClauseParser {
public:
    explicit ClauseParser(std::string_view text) : lex_(text) {}

    ClauseSet parse() {
        ClauseSet cs;
        while (lex_.peek().kind != Token::Kind::End) {
            cs.clauses.push_back(parseClause());
        }
        cs.collectDeclarations();
        return cs;
    }

private:
    Lexer lex_;

    [[noreturn]] void fail(const std::string & msg) {
        throw ClauseParseError(msg, lex_.peek().line, lex_.peek().col);
    }

    Token expect(Token::Kind k, const char * what) {
        if (lex_.peek().kind != k) fail(std::string("expected ") + what);
        return lex_.take();
    }

    HornClause parseClause() {
        HornClause cl;
        Token head = expect(Token::Kind::Ident, "clause head");
        if (head.text != "false") {
            Atom a;
            a.pred = head.text;
            if (lex_.peek().kind == Token::Kind::LParen) a.args = parseArgs();
            cl.head = std::move(a);
        }
        if (lex_.peek().kind == Token::Kind::Dot) {
            lex_.take();
            return cl;
        }
        expect(Token::Kind::If, "':-' or '.'");
        for (;;) {
            parseBodyItem(cl);
            if (lex_.peek().kind == Token::Kind::Comma) {
                lex_.take();
                continue;
            }
            expect(Token::Kind::Dot, "'.'");
            break;
        }
        return cl;
    }

    std::vector<Arg> parseArgs() {
        expect(Token::Kind::LParen, "'('");
        std::vector<Arg> args;
        for (;;) {
            Token t = lex_.take();
            if (t.kind == Token::Kind::Var) {
                args.emplace_back(t.text);
            } else if (t.kind == Token::Kind::Int) {
                args.emplace_back(t.value);
            } else if (t.kind == Token::Kind::Minus && lex_.peek().kind == Token::Kind::Int) {
                args.emplace_back(-lex_.take().value);
            } else if (t.kind == Token::Kind::Ident) {
                throw ClauseParseError("structured terms are not supported as atom arguments",
                                       t.line, t.col);
            } else {
                throw ClauseParseError("expected variable or integer argument", t.line, t.col);
            }
            if (lex_.peek().kind == Token::Kind::Comma) {
                lex_.take();
                continue;
            }
            expect(Token::Kind::RParen, "')'");
            break;
        }
        return args;
    }

    void parseBodyItem(HornClause & cl) {
        if (lex_.peek().kind == Token::Kind::Ident) {
            Atom a;
            a.pred = lex_.take().text;
            if (lex_.peek().kind == Token::Kind::LParen) a.args = parseArgs();
            cl.body.push_back(std::move(a));
            return;
        }
        LinearTerm lhs = parseTerm();
        Rel rel;
        switch (lex_.peek().kind) {
            case Token::Kind::RelEq: rel = Rel::Eq; break;
            case Token::Kind::RelNeq: rel = Rel::Neq; break;
            case Token::Kind::RelLe: rel = Rel::Le; break;
            case Token::Kind::RelGe: rel = Rel::Ge; break;
            case Token::Kind::RelLt: rel = Rel::Lt; break;
            case Token::Kind::RelGt: rel = Rel::Gt; break;
            default: fail("expected relational operator");
        }
        lex_.take();
        LinearTerm rhs = parseTerm();
        cl.constraint.add({lhs, rel, rhs});
    }

    LinearTerm parsePrimary(bool negate) {
        Token t = lex_.take();
        Int sign = negate ? -1 : 1;
        if (t.kind == Token::Kind::Int) {
            if (lex_.peek().kind == Token::Kind::Star) {
                lex_.take();
                Token v = expect(Token::Kind::Var, "variable after '*'");
                return LinearTerm::var(v.text, sign * t.value);
            }
            return LinearTerm(sign * t.value);
        }
        if (t.kind == Token::Kind::Var) {
            if (lex_.peek().kind == Token::Kind::Star) {
                lex_.take();
                Token n = expect(Token::Kind::Int, "integer after '*'");
                return LinearTerm::var(t.text, sign * n.value);
            }
            return LinearTerm::var(t.text, sign);
        }
        throw ClauseParseError("expected variable or integer", t.line, t.col);
    }

    LinearTerm parseTerm() {
        bool neg = false;
        if (lex_.peek().kind == Token::Kind::Minus) {
            lex_.take();
            neg = true;
        } else if (lex_.peek().kind == Token::Kind::Plus) {
            lex_.take();
        }
        LinearTerm t = parsePrimary(neg);
        for (;;) {
            if (lex_.peek().kind == Token::Kind::Plus) {
                lex_.take();
                t = t + parsePrimary(false);
            } else if (lex_.peek().kind == Token::Kind::Minus) {
                lex_.take();
                t = t + parsePrimary(true);
            } else {
                return t;
            }
        }
    }
};

} // namespace

ClauseSet parseClauses(std::string_view text) { return ClauseParser(text).parse(); }

} // namespace tempohorn::chc
