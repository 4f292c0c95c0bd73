/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/minimizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace tempohorn::minimizer {

using chc::Arg;
using chc::Atom;
using chc::HornClause;
using chc::LinearConstraint;
using chc::LinearTerm;

bool naturalLess(const std::string & a, const std::string & b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t i2 = i, j2 = j;
            while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
            while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
            long long na = std::stoll(a.substr(i, i2 - i));
            long long nb = std::stoll(b.substr(j, j2 - j));
            if (na != nb) return na < nb;
            i = i2;
            j = j2;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

namespace {

void requirePure(const chc::ClauseSet & cs) {
    for (auto const & cl : cs.clauses) {
        if (!cl.head) continue;
        std::set<std::string> seen;
        for (auto const & arg : cl.head->args) {
            if (!chc::argIsVar(arg) || !seen.insert(chc::argVar(arg)).second)
                throw MinimizerError("clause set is not in pure form: head "
                                     + cl.head->pred + " has repeated or constant arguments");
        }
    }
}

// One body of a predicate, with head variables aligned to #H1..#Hk.
struct AlignedBody {
    LinearConstraint constraint;
    std::vector<Atom> atoms; // predicates renamed through the partition
};

std::vector<AlignedBody> alignedBodies(const std::string & pred, const Partition & e,
                                       const chc::ClauseSet & cs) {
    std::vector<AlignedBody> out;
    for (auto const & cl : cs.clauses) {
        if (!cl.head || cl.head->pred != pred) continue;
        std::map<std::string, std::string> rename;
        for (std::size_t i = 0; i < cl.head->args.size(); ++i)
            rename[chc::argVar(cl.head->args[i])] = "#H" + std::to_string(i + 1);
        AlignedBody body;
        body.constraint = cl.constraint.renamed(rename);
        for (auto const & a : cl.body) {
            Atom b;
            b.pred = e.repOf(a.pred);
            for (auto const & arg : a.args) {
                if (chc::argIsVar(arg)) {
                    auto it = rename.find(chc::argVar(arg));
                    b.args.push_back(it == rename.end() ? arg : Arg(it->second));
                } else {
                    b.args.push_back(arg);
                }
            }
            body.atoms.push_back(std::move(b));
        }
        out.push_back(std::move(body));
    }
    return out;
}

// Equivalence of two bodies under a fixed bijection between their atoms:
// atom argument positions are tied to shared fresh variables and the
// constraints, projected onto head and argument variables, must coincide.
bool bodiesMatchAligned(const AlignedBody & x, const AlignedBody & y, std::size_t headArity) {
    LinearConstraint cx = x.constraint, cy = y.constraint;
    std::set<std::string> keep;
    for (std::size_t i = 0; i < headArity; ++i) keep.insert("#H" + std::to_string(i + 1));
    int w = 0;
    for (std::size_t a = 0; a < x.atoms.size(); ++a) {
        for (std::size_t k = 0; k < x.atoms[a].args.size(); ++k) {
            std::string wv = "#W" + std::to_string(++w);
            keep.insert(wv);
            auto tie = [&](LinearConstraint & c, const Arg & arg) {
                LinearTerm t = chc::argIsVar(arg) ? LinearTerm::var(chc::argVar(arg))
                                                  : LinearTerm(chc::argInt(arg));
                c.addEq(LinearTerm::var(wv), t);
            };
            tie(cx, x.atoms[a].args[k]);
            tie(cy, y.atoms[a].args[k]);
        }
    }
    LinearConstraint px = chc::project(cx.normalized(), keep);
    LinearConstraint py = chc::project(cy.normalized(), keep);
    if (px.approximate() || py.approximate()) return false; // refuse to merge
    return chc::equivalent(px, py);
}

// Bijection search between two bodies' atom lists (same multiset of renamed
// predicates), then the constraint comparison.
bool bodyPairEquivalent(const AlignedBody & x, const AlignedBody & y, std::size_t headArity) {
    if (x.atoms.size() != y.atoms.size()) return false;
    std::size_t n = x.atoms.size();
    std::vector<bool> used(n, false);
    std::vector<std::size_t> pick(n, 0);

    // backtracking over atom alignments; y gets reordered to match x
    AlignedBody yAligned = y;
    auto rec = [&](auto && self, std::size_t i) -> bool {
        if (i == n) return bodiesMatchAligned(x, yAligned, headArity);
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            if (y.atoms[j].pred != x.atoms[i].pred
                || y.atoms[j].args.size() != x.atoms[i].args.size())
                continue;
            used[j] = true;
            yAligned.atoms[i] = y.atoms[j];
            if (self(self, i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    if (n == 0) return bodiesMatchAligned(x, y, headArity);
    return rec(rec, 0);
}

std::string bodyBucket(const AlignedBody & b) {
    std::multiset<std::string> preds;
    for (auto const & a : b.atoms) preds.insert(a.pred + "/" + std::to_string(a.args.size()));
    std::string key;
    for (auto const & p : preds) key += p + ";";
    return key;
}

bool bodySetsEquivalent(const std::vector<AlignedBody> & xs, const std::vector<AlignedBody> & ys,
                        std::size_t headArity) {
    if (xs.size() != ys.size()) return false;
    // bucket by atom signature to prune the bijection search
    std::map<std::string, std::vector<std::size_t>> bx, by;
    for (std::size_t i = 0; i < xs.size(); ++i) bx[bodyBucket(xs[i])].push_back(i);
    for (std::size_t i = 0; i < ys.size(); ++i) by[bodyBucket(ys[i])].push_back(i);
    if (bx.size() != by.size()) return false;
    for (auto const & [key, xi] : bx) {
        auto it = by.find(key);
        if (it == by.end() || it->second.size() != xi.size()) return false;
    }
    for (auto const & [key, xi] : bx) {
        auto const & yi = by.at(key);
        std::vector<bool> used(yi.size(), false);
        auto rec = [&](auto && self, std::size_t i) -> bool {
            if (i == xi.size()) return true;
            for (std::size_t j = 0; j < yi.size(); ++j) {
                if (used[j]) continue;
                if (!bodyPairEquivalent(xs[xi[i]], ys[yi[j]], headArity)) continue;
                used[j] = true;
                if (self(self, i + 1)) return true;
                used[j] = false;
            }
            return false;
        };
        if (!rec(rec, 0)) return false;
    }
    return true;
}

Partition makePartition(const std::vector<std::vector<std::string>> & classes) {
    Partition p;
    p.classes = classes;
    for (auto & cls : p.classes) {
        std::sort(cls.begin(), cls.end(), naturalLess);
        for (auto const & m : cls) p.representative[m] = cls.front();
    }
    std::sort(p.classes.begin(), p.classes.end(),
              [](auto const & a, auto const & b) { return naturalLess(a.front(), b.front()); });
    return p;
}

} // namespace

bool bodies_equivalent(const std::string & p, const std::string & q, const Partition & e,
                       const chc::ClauseSet & cs) {
    requirePure(cs);
    int arP = cs.declaredArity.at(p), arQ = cs.declaredArity.at(q);
    if (arP != arQ) return false;
    auto bp = alignedBodies(p, e, cs);
    auto bq = alignedBodies(q, e, cs);
    return bodySetsEquivalent(bp, bq, static_cast<std::size_t>(arP));
}

Partition coarsest_cp_equivalence(const chc::ClauseSet & cs) {
    requirePure(cs);
    chc::ClauseSet work = cs;
    work.collectDeclarations();

    // start from one class per arity (arity-distinct predicates can never merge)
    std::map<int, std::vector<std::string>> byArity;
    for (auto const & [pred, arity] : work.declaredArity) byArity[arity].push_back(pred);
    std::vector<std::vector<std::string>> classes;
    for (auto & [arity, preds] : byArity) classes.push_back(preds);

    for (;;) {
        Partition current = makePartition(classes);
        std::vector<std::vector<std::string>> next;
        bool split = false;
        for (auto const & cls : current.classes) {
            std::size_t groupsBefore = next.size();
            std::vector<std::string> rest = cls;
            while (!rest.empty()) {
                std::vector<std::string> group{rest.front()};
                std::vector<std::string> remaining;
                auto pivotBodies = alignedBodies(rest.front(), current, work);
                std::size_t arity =
                    static_cast<std::size_t>(work.declaredArity.at(rest.front()));
                for (std::size_t i = 1; i < rest.size(); ++i) {
                    auto bodies = alignedBodies(rest[i], current, work);
                    if (bodySetsEquivalent(pivotBodies, bodies, arity))
                        group.push_back(rest[i]);
                    else
                        remaining.push_back(rest[i]);
                }
                next.push_back(std::move(group));
                rest = std::move(remaining);
            }
            if (next.size() - groupsBefore > 1) split = true;
        }
        if (!split) return current;
        classes = std::move(next);
    }
}

chc::ClauseSet apply_renaming(const chc::ClauseSet & cs, const Partition & e) {
    chc::ClauseSet work = cs;
    work.collectDeclarations();
    for (auto const & [pred, arity] : work.declaredArity)
        if (!e.representative.count(pred))
            throw MinimizerError("partition does not cover predicate " + pred);
    {
        std::set<std::string> members;
        for (auto const & cls : e.classes)
            for (auto const & m : cls)
                if (!members.insert(m).second)
                    throw MinimizerError("partition classes overlap on " + m);
    }

    chc::ClauseSet out;
    std::set<std::string> seenKeys;
    for (auto const & cl : work.clauses) {
        if (cl.head && e.repOf(cl.head->pred) != cl.head->pred) continue; // dropped
        HornClause renamed = cl;
        for (auto & a : renamed.body) a.pred = e.repOf(a.pred);
        renamed = chc::normalize_clause(renamed);
        std::string key = chc::canonicalKey(renamed);
        if (!seenKeys.insert(key).second) continue;
        out.clauses.push_back(std::move(renamed));
    }
    out.collectDeclarations();
    return out;
}

std::string renderPartition(const Partition & e) {
    std::ostringstream os;
    for (auto const & cls : e.classes) {
        for (std::size_t i = 0; i < cls.size(); ++i) os << (i ? " " : "") << cls[i];
        os << "\n";
    }
    return os.str();
}

} // namespace tempohorn::minimizer
