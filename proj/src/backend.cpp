/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/backend.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

namespace tempohorn::backend {

using chc::Arg;
using chc::Atom;
using chc::Conjunct;
using chc::HornClause;
using chc::LinearTerm;

namespace {

std::string sanitizeSymbol(const std::string & s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "p_" + out;
    return out;
}

std::string smtInt(chc::Int v) {
    if (v < 0) return "(- " + std::to_string(-v) + ")";
    return std::to_string(v);
}

std::string smtTerm(const LinearTerm & t, const std::map<std::string, std::string> & names) {
    std::vector<std::string> parts;
    for (auto const & [v, k] : t.coefficients()) {
        const std::string & n = names.at(v);
        parts.push_back(k == 1 ? n : "(* " + smtInt(k) + " " + n + ")");
    }
    if (t.constant() != 0 || parts.empty()) parts.push_back(smtInt(t.constant()));
    if (parts.size() == 1) return parts[0];
    std::string s = "(+";
    for (auto const & p : parts) s += " " + p;
    return s + ")";
}

std::string smtAtom(const Atom & a, const std::map<std::string, std::string> & names) {
    std::string s = sanitizeSymbol(a.pred);
    if (a.args.empty()) return s;
    std::string out = "(" + s;
    for (auto const & arg : a.args) {
        out += " ";
        out += chc::argIsVar(arg) ? names.at(chc::argVar(arg)) : smtInt(chc::argInt(arg));
    }
    return out + ")";
}

} // namespace

std::string emit_smtlib(const chc::ClauseSet & cs) {
    for (auto const & cl : cs.clauses)
        if (!cl.constraint.disequalities().empty())
            throw std::logic_error("emit_smtlib: clause constraints must be disequality-free");

    std::ostringstream os;
    os << "(set-logic HORN)\n";

    // declarations in first-use order, clause by clause
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto note = [&](const Atom & a) {
        if (seen.insert(a.pred).second) order.push_back(a.pred);
    };
    for (auto const & cl : cs.clauses) {
        if (cl.head) note(*cl.head);
        for (auto const & a : cl.body) note(a);
    }
    for (auto const & [pred, arity] : cs.declaredArity)
        if (seen.insert(pred).second) order.push_back(pred); // open predicates
    for (auto const & p : order) {
        int arity = cs.declaredArity.at(p);
        os << "(declare-fun " << sanitizeSymbol(p) << " (";
        for (int i = 0; i < arity; ++i) os << (i ? " Int" : "Int");
        os << ") Bool)\n";
    }

    for (auto const & cl : cs.clauses) {
        // per-clause variable names A, B, ... in first-occurrence order
        std::map<std::string, std::string> names;
        std::vector<std::string> varOrder;
        auto visit = [&](const std::string & v) {
            if (names.count(v)) return;
            int i = static_cast<int>(names.size());
            std::string pretty(1, static_cast<char>('A' + i % 26));
            if (i >= 26) pretty += std::to_string(i / 26);
            names[v] = pretty;
            varOrder.push_back(v);
        };
        auto visitAtom = [&](const Atom & a) {
            for (auto const & arg : a.args)
                if (chc::argIsVar(arg)) visit(chc::argVar(arg));
        };
        if (cl.head) visitAtom(*cl.head);
        for (auto const & a : cl.body) visitAtom(a);
        for (auto const & cj : cl.constraint.conjuncts())
            for (auto const & [v, k] : cj.poly.coefficients()) visit(v);

        std::vector<std::string> parts;
        for (auto const & cj : cl.constraint.conjuncts()) {
            const char * op = cj.kind == Conjunct::Kind::Eq0 ? "=" : ">=";
            parts.push_back("(" + std::string(op) + " " + smtTerm(cj.poly, names) + " 0)");
        }
        for (auto const & a : cl.body) parts.push_back(smtAtom(a, names));

        std::string bodyStr;
        if (parts.empty()) {
            bodyStr = "true";
        } else if (parts.size() == 1) {
            bodyStr = parts[0];
        } else {
            bodyStr = "(and";
            for (auto const & p : parts) bodyStr += " " + p;
            bodyStr += ")";
        }
        std::string headStr = cl.head ? smtAtom(*cl.head, names) : "false";
        std::string impl = "(=> " + bodyStr + " " + headStr + ")";
        if (varOrder.empty()) {
            os << "(assert " << impl << ")\n";
        } else {
            os << "(assert (forall (";
            for (std::size_t i = 0; i < varOrder.size(); ++i)
                os << (i ? " (" : "(") << names.at(varOrder[i]) << " Int)";
            os << ") " << impl << "))\n";
        }
    }
    os << "(check-sat)\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Solver driver

SolverConfig makeSolverConfig(const std::string & commandLine, double timeoutSec) {
    SolverConfig cfg;
    cfg.timeoutSec = timeoutSec;
    std::istringstream is(commandLine);
    std::string tok;
    while (is >> tok) cfg.command.push_back(tok);
    return cfg;
}

std::optional<SolverConfig> defaultSolver(double timeoutSec) {
    if (const char * env = std::getenv("TEMPOHORN_SOLVER"); env && *env) {
        SolverConfig cfg = makeSolverConfig(env, timeoutSec);
        if (!cfg.command.empty()) return cfg;
    }
    if (const char * path = std::getenv("PATH")) {
        std::istringstream is(path);
        std::string dir;
        while (std::getline(is, dir, ':')) {
            if (dir.empty()) continue;
            std::string cand = dir + "/z3";
            if (access(cand.c_str(), X_OK) == 0) return SolverConfig{{cand}, timeoutSec};
        }
    }
    return std::nullopt;
}

const char * outcomeName(SolverVerdict::Outcome o) {
    switch (o) {
        case SolverVerdict::Outcome::Satisfiable: return "sat";
        case SolverVerdict::Outcome::Unsatisfiable: return "unsat";
        case SolverVerdict::Outcome::Unknown: return "unknown";
        case SolverVerdict::Outcome::Timeout: return "timeout";
        case SolverVerdict::Outcome::SolverError: return "error";
    }
    return "?";
}

namespace {

SolverVerdict::Outcome parseOutput(const std::string & out) {
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line)) {
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string t = line.substr(b, e - b + 1);
        if (t == "sat") return SolverVerdict::Outcome::Satisfiable;
        if (t == "unsat") return SolverVerdict::Outcome::Unsatisfiable;
        if (t == "unknown") return SolverVerdict::Outcome::Unknown;
    }
    return SolverVerdict::Outcome::SolverError;
}

} // namespace

SolverVerdict run_solver(const SolverConfig & config, const std::string & script) {
    SolverVerdict verdict;
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (config.command.empty()) {
        verdict.raw = "no solver configured (set TEMPOHORN_SOLVER or pass --solver)";
        return verdict;
    }

    char tmpl[] = "/tmp/tempohorn-XXXXXX.smt2";
    int fd = mkstemps(tmpl, 5);
    if (fd < 0) {
        verdict.raw = "cannot create temporary script file";
        return verdict;
    }
    std::string tmpPath = tmpl;
    {
        std::size_t off = 0;
        while (off < script.size()) {
            ssize_t w = write(fd, script.data() + off, script.size() - off);
            if (w < 0) break;
            off += static_cast<std::size_t>(w);
        }
        close(fd);
    }

    int outPipe[2];
    if (pipe(outPipe) != 0) {
        unlink(tmpPath.c_str());
        verdict.raw = "cannot create pipe";
        return verdict;
    }

    pid_t pid = fork();
    if (pid < 0) {
        unlink(tmpPath.c_str());
        close(outPipe[0]);
        close(outPipe[1]);
        verdict.raw = "fork failed";
        return verdict;
    }
    if (pid == 0) {
        setpgid(0, 0); // own process group, so the whole tree can be killed
        dup2(outPipe[1], STDOUT_FILENO);
        dup2(outPipe[1], STDERR_FILENO);
        close(outPipe[0]);
        close(outPipe[1]);
        std::vector<char *> argv;
        for (auto const & a : config.command) argv.push_back(const_cast<char *>(a.c_str()));
        std::string pathArg = tmpPath;
        argv.push_back(pathArg.data());
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        std::perror("exec");
        _exit(127);
    }

    close(outPipe[1]);
    fcntl(outPipe[0], F_SETFL, O_NONBLOCK);

    std::string output;
    bool timedOut = false;
    int status = 0;
    for (;;) {
        char buf[4096];
        ssize_t r;
        while ((r = read(outPipe[0], buf, sizeof buf)) > 0) output.append(buf, static_cast<std::size_t>(r));
        pid_t done = waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (elapsed() > config.timeoutSec) {
            timedOut = true;
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            break;
        }
        usleep(10000);
    }
    // drain whatever remains
    for (;;) {
        char buf[4096];
        ssize_t r = read(outPipe[0], buf, sizeof buf);
        if (r <= 0) break;
        output.append(buf, static_cast<std::size_t>(r));
    }
    close(outPipe[0]);
    unlink(tmpPath.c_str());

    verdict.raw = output;
    verdict.elapsedSec = elapsed();
    if (timedOut) {
        verdict.outcome = SolverVerdict::Outcome::Timeout;
        return verdict;
    }
    verdict.outcome = parseOutput(output);
    if (verdict.outcome == SolverVerdict::Outcome::SolverError && output.empty())
        verdict.raw = "solver produced no output (exit status " + std::to_string(status) + ")";
    return verdict;
}

} // namespace tempohorn::backend
