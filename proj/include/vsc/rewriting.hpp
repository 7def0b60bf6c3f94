#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsc/syntax.hpp"

namespace vsc {

enum class Closure { Open, Solving, Full };

struct Strategy {
    Closure closure = Closure::Open;
    bool substitute_variables = true;
    bool enable_glue = false;
};

enum class StepKind { M, ELambda, EVar, Glue, BetaV };

std::string to_string(StepKind k);
std::optional<StepKind> step_kind_from_string(const std::string& s);

struct Redex {
    Path path;
    StepKind kind;
};

struct Counts {
    std::array<std::size_t, 5> by_kind{};

    std::size_t& operator[](StepKind k) { return by_kind[static_cast<std::size_t>(k)]; }
    std::size_t operator[](StepKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
    std::size_t total() const;
    bool operator==(const Counts&) const = default;
};

enum class Status { NormalForm, Cycle, FuelExhausted };
std::string to_string(Status s);

struct TraceStep {
    Path path;
    StepKind kind;
    Term result;
};

struct Trace {
    Term start;
    std::vector<TraceStep> steps;
    Status status = Status::NormalForm;
    // For Cycle: index (0 = start) of the earlier occurrence of the last term.
    std::size_t cycle_index = 0;
    Counts counts;

    const Term& final_term() const { return steps.empty() ? start : steps.back().result; }
    // term before step i
    const Term& term_before(std::size_t i) const { return i == 0 ? start : steps[i - 1].result; }
};

// ---- root rules. Each throws std::invalid_argument if t is not a redex. ----

// L<\x.t> u  ->  L<t[x<-u]>, binders of L renamed apart from u
Term contract_m(const Term& t);
// t[x<-L<v>]  ->  L<t{x<-v}>, binders of L renamed apart from t
Term contract_e(const Term& t);
// O<x>[x<-a]  ->  O<a>, a an application, x free exactly once and not under a lambda
Term contract_glue(const Term& t);
// (\x.t) v  ->  t{x<-v} on ES-free terms
Term contract_betav(const Term& t);

// Strips the substitution context: L<s> -> s, the ES bodies along the spine.
const Term& skip_subs(const Term& t);
std::size_t sub_depth(const Term& t);

std::optional<StepKind> root_redex_kind(const Term& t, const Strategy& strat);
std::optional<Path> glue_hole(const Term& es_redex);

// All redexes admitted by the closure, in leftmost-outermost order.
std::vector<Redex> redexes(const Term& t, const Strategy& strat);
bool position_admitted(const Term& t, const Path& p, Closure c);
Term fire(const Term& t, const Redex& r);

std::optional<std::pair<Term, StepKind>> step(const Term& t, const Strategy& strat);
Trace reduce(const Term& t, const Strategy& strat, std::size_t fuel = 10000, bool detect_cycles = true);

// ---- Plotkin call-by-value ----

bool es_free(const Term& t);
std::vector<Redex> betav_redexes(const Term& t, Closure c);
// Throws std::invalid_argument when t contains an ES, or c is Solving.
Trace betav_reduce(const Term& t, Closure c, std::size_t fuel = 10000, bool detect_cycles = true);
// Given an open beta_v step t -> t2, returns mid with t ->om mid ->oe t2.
Term simulate_betav_step(const Term& t, const Term& t2);

// ---- glue ----

std::optional<Term> glue_step(const Term& t);

// ---- structural equivalence ----

enum class Axiom { AtLeft, AtRight, Sub, Com };
std::string to_string(Axiom a);
std::optional<Axiom> axiom_from_string(const std::string& s);

// Forward orientation reads left to right:
//   AtLeft:  t[x<-u] s      == (t s)[x<-u]     x not in fv(s)
//   AtRight: t (s[x<-u])    == (t s)[x<-u]     x not in fv(t)
//   Sub:     t[x<-u][y<-s]  == t[x<-u[y<-s]]   y not in fv(t)
//   Com:     t[y<-s][x<-u]  == t[x<-u][y<-s]   y not in fv(u), x not in fv(s)
// Bound names are renamed when that alone makes a side condition hold.
std::optional<Term> equiv_root(const Term& t, Axiom a, bool forward);

struct EquivStep {
    Path path;
    Axiom axiom;
    bool forward;
    Term result;
};

std::vector<EquivStep> equiv_steps(const Term& t);
// Members of the class of t up to alpha; empty if it exceeds limit.
std::vector<Term> equiv_class(const Term& t, std::size_t limit = 100000);
bool struct_equiv(const Term& t, const Term& u, std::size_t limit = 100000);

// ---- sigma rules ----

enum class Sigma { S1, S3 };
std::string to_string(Sigma s);
// ((\x.t)u)s -> (\x.ts)u   and   v((\x.s)u) -> (\x.vs)u
Term contract_sigma(const Term& t, Sigma rule);
bool sigma_embed_check(const Term& t, Sigma rule);

} // namespace vsc
