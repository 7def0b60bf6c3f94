#include "vsc/rewriting.hpp"

#include <deque>
#include <tuple>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace vsc {

std::string to_string(StepKind k)
{
    switch (k) {
    case StepKind::M: return "m";
    case StepKind::ELambda: return "e_lambda";
    case StepKind::EVar: return "e_var";
    case StepKind::Glue: return "glue";
    case StepKind::BetaV: return "beta_v";
    }
    return "?";
}

std::optional<StepKind> step_kind_from_string(const std::string& s)
{
    for (StepKind k : {StepKind::M, StepKind::ELambda, StepKind::EVar, StepKind::Glue, StepKind::BetaV})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

std::string to_string(Status s)
{
    switch (s) {
    case Status::NormalForm: return "NormalForm";
    case Status::Cycle: return "Cycle";
    case Status::FuelExhausted: return "FuelExhausted";
    }
    return "?";
}

std::size_t Counts::total() const
{
    std::size_t n = 0;
    for (auto c : by_kind)
        n += c;
    return n;
}

// ---------------------------------------------------------------- substitution contexts

const Term& skip_subs(const Term& t)
{
    const Term* cur = &t;
    while (cur->is_es())
        cur = &cur->body();
    return *cur;
}

std::size_t sub_depth(const Term& t)
{
    std::size_t n = 0;
    for (const Term* cur = &t; cur->is_es(); cur = &cur->body())
        ++n;
    return n;
}

namespace {

// Renames every binder on the ES spine of t to a name outside avoid.
Term rename_spine(const Term& t, std::set<std::string>& avoid)
{
    if (!t.is_es())
        return t;
    std::string y = fresh_name(t.name(), avoid);
    avoid.insert(y);
    Term body = rename_free(t.body(), t.name(), y);
    return Term::es(rename_spine(body, avoid), y, t.def());
}

Term replace_spine(const Term& l, const Term& inner)
{
    if (!l.is_es())
        return inner;
    return Term::es(replace_spine(l.body(), inner), l.name(), l.def());
}

// Grafts a at position p of t, renaming ES binders crossed by p that would
// capture a free variable of a.
Term graft_renaming(const Term& t, const Path& p, std::size_t k, const Term& a,
                    const std::set<std::string>& fv_a, std::set<std::string>& avoid)
{
    if (k == p.size())
        return a;
    int i = p[k];
    switch (t.kind()) {
    case Kind::App:
        return i == 0 ? Term::app(graft_renaming(t.fun(), p, k + 1, a, fv_a, avoid), t.arg())
                      : Term::app(t.fun(), graft_renaming(t.arg(), p, k + 1, a, fv_a, avoid));
    case Kind::ES:
        if (i == 1)
            return Term::es(t.body(), t.name(), graft_renaming(t.def(), p, k + 1, a, fv_a, avoid));
        if (fv_a.count(t.name())) {
            std::string y = fresh_name(t.name(), avoid);
            avoid.insert(y);
            Term body = rename_free(t.body(), t.name(), y);
            return Term::es(graft_renaming(body, p, k + 1, a, fv_a, avoid), y, t.def());
        }
        return Term::es(graft_renaming(t.body(), p, k + 1, a, fv_a, avoid), t.name(), t.def());
    default:
        throw std::invalid_argument("glue hole crosses a non-open position");
    }
}

} // namespace

// ---------------------------------------------------------------- root rules

Term contract_m(const Term& t)
{
    if (!t.is_app() || !skip_subs(t.fun()).is_abs())
        throw std::invalid_argument("not an m-redex: " + print(t));
    std::set<std::string> avoid = all_names(t);
    Term f = rename_spine(t.fun(), avoid);
    const Term& lam = skip_subs(f);
    return replace_spine(f, Term::es(lam.body(), lam.name(), t.arg()));
}

Term contract_e(const Term& t)
{
    if (!t.is_es() || !skip_subs(t.def()).is_value())
        throw std::invalid_argument("not an e-redex: " + print(t));
    std::set<std::string> avoid = all_names(t);
    Term d = rename_spine(t.def(), avoid);
    const Term& v = skip_subs(d);
    return replace_spine(d, meta_subst(t.body(), t.name(), v));
}

std::optional<Path> glue_hole(const Term& t)
{
    if (!t.is_es() || !t.def().is_app())
        return std::nullopt;
    if (count_free(t.name(), t.body()) != 1)
        return std::nullopt;
    Path out = *free_occurrence(t.body(), t.name());
    const Term* node = &t.body();
    for (int i : out) {
        if (node->is_abs())
            return std::nullopt;
        node = &node->child(i);
    }
    return out;
}

Term contract_glue(const Term& t)
{
    auto hole = glue_hole(t);
    if (!hole)
        throw std::invalid_argument("not a glue redex: " + print(t));
    std::set<std::string> avoid = all_names(t);
    std::set<std::string> fv_a = free_vars(t.def());
    return graft_renaming(t.body(), *hole, 0, t.def(), fv_a, avoid);
}

Term contract_betav(const Term& t)
{
    if (!t.is_app() || !t.fun().is_abs() || !t.arg().is_value())
        throw std::invalid_argument("not a beta_v redex: " + print(t));
    return meta_subst(t.fun().body(), t.fun().name(), t.arg());
}

std::optional<StepKind> root_redex_kind(const Term& t, const Strategy& strat)
{
    if (t.is_app()) {
        if (skip_subs(t.fun()).is_abs())
            return StepKind::M;
        return std::nullopt;
    }
    if (t.is_es()) {
        const Term& v = skip_subs(t.def());
        if (v.is_abs())
            return StepKind::ELambda;
        if (v.is_var())
            return strat.substitute_variables ? std::optional<StepKind>(StepKind::EVar) : std::nullopt;
        if (strat.enable_glue && glue_hole(t))
            return StepKind::Glue;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- closures

namespace {

enum class Zone { Full, Solving, Open };

Zone initial_zone(Closure c)
{
    switch (c) {
    case Closure::Full: return Zone::Full;
    case Closure::Solving: return Zone::Solving;
    case Closure::Open: return Zone::Open;
    }
    return Zone::Open;
}

// Zone of child i of node t, or nullopt if the closure forbids entering it.
std::optional<Zone> child_zone(const Term& t, int i, Zone z)
{
    if (z == Zone::Full)
        return Zone::Full;
    if (t.is_abs())
        return z == Zone::Open ? std::nullopt : std::optional<Zone>(z);
    if (i == 1)
        return Zone::Open;
    return z;
}

void collect_redexes(const Term& t, Path& path, Zone z, const Strategy& strat, std::vector<Redex>& out)
{
    if (auto k = root_redex_kind(t, strat))
        out.push_back({path, *k});
    for (int i = 0; i < t.arity(); ++i) {
        auto cz = child_zone(t, i, z);
        if (!cz)
            continue;
        path.push_back(i);
        collect_redexes(t.child(i), path, *cz, strat, out);
        path.pop_back();
    }
}

} // namespace

bool position_admitted(const Term& t, const Path& p, Closure c)
{
    Zone z = initial_zone(c);
    const Term* cur = &t;
    for (int i : p) {
        auto cz = child_zone(*cur, i, z);
        if (!cz)
            return false;
        z = *cz;
        cur = &cur->child(i);
    }
    return true;
}

std::vector<Redex> redexes(const Term& t, const Strategy& strat)
{
    std::vector<Redex> out;
    Path path;
    collect_redexes(t, path, initial_zone(strat.closure), strat, out);
    return out;
}

Term fire(const Term& t, const Redex& r)
{
    const Term& sub = subterm_at(t, r.path);
    Term res;
    switch (r.kind) {
    case StepKind::M: res = contract_m(sub); break;
    case StepKind::ELambda:
    case StepKind::EVar: res = contract_e(sub); break;
    case StepKind::Glue: res = contract_glue(sub); break;
    case StepKind::BetaV: res = contract_betav(sub); break;
    }
    return replace_at(t, r.path, res);
}

std::optional<std::pair<Term, StepKind>> step(const Term& t, const Strategy& strat)
{
    auto rs = redexes(t, strat);
    if (rs.empty())
        return std::nullopt;
    return std::make_pair(fire(t, rs.front()), rs.front().kind);
}

namespace {

template <class NextRedex>
Trace run(const Term& t, std::size_t fuel, bool detect_cycles, NextRedex next)
{
    Trace tr;
    tr.start = t;
    std::unordered_map<CanonicalTerm, std::size_t, CanonicalHash> seen;
    if (detect_cycles)
        seen.emplace(alpha_canon(t), 0);
    Term cur = t;
    for (;;) {
        std::optional<Redex> r = next(cur);
        if (!r) {
            tr.status = Status::NormalForm;
            return tr;
        }
        if (tr.steps.size() >= fuel) {
            tr.status = Status::FuelExhausted;
            return tr;
        }
        cur = fire(cur, *r);
        tr.steps.push_back({r->path, r->kind, cur});
        tr.counts[r->kind]++;
        if (detect_cycles) {
            auto [it, fresh] = seen.emplace(alpha_canon(cur), tr.steps.size());
            if (!fresh) {
                tr.status = Status::Cycle;
                tr.cycle_index = it->second;
                return tr;
            }
        }
    }
}

} // namespace

Trace reduce(const Term& t, const Strategy& strat, std::size_t fuel, bool detect_cycles)
{
    return run(t, fuel, detect_cycles, [&](const Term& cur) -> std::optional<Redex> {
        auto rs = redexes(cur, strat);
        if (rs.empty())
            return std::nullopt;
        return rs.front();
    });
}

// ---------------------------------------------------------------- Plotkin

bool es_free(const Term& t)
{
    if (t.is_es())
        return false;
    for (int i = 0; i < t.arity(); ++i)
        if (!es_free(t.child(i)))
            return false;
    return true;
}

namespace {

void collect_betav(const Term& t, Path& path, bool open, std::vector<Redex>& out)
{
    if (t.is_app() && t.fun().is_abs() && t.arg().is_value())
        out.push_back({path, StepKind::BetaV});
    if (t.is_abs() && open)
        return;
    for (int i = 0; i < t.arity(); ++i) {
        path.push_back(i);
        collect_betav(t.child(i), path, open, out);
        path.pop_back();
    }
}

void require_betav_input(const Term& t, Closure c)
{
    if (!es_free(t))
        throw std::invalid_argument("beta_v reduction needs an ES-free term");
    if (c == Closure::Solving)
        throw std::invalid_argument("beta_v reduction supports the open and full closures only");
}

} // namespace

std::vector<Redex> betav_redexes(const Term& t, Closure c)
{
    require_betav_input(t, c);
    std::vector<Redex> out;
    Path path;
    collect_betav(t, path, c == Closure::Open, out);
    return out;
}

Trace betav_reduce(const Term& t, Closure c, std::size_t fuel, bool detect_cycles)
{
    require_betav_input(t, c);
    return run(t, fuel, detect_cycles, [&](const Term& cur) -> std::optional<Redex> {
        std::vector<Redex> out;
        Path path;
        collect_betav(cur, path, c == Closure::Open, out);
        if (out.empty())
            return std::nullopt;
        return out.front();
    });
}

Term simulate_betav_step(const Term& t, const Term& t2)
{
    for (const Redex& r : betav_redexes(t, Closure::Open)) {
        if (!alpha_equal(fire(t, r), t2))
            continue;
        Term mid = fire(t, {r.path, StepKind::M});
        const Term& es = subterm_at(mid, r.path);
        StepKind ek = es.def().is_abs() ? StepKind::ELambda : StepKind::EVar;
        if (alpha_equal(fire(mid, {r.path, ek}), t2))
            return mid;
    }
    throw std::invalid_argument("not an open beta_v step: " + print(t) + " -> " + print(t2));
}

// ---------------------------------------------------------------- glue

std::optional<Term> glue_step(const Term& t)
{
    Strategy s{Closure::Full, false, true};
    for (const Redex& r : redexes(t, s))
        if (r.kind == StepKind::Glue)
            return fire(t, r);
    return std::nullopt;
}

// ---------------------------------------------------------------- structural equivalence

std::string to_string(Axiom a)
{
    switch (a) {
    case Axiom::AtLeft: return "@l";
    case Axiom::AtRight: return "@r";
    case Axiom::Sub: return "[.]";
    case Axiom::Com: return "com";
    }
    return "?";
}

std::optional<Axiom> axiom_from_string(const std::string& s)
{
    for (Axiom a : {Axiom::AtLeft, Axiom::AtRight, Axiom::Sub, Axiom::Com})
        if (to_string(a) == s)
            return a;
    return std::nullopt;
}

namespace {

// Renames binder x of a scope body to a fresh name; returns (name, body).
std::pair<std::string, Term> rebind(const std::string& x, const Term& body, const Term& whole)
{
    std::string y = fresh_name(x, all_names(whole));
    return {y, rename_free(body, x, y)};
}

} // namespace

std::optional<Term> equiv_root(const Term& t, Axiom a, bool forward)
{
    switch (a) {
    case Axiom::AtLeft:
        if (forward) {
            // t[x<-u] s  ->  (t s)[x<-u]
            if (!t.is_app() || !t.fun().is_es())
                return std::nullopt;
            const Term& e = t.fun();
            const Term& s = t.arg();
            std::string x = e.name();
            Term body = e.body();
            if (occurs_free(x, s))
                std::tie(x, body) = rebind(x, body, t);
            return Term::es(Term::app(body, s), x, e.def());
        }
        if (!t.is_es() || !t.body().is_app() || occurs_free(t.name(), t.body().arg()))
            return std::nullopt;
        return Term::app(Term::es(t.body().fun(), t.name(), t.def()), t.body().arg());

    case Axiom::AtRight:
        if (forward) {
            // t (s[x<-u])  ->  (t s)[x<-u]
            if (!t.is_app() || !t.arg().is_es())
                return std::nullopt;
            const Term& f = t.fun();
            const Term& e = t.arg();
            std::string x = e.name();
            Term body = e.body();
            if (occurs_free(x, f))
                std::tie(x, body) = rebind(x, body, t);
            return Term::es(Term::app(f, body), x, e.def());
        }
        if (!t.is_es() || !t.body().is_app() || occurs_free(t.name(), t.body().fun()))
            return std::nullopt;
        return Term::app(t.body().fun(), Term::es(t.body().arg(), t.name(), t.def()));

    case Axiom::Sub:
        if (forward) {
            // t[x<-u][y<-s]  ->  t[x<-u[y<-s]]
            if (!t.is_es() || !t.body().is_es())
                return std::nullopt;
            std::string y = t.name();
            Term inner = t.body();
            if (y == inner.name())
                std::tie(y, inner) = rebind(y, inner, t);
            if (occurs_free(y, inner.body()))
                return std::nullopt;
            return Term::es(inner.body(), inner.name(), Term::es(inner.def(), y, t.def()));
        }
        {
            // t[x<-u[y<-s]]  ->  t[x<-u][y<-s]
            if (!t.is_es() || !t.def().is_es())
                return std::nullopt;
            const Term& d = t.def();
            std::string y = d.name();
            Term u = d.body();
            if (y == t.name() || occurs_free(y, t.body()))
                std::tie(y, u) = rebind(y, u, t);
            return Term::es(Term::es(t.body(), t.name(), u), y, d.def());
        }

    case Axiom::Com: {
        // t[y<-s][x<-u]  ->  t[x<-u][y<-s]; the axiom is its own inverse
        if (!t.is_es() || !t.body().is_es())
            return std::nullopt;
        const Term& inner = t.body();
        std::string x = t.name();
        std::string y = inner.name();
        const Term& s = inner.def();
        const Term& u = t.def();
        if (occurs_free(x, s))
            return std::nullopt;
        Term body = inner.body();
        if (y == x || occurs_free(y, u))
            std::tie(y, body) = rebind(y, body, t);
        return Term::es(Term::es(body, x, u), y, s);
    }
    }
    return std::nullopt;
}

namespace {

void collect_equiv(const Term& root, const Term& t, Path& path, std::vector<EquivStep>& out)
{
    for (Axiom a : {Axiom::AtLeft, Axiom::AtRight, Axiom::Sub, Axiom::Com}) {
        for (bool fwd : {true, false}) {
            if (a == Axiom::Com && !fwd)
                continue;
            if (auto r = equiv_root(t, a, fwd))
                out.push_back({path, a, fwd, replace_at(root, path, *r)});
        }
    }
    for (int i = 0; i < t.arity(); ++i) {
        path.push_back(i);
        collect_equiv(root, t.child(i), path, out);
        path.pop_back();
    }
}

} // namespace

std::vector<EquivStep> equiv_steps(const Term& t)
{
    std::vector<EquivStep> out;
    Path path;
    collect_equiv(t, t, path, out);
    return out;
}

namespace {

template <class Stop>
std::vector<Term> bfs_class(const Term& t, std::size_t limit, Stop stop, bool& stopped)
{
    std::unordered_set<CanonicalTerm, CanonicalHash> seen;
    std::vector<Term> members;
    std::deque<Term> queue;
    stopped = false;
    seen.insert(alpha_canon(t));
    members.push_back(t);
    queue.push_back(t);
    if (stop(alpha_canon(t))) {
        stopped = true;
        return members;
    }
    while (!queue.empty()) {
        Term cur = queue.front();
        queue.pop_front();
        for (const EquivStep& s : equiv_steps(cur)) {
            CanonicalTerm c = alpha_canon(s.result);
            if (!seen.insert(c).second)
                continue;
            members.push_back(s.result);
            if (stop(c)) {
                stopped = true;
                return members;
            }
            if (members.size() > limit)
                return {};
            queue.push_back(s.result);
        }
    }
    return members;
}

} // namespace

std::vector<Term> equiv_class(const Term& t, std::size_t limit)
{
    bool stopped = false;
    return bfs_class(t, limit, [](const CanonicalTerm&) { return false; }, stopped);
}

bool struct_equiv(const Term& t, const Term& u, std::size_t limit)
{
    if (size(t) != size(u) || free_vars(t) != free_vars(u))
        return false;
    CanonicalTerm target = alpha_canon(u);
    bool stopped = false;
    bfs_class(t, limit, [&](const CanonicalTerm& c) { return c == target; }, stopped);
    return stopped;
}

// ---------------------------------------------------------------- sigma

std::string to_string(Sigma s)
{
    return s == Sigma::S1 ? "sigma1" : "sigma3";
}

Term contract_sigma(const Term& t, Sigma rule)
{
    if (rule == Sigma::S1) {
        // ((\x.t)u)s -> (\x.ts)u
        if (!t.is_app() || !t.fun().is_app() || !t.fun().fun().is_abs())
            throw std::invalid_argument("no sigma1 redex at the root: " + print(t));
        const Term& lam = t.fun().fun();
        const Term& s = t.arg();
        std::string x = lam.name();
        Term body = lam.body();
        if (occurs_free(x, s))
            std::tie(x, body) = rebind(x, body, t);
        return Term::app(Term::abs(x, Term::app(body, s)), t.fun().arg());
    }
    // v((\x.s)u) -> (\x.vs)u
    if (!t.is_app() || !t.fun().is_value() || !t.arg().is_app() || !t.arg().fun().is_abs())
        throw std::invalid_argument("no sigma3 redex at the root: " + print(t));
    const Term& v = t.fun();
    const Term& lam = t.arg().fun();
    std::string x = lam.name();
    Term body = lam.body();
    if (occurs_free(x, v))
        std::tie(x, body) = rebind(x, body, t);
    return Term::app(Term::abs(x, Term::app(v, body)), t.arg().arg());
}

bool sigma_embed_check(const Term& q, Sigma rule)
{
    Term q2 = contract_sigma(q, rule);
    Path inner = rule == Sigma::S1 ? Path{0} : Path{1};
    Term r1 = fire(q, {inner, StepKind::M});
    Term r2 = fire(q2, {{}, StepKind::M});
    return struct_equiv(r1, r2);
}

} // namespace vsc
