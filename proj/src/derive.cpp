#include "vsc/derive.hpp"

#include <functional>

#include "vsc/classify.hpp"

namespace vsc {

std::string to_string(MoveKind k)
{
    switch (k) {
    case MoveKind::M: return "m";
    case MoveKind::ELambda: return "e_lambda";
    case MoveKind::EVar: return "e_var";
    case MoveKind::Glue: return "glue";
    case MoveKind::Equiv: return "equiv";
    }
    return "?";
}

Derivation empty_many(const Term& v)
{
    return make_many(v, {});
}

Derivation ax_bundle(const std::string& x, const MultiType& m)
{
    std::vector<Derivation> ps;
    for (const auto& a : m.items)
        ps.push_back(make_ax(x, a));
    return make_many(Term::var(x), std::move(ps));
}

// ---------------------------------------------------------------- renaming

namespace {

std::set<std::string> names_of(const Derivation& d, const std::string& a, const std::string& b)
{
    std::set<std::string> s = all_names(d.subject());
    s.insert(a);
    s.insert(b);
    return s;
}

// Renames the binder of a lambda or es node to y.
Derivation rebind(const Derivation& d, const std::string& y)
{
    const std::string& x = d.subject().name();
    if (x == y)
        return d;
    if (d.rule == Rule::Lam)
        return make_lam(y, rename_var(d.premises[0], x, y));
    return make_es(rename_var(d.premises[0], x, y), y, d.premises[1]);
}

Derivation rebind_fresh(const Derivation& d, const std::set<std::string>& avoid)
{
    std::set<std::string> a = avoid;
    auto more = all_names(d.subject());
    a.insert(more.begin(), more.end());
    return rebind(d, fresh_name(d.subject().name(), a));
}

} // namespace

Derivation rename_var(const Derivation& d, const std::string& from, const std::string& to)
{
    if (from == to || !occurs_free(from, d.subject()))
        return d;
    switch (d.rule) {
    case Rule::Ax:
        return make_ax(to, d.linear());
    case Rule::Many: {
        if (d.premises.empty())
            return make_many(rename_free(d.subject(), from, to), {});
        std::vector<Derivation> ps;
        for (const auto& p : d.premises)
            ps.push_back(rename_var(p, from, to));
        Term subj = ps.front().subject();
        return make_many(subj, std::move(ps));
    }
    case Rule::Lam:
    case Rule::Es: {
        std::string y = d.subject().name();
        Derivation body = d.premises[0];
        if (y != from && y == to) {
            std::string y2 = fresh_name(y, names_of(d, from, to));
            body = rename_var(body, y, y2);
            y = y2;
        }
        if (y != from)
            body = rename_var(body, from, to);
        if (d.rule == Rule::Lam)
            return make_lam(y, std::move(body));
        return make_es(std::move(body), y, rename_var(d.premises[1], from, to));
    }
    case Rule::App:
        return make_app(rename_var(d.premises[0], from, to), rename_var(d.premises[1], from, to));
    }
    return d;
}

Derivation align(const Derivation& d, const Term& target)
{
    auto mismatch = [&]() {
        return DeriveError("derivation for " + print(d.subject()) + " does not type " + print(target));
    };
    switch (d.rule) {
    case Rule::Ax:
        if (!target.is_var() || target.name() != d.subject().name())
            throw mismatch();
        return d;
    case Rule::Many: {
        if (!target.is_value())
            throw mismatch();
        std::vector<Derivation> ps;
        for (const auto& p : d.premises)
            ps.push_back(align(p, target));
        return make_many(target, std::move(ps));
    }
    case Rule::Lam:
    case Rule::Es: {
        if ((d.rule == Rule::Lam && !target.is_abs()) || (d.rule == Rule::Es && !target.is_es()))
            throw mismatch();
        Derivation body = d.premises[0];
        const std::string& y = target.name();
        if (d.subject().name() != y)
            body = rename_var(body, d.subject().name(), y);
        body = align(body, target.body());
        if (d.rule == Rule::Lam)
            return make_lam(y, std::move(body));
        return make_es(std::move(body), y, align(d.premises[1], target.def()));
    }
    case Rule::App:
        if (!target.is_app())
            throw mismatch();
        return make_app(align(d.premises[0], target.fun()), align(d.premises[1], target.arg()));
    }
    throw mismatch();
}

// ---------------------------------------------------------------- split / merge

std::pair<Derivation, Derivation> split_value(const Derivation& d, const MultiType& m1, const MultiType& m2)
{
    if (d.rule != Rule::Many)
        throw DeriveError("split needs a derivation of a value: " + print(d.subject()));
    if (!(m1 + m2 == d.multi()))
        throw DeriveError("split " + to_string(m1) + " + " + to_string(m2) + " differs from " + to_string(d.multi()));
    std::vector<bool> used(d.premises.size(), false);
    std::vector<Derivation> first, second;
    for (const auto& a : m1.items) {
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            if (!used[i] && d.premises[i].linear() == a) {
                used[i] = true;
                first.push_back(d.premises[i]);
                break;
            }
        }
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i)
        if (!used[i])
            second.push_back(d.premises[i]);
    return {make_many(d.subject(), std::move(first)), make_many(d.subject(), std::move(second))};
}

Derivation merge_value(const Derivation& a, const Derivation& b)
{
    if (a.rule != Rule::Many || b.rule != Rule::Many)
        throw DeriveError("merge needs derivations of values");
    if (!alpha_equal(a.subject(), b.subject()))
        throw DeriveError("merge of different values: " + print(a.subject()) + " and " + print(b.subject()));
    std::vector<Derivation> ps = a.premises;
    for (const auto& p : b.premises)
        ps.push_back(align(p, a.subject()));
    return make_many(a.subject(), std::move(ps));
}

// ---------------------------------------------------------------- substitution

namespace {

Derivation subst_rec(const Derivation& phi, const std::string& x, const Derivation& psi,
                     const std::set<std::string>& fv_v)
{
    const Term& s = phi.subject();
    if (!occurs_free(x, s))
        return phi;
    switch (phi.rule) {
    case Rule::Many: {
        if (s.is_var())
            return psi;
        if (phi.premises.empty())
            return empty_many(meta_subst(s, x, psi.subject()));
        Derivation rest = psi;
        std::vector<Derivation> out;
        std::string y = s.name();
        if (fv_v.count(y)) {
            std::set<std::string> avoid = fv_v;
            auto more = all_names(s);
            avoid.insert(more.begin(), more.end());
            y = fresh_name(y, avoid);
        }
        for (const auto& lam : phi.premises) {
            MultiType ni = ctx_get(lam.ctx(), x);
            auto left = subtract(rest.multi(), ni);
            if (!left)
                throw DeriveError("substitution: type of " + x + " is not covered");
            auto [part, remaining] = split_value(rest, ni, *left);
            rest = remaining;
            Derivation l = rebind(lam, y);
            out.push_back(make_lam(y, subst_rec(l.premises[0], x, part, fv_v)));
        }
        Term subj = out.front().subject();
        return make_many(subj, std::move(out));
    }
    case Rule::App: {
        MultiType n1 = ctx_get(phi.premises[0].ctx(), x);
        MultiType n2 = ctx_get(phi.premises[1].ctx(), x);
        auto [p1, p2] = split_value(psi, n1, n2);
        return make_app(subst_rec(phi.premises[0], x, p1, fv_v), subst_rec(phi.premises[1], x, p2, fv_v));
    }
    case Rule::Es: {
        if (s.name() == x)
            return make_es(phi.premises[0], x, subst_rec(phi.premises[1], x, psi, fv_v));
        Derivation e = fv_v.count(s.name()) ? rebind_fresh(phi, fv_v) : phi;
        MultiType n1 = ctx_get(e.premises[0].ctx(), x);
        MultiType n2 = ctx_get(e.premises[1].ctx(), x);
        auto [p1, p2] = split_value(psi, n1, n2);
        return make_es(subst_rec(e.premises[0], x, p1, fv_v), e.subject().name(),
                       subst_rec(e.premises[1], x, p2, fv_v));
    }
    default:
        throw DeriveError("substitution reached a linear judgment");
    }
}

} // namespace

Derivation subst_lemma(const Derivation& phi, const std::string& x, const Derivation& psi)
{
    if (psi.rule != Rule::Many)
        throw DeriveError("substitution needs a derivation of a value, got " + print(psi.subject()));
    if (!(ctx_get(phi.ctx(), x) == psi.multi()))
        throw DeriveError("substitution: " + x + " has type " + to_string(ctx_get(phi.ctx(), x)) +
                          " but the value has " + to_string(psi.multi()));
    return subst_rec(phi, x, psi, free_vars(psi.subject()));
}

// ---------------------------------------------------------------- removal

namespace {

Removal removal_rec(const Derivation& phi, const Term& t, const std::string& x, const Term& v,
                    const std::set<std::string>& fv_v)
{
    if (!occurs_free(x, t))
        return {align(phi, t), empty_many(v)};
    auto mismatch = [&]() {
        return DeriveError("removal: derivation of " + print(phi.subject()) + " does not match " + print(t));
    };
    switch (t.kind()) {
    case Kind::Var: {
        Derivation theta = align(phi, v);
        return {ax_bundle(x, theta.multi()), theta};
    }
    case Kind::Abs: {
        if (phi.rule != Rule::Many)
            throw mismatch();
        std::string y = t.name();
        Term body = t.body();
        if (fv_v.count(y)) {
            std::set<std::string> avoid = all_names(t);
            avoid.insert(fv_v.begin(), fv_v.end());
            std::string y2 = fresh_name(y, avoid);
            body = rename_free(body, y, y2);
            y = y2;
        }
        std::vector<Derivation> lams;
        Derivation theta = empty_many(v);
        for (const auto& lam : phi.premises) {
            Derivation p = rename_var(lam.premises[0], lam.subject().name(), y);
            Removal r = removal_rec(p, body, x, v, fv_v);
            lams.push_back(make_lam(y, std::move(r.psi)));
            theta = merge_value(theta, r.theta);
        }
        return {make_many(Term::abs(y, body), std::move(lams)), theta};
    }
    case Kind::App: {
        if (phi.rule != Rule::App)
            throw mismatch();
        Removal a = removal_rec(phi.premises[0], t.fun(), x, v, fv_v);
        Removal b = removal_rec(phi.premises[1], t.arg(), x, v, fv_v);
        return {make_app(std::move(a.psi), std::move(b.psi)), merge_value(a.theta, b.theta)};
    }
    case Kind::ES: {
        if (phi.rule != Rule::Es)
            throw mismatch();
        std::string y = t.name();
        if (y == x) {
            Removal b = removal_rec(phi.premises[1], t.def(), x, v, fv_v);
            return {make_es(align(phi.premises[0], t.body()), y, std::move(b.psi)), b.theta};
        }
        Term body = t.body();
        if (fv_v.count(y)) {
            std::set<std::string> avoid = all_names(t);
            avoid.insert(fv_v.begin(), fv_v.end());
            std::string y2 = fresh_name(y, avoid);
            body = rename_free(body, y, y2);
            y = y2;
        }
        Derivation p0 = rename_var(phi.premises[0], phi.subject().name(), y);
        Removal a = removal_rec(p0, body, x, v, fv_v);
        Removal b = removal_rec(phi.premises[1], t.def(), x, v, fv_v);
        return {make_es(std::move(a.psi), y, std::move(b.psi)), merge_value(a.theta, b.theta)};
    }
    default:
        throw mismatch();
    }
}

} // namespace

Removal removal_lemma(const Derivation& phi, const Term& t, const std::string& x, const Term& v)
{
    if (!v.is_value())
        throw DeriveError("removal needs a value, got " + print(v));
    if (!alpha_equal(phi.subject(), meta_subst(t, x, v)))
        throw DeriveError("removal: " + print(t) + "{" + x + "<-" + print(v) + "} is not " + print(phi.subject()));
    return removal_rec(phi, t, x, v, free_vars(v));
}

// ---------------------------------------------------------------- linear substitution

namespace {

Path linear_occurrence(const Term& body, const std::string& x)
{
    std::size_t n = count_free(x, body);
    if (n != 1)
        throw DeriveError("linear substitution: " + x + " occurs " + std::to_string(n) + " times");
    Path p = *free_occurrence(body, x);
    const Term* cur = &body;
    for (int i : p) {
        if (cur->is_abs())
            throw DeriveError("linear substitution: " + x + " occurs under an abstraction");
        cur = &cur->child(i);
    }
    return p;
}

Derivation graft(const Derivation& d, const Path& p, std::size_t k, const Derivation& def,
                 const std::set<std::string>& fv_def)
{
    if (k == p.size()) {
        if (!(d.multi() == def.multi()))
            throw DeriveError("linear substitution: hole typed " + to_string(d.multi()) + " but definition " +
                              to_string(def.multi()));
        return def;
    }
    int i = p[k];
    switch (d.rule) {
    case Rule::App:
        return i == 0 ? make_app(graft(d.premises[0], p, k + 1, def, fv_def), d.premises[1])
                      : make_app(d.premises[0], graft(d.premises[1], p, k + 1, def, fv_def));
    case Rule::Es: {
        if (i == 1)
            return make_es(d.premises[0], d.subject().name(), graft(d.premises[1], p, k + 1, def, fv_def));
        Derivation e = fv_def.count(d.subject().name()) ? rebind_fresh(d, fv_def) : d;
        return make_es(graft(e.premises[0], p, k + 1, def, fv_def), e.subject().name(), e.premises[1]);
    }
    default:
        throw DeriveError("linear substitution: position is not in an open context");
    }
}

Derivation extract(const Derivation& d, const Path& p, std::size_t k, const std::string& x,
                   std::optional<Derivation>& out)
{
    if (k == p.size()) {
        out = d;
        return ax_bundle(x, d.multi());
    }
    int i = p[k];
    switch (d.rule) {
    case Rule::App:
        return i == 0 ? make_app(extract(d.premises[0], p, k + 1, x, out), d.premises[1])
                      : make_app(d.premises[0], extract(d.premises[1], p, k + 1, x, out));
    case Rule::Es: {
        if (i == 1)
            return make_es(d.premises[0], d.subject().name(), extract(d.premises[1], p, k + 1, x, out));
        Derivation e = d.subject().name() == x ? rebind_fresh(d, {x}) : d;
        return make_es(extract(e.premises[0], p, k + 1, x, out), e.subject().name(), e.premises[1]);
    }
    default:
        throw DeriveError("linear substitution: position is not in an open context");
    }
}

} // namespace

Derivation linear_subst(const Derivation& phi, Direction dir, const Term& redex)
{
    if (dir == Direction::Forward) {
        if (phi.rule != Rule::Es)
            throw DeriveError("linear substitution needs a derivation of O<x>[x<-t]");
        const Term& s = phi.subject();
        Path p = linear_occurrence(s.body(), s.name());
        return graft(phi.premises[0], p, 0, phi.premises[1], free_vars(s.def()));
    }
    if (!redex || !redex.is_es())
        throw DeriveError("backward linear substitution needs the redex O<x>[x<-t]");
    Path p = linear_occurrence(redex.body(), redex.name());
    std::optional<Derivation> def;
    Derivation body = extract(phi, p, 0, redex.name(), def);
    return make_es(std::move(body), redex.name(), std::move(*def));
}

// ---------------------------------------------------------------- moves

Move move_of(const Trace& tr, std::size_t i)
{
    const TraceStep& s = tr.steps.at(i);
    Move mv;
    mv.path = s.path;
    switch (s.kind) {
    case StepKind::M: mv.kind = MoveKind::M; break;
    case StepKind::ELambda: mv.kind = MoveKind::ELambda; break;
    case StepKind::EVar: mv.kind = MoveKind::EVar; break;
    case StepKind::Glue: mv.kind = MoveKind::Glue; break;
    case StepKind::BetaV: throw DeriveError("beta_v steps are not steps of the calculus with ES");
    }
    mv.before = tr.term_before(i);
    mv.after = s.result;
    return mv;
}

Move move_of(const Term& before, const EquivStep& s)
{
    Move mv;
    mv.path = s.path;
    mv.kind = MoveKind::Equiv;
    mv.axiom = s.axiom;
    mv.forward = s.forward;
    mv.before = before;
    mv.after = s.result;
    return mv;
}

namespace {

void validate(const Move& mv)
{
    if (!mv.before || !mv.after)
        throw DeriveError("step without terms");
    Term sub;
    try {
        sub = subterm_at(mv.before, mv.path);
    } catch (const std::out_of_range&) {
        throw DeriveError("step position is not in the term");
    }
    std::optional<Term> res;
    try {
        switch (mv.kind) {
        case MoveKind::M: res = contract_m(sub); break;
        case MoveKind::ELambda:
            if (!skip_subs(sub.def()).is_abs())
                throw DeriveError("not an e_lambda step");
            res = contract_e(sub);
            break;
        case MoveKind::EVar:
            if (!sub.is_es() || !skip_subs(sub.def()).is_var())
                throw DeriveError("not an e_var step");
            res = contract_e(sub);
            break;
        case MoveKind::Glue: res = contract_glue(sub); break;
        case MoveKind::Equiv: res = equiv_root(sub, mv.axiom, mv.forward); break;
        }
    } catch (const std::invalid_argument& e) {
        throw DeriveError(std::string("invalid step: ") + e.what());
    }
    if (!res || !alpha_equal(replace_at(mv.before, mv.path, *res), mv.after))
        throw DeriveError("invalid step: " + print(mv.before) + " does not " + to_string(mv.kind) + "-step to " +
                          print(mv.after));
}

using Sub = std::pair<std::string, Derivation>; // binder and definition of one ES of L

// Peels k ES nodes off d, outermost first.
Derivation peel(const Derivation& d, std::size_t k, std::vector<Sub>& subs)
{
    Derivation cur = d;
    for (std::size_t j = 0; j < k; ++j) {
        if (cur.rule != Rule::Es)
            throw DeriveError("expected a substitution context in " + print(cur.subject()));
        subs.push_back({cur.subject().name(), cur.premises[1]});
        Derivation next = cur.premises[0];
        cur = std::move(next);
    }
    return cur;
}

Derivation wrap(Derivation inner, const std::vector<Sub>& subs)
{
    for (auto it = subs.rbegin(); it != subs.rend(); ++it)
        inner = make_es(std::move(inner), it->first, it->second);
    return inner;
}

// Renames every binder of the ES spine of d apart from avoid.
Derivation rename_spine(const Derivation& d, std::set<std::string>& avoid)
{
    if (d.rule != Rule::Es)
        return d;
    auto names = all_names(d.subject());
    avoid.insert(names.begin(), names.end());
    std::string y = fresh_name(d.subject().name(), avoid);
    avoid.insert(y);
    Derivation body = rename_var(d.premises[0], d.subject().name(), y);
    return make_es(rename_spine(body, avoid), y, d.premises[1]);
}

Derivation reduce_m(const Derivation& d)
{
    if (d.rule != Rule::App)
        throw DeriveError("m-step on a non-application derivation");
    std::set<std::string> avoid = all_names(d.subject());
    Derivation f = rename_spine(d.premises[0], avoid);
    std::vector<Sub> subs;
    Derivation core = peel(f, sub_depth(f.subject()), subs);
    if (core.rule != Rule::Many || core.premises.size() != 1)
        throw DeriveError("m-step: function is not typed by a single lambda");
    const Derivation& lam = core.premises[0];
    return wrap(make_es(lam.premises[0], lam.subject().name(), d.premises[1]), subs);
}

Derivation reduce_e(const Derivation& d)
{
    if (d.rule != Rule::Es)
        throw DeriveError("e-step on a non-substitution derivation");
    std::set<std::string> avoid = all_names(d.subject());
    Derivation def = rename_spine(d.premises[1], avoid);
    std::vector<Sub> subs;
    Derivation value = peel(def, sub_depth(def.subject()), subs);
    return wrap(subst_lemma(d.premises[0], d.subject().name(), value), subs);
}

Derivation equiv_d(const Derivation& d, Axiom a, bool forward)
{
    auto fail = [&]() {
        return DeriveError("axiom " + to_string(a) + " does not apply to " + print(d.subject()));
    };
    auto fresh_for = [&](const Derivation& e) { return rebind_fresh(e, all_names(d.subject())); };
    switch (a) {
    case Axiom::AtLeft:
        if (forward) {
            if (d.rule != Rule::App || d.premises[0].rule != Rule::Es)
                throw fail();
            Derivation e = d.premises[0];
            const Derivation& s = d.premises[1];
            if (occurs_free(e.subject().name(), s.subject()))
                e = fresh_for(e);
            return make_es(make_app(e.premises[0], s), e.subject().name(), e.premises[1]);
        }
        if (d.rule != Rule::Es || d.premises[0].rule != Rule::App ||
            occurs_free(d.subject().name(), d.premises[0].premises[1].subject()))
            throw fail();
        return make_app(make_es(d.premises[0].premises[0], d.subject().name(), d.premises[1]),
                        d.premises[0].premises[1]);
    case Axiom::AtRight:
        if (forward) {
            if (d.rule != Rule::App || d.premises[1].rule != Rule::Es)
                throw fail();
            const Derivation& t = d.premises[0];
            Derivation e = d.premises[1];
            if (occurs_free(e.subject().name(), t.subject()))
                e = fresh_for(e);
            return make_es(make_app(t, e.premises[0]), e.subject().name(), e.premises[1]);
        }
        if (d.rule != Rule::Es || d.premises[0].rule != Rule::App ||
            occurs_free(d.subject().name(), d.premises[0].premises[0].subject()))
            throw fail();
        return make_app(d.premises[0].premises[0],
                        make_es(d.premises[0].premises[1], d.subject().name(), d.premises[1]));
    case Axiom::Sub:
        if (forward) {
            // t[x<-u][y<-s] -> t[x<-u[y<-s]]
            if (d.rule != Rule::Es || d.premises[0].rule != Rule::Es)
                throw fail();
            Derivation outer = d;
            if (outer.subject().name() == outer.premises[0].subject().name())
                outer = fresh_for(outer);
            const Derivation& inner = outer.premises[0];
            const std::string& y = outer.subject().name();
            if (occurs_free(y, inner.premises[0].subject()))
                throw fail();
            return make_es(inner.premises[0], inner.subject().name(),
                           make_es(inner.premises[1], y, outer.premises[1]));
        }
        {
            // t[x<-u[y<-s]] -> t[x<-u][y<-s]
            if (d.rule != Rule::Es || d.premises[1].rule != Rule::Es)
                throw fail();
            Derivation def = d.premises[1];
            if (def.subject().name() == d.subject().name() ||
                occurs_free(def.subject().name(), d.premises[0].subject()))
                def = fresh_for(def);
            return make_es(make_es(d.premises[0], d.subject().name(), def.premises[0]), def.subject().name(),
                           def.premises[1]);
        }
    case Axiom::Com: {
        // t[y<-s][x<-u] -> t[x<-u][y<-s]
        if (d.rule != Rule::Es || d.premises[0].rule != Rule::Es)
            throw fail();
        const std::string& x = d.subject().name();
        Derivation inner = d.premises[0];
        if (occurs_free(x, inner.premises[1].subject()))
            throw fail();
        if (inner.subject().name() == x || occurs_free(inner.subject().name(), d.premises[1].subject()))
            inner = fresh_for(inner);
        return make_es(make_es(inner.premises[0], x, d.premises[1]), inner.subject().name(), inner.premises[1]);
    }
    }
    throw fail();
}

Derivation expand_m(const Derivation& d, const Term& before)
{
    std::vector<Sub> subs;
    Derivation core = peel(d, sub_depth(before.fun()), subs);
    if (core.rule != Rule::Es)
        throw DeriveError("m-expansion: expected an explicit substitution");
    const Derivation& body = core.premises[0];
    const std::string& x = core.subject().name();
    Derivation lam = make_lam(x, body);
    Derivation fun = wrap(make_many(lam.subject(), {lam}), subs);
    return make_app(std::move(fun), core.premises[1]);
}

Derivation expand_e(const Derivation& d, const Term& before)
{
    const Term& t = before.body();
    const std::string& x = before.name();
    std::size_t k = sub_depth(before.def());
    std::vector<Sub> subs;
    Derivation core = peel(d, k, subs);

    // The reduct names the binders of L as subs does; carry v over to those names.
    std::vector<std::string> old_names;
    for (const Term* cur = &before.def(); cur->is_es(); cur = &cur->body())
        old_names.push_back(cur->name());
    Term v = skip_subs(before.def());
    std::set<std::string> avoid = all_names(before);
    for (const auto& s : subs)
        avoid.insert(s.first);
    std::vector<std::string> tmp(k);
    for (std::size_t j = k; j-- > 0;) { // innermost binder first
        tmp[j] = fresh_name(old_names[j], avoid);
        avoid.insert(tmp[j]);
        v = rename_free(v, old_names[j], tmp[j]);
    }
    for (std::size_t j = 0; j < k; ++j)
        v = rename_free(v, tmp[j], subs[j].first);

    Removal r = removal_lemma(core, t, x, v);
    return make_es(std::move(r.psi), x, wrap(std::move(r.theta), subs));
}

Derivation map_at(const Derivation& d, const Path& p, std::size_t k,
                  const std::function<Derivation(const Derivation&)>& f, std::size_t& copies)
{
    if (k == p.size()) {
        ++copies;
        return f(d);
    }
    int i = p[k];
    switch (d.rule) {
    case Rule::Many: {
        if (!d.subject().is_abs() || i != 0)
            throw DeriveError("position leaves the derivation");
        if (d.premises.empty())
            return d;
        std::vector<Derivation> ps;
        for (const auto& lam : d.premises)
            ps.push_back(make_lam(lam.subject().name(), map_at(lam.premises[0], p, k + 1, f, copies)));
        Term subj = ps.front().subject();
        return make_many(subj, std::move(ps));
    }
    case Rule::App:
        return i == 0 ? make_app(map_at(d.premises[0], p, k + 1, f, copies), d.premises[1])
                      : make_app(d.premises[0], map_at(d.premises[1], p, k + 1, f, copies));
    case Rule::Es:
        return i == 0 ? make_es(map_at(d.premises[0], p, k + 1, f, copies), d.subject().name(), d.premises[1])
                      : make_es(d.premises[0], d.subject().name(), map_at(d.premises[1], p, k + 1, f, copies));
    default:
        throw DeriveError("position leaves the derivation");
    }
}

void check_sizes(const Derivation& big, const Derivation& small, MoveKind kind, std::size_t copies)
{
    if (copies == 0)
        return;
    bool ok = true;
    if (kind == MoveKind::M)
        ok = size_m(small) + 2 * copies == size_m(big) && size(small) + copies == size(big);
    else if (kind == MoveKind::ELambda || kind == MoveKind::EVar)
        ok = size_m(small) == size_m(big) && size(small) < size(big);
    if (!ok)
        throw std::logic_error("size law violated for a " + to_string(kind) + " step on " + print(big.subject()));
}

void check_same_judgment(const Derivation& a, const Derivation& b)
{
    const auto& ja = a.judgment;
    const auto& jb = b.judgment;
    bool same_type = ja.type.index() == jb.type.index() &&
                     (std::holds_alternative<MultiType>(ja.type)
                          ? std::get<MultiType>(ja.type) == std::get<MultiType>(jb.type)
                          : std::get<LinearType>(ja.type) == std::get<LinearType>(jb.type));
    if (!same_type || ja.ctx.size() != jb.ctx.size())
        throw std::logic_error("final judgment changed");
    for (const auto& [x, m] : ja.ctx)
        if (!(ctx_get(jb.ctx, x) == m))
            throw std::logic_error("final judgment changed");
}

} // namespace

std::size_t copies_at(const Derivation& phi, const Path& p)
{
    std::size_t copies = 0;
    map_at(phi, p, 0, [](const Derivation& d) { return d; }, copies);
    return copies;
}

Derivation subject_reduce(const Derivation& phi, const Move& mv)
{
    validate(mv);
    Derivation d = align(phi, mv.before);
    std::function<Derivation(const Derivation&)> f;
    switch (mv.kind) {
    case MoveKind::M: f = reduce_m; break;
    case MoveKind::ELambda:
    case MoveKind::EVar: f = reduce_e; break;
    case MoveKind::Glue: f = [](const Derivation& n) { return linear_subst(n, Direction::Forward); }; break;
    case MoveKind::Equiv: f = [&](const Derivation& n) { return equiv_d(n, mv.axiom, mv.forward); }; break;
    }
    std::size_t copies = 0;
    Derivation out = align(map_at(d, mv.path, 0, f, copies), mv.after);
    check_same_judgment(d, out);
    check_sizes(d, out, mv.kind, copies);
    return out;
}

Derivation subject_expand(const Derivation& phi, const Move& mv)
{
    validate(mv);
    Derivation d = align(phi, mv.after);
    const Term& before = subterm_at(mv.before, mv.path);
    std::function<Derivation(const Derivation&)> f;
    switch (mv.kind) {
    case MoveKind::M: f = [&](const Derivation& n) { return expand_m(n, before); }; break;
    case MoveKind::ELambda:
    case MoveKind::EVar: f = [&](const Derivation& n) { return expand_e(n, before); }; break;
    case MoveKind::Glue: f = [&](const Derivation& n) { return linear_subst(n, Direction::Backward, before); }; break;
    case MoveKind::Equiv: {
        bool dir = mv.axiom == Axiom::Com || !mv.forward;
        f = [&, dir](const Derivation& n) { return equiv_d(n, mv.axiom, dir); };
        break;
    }
    }
    std::size_t copies = 0;
    Derivation out = align(map_at(d, mv.path, 0, f, copies), mv.before);
    check_same_judgment(d, out);
    check_sizes(out, d, mv.kind, copies);
    return out;
}

// ---------------------------------------------------------------- normal forms

Derivation type_inert_any(const Term& i, const MultiType& m)
{
    if (!is_inert(i))
        throw DeriveError("not an inert term: " + print(i));
    switch (i.kind()) {
    case Kind::Var:
        return ax_bundle(i.name(), m);
    case Kind::App: {
        Derivation head = type_inert_any(i.fun(), singleton(LinearType::arrow({}, m)));
        return make_app(std::move(head), type_fireball_tight(i.arg()));
    }
    case Kind::ES: {
        Derivation body = type_inert_any(i.body(), m);
        MultiType n = ctx_get(body.ctx(), i.name());
        return make_es(std::move(body), i.name(), type_inert_any(i.def(), n));
    }
    default:
        throw DeriveError("not an inert term: " + print(i));
    }
}

Derivation type_fireball_tight(const Term& f)
{
    if (!is_fireball(f))
        throw DeriveError("not a fireball: " + print(f));
    if (f.is_value())
        return empty_many(f);
    if (is_inert(f))
        return type_inert_any(f, {});
    Derivation body = type_fireball_tight(f.body());
    MultiType n = ctx_get(body.ctx(), f.name());
    return make_es(std::move(body), f.name(), type_inert_any(f.def(), n));
}

Derivation type_solved_fireball(const Term& fs)
{
    if (!is_solved_fireball(fs))
        throw DeriveError("not a solved fireball: " + print(fs));
    if (is_inert(fs))
        return type_inert_any(fs, ground(1));
    if (fs.is_abs()) {
        Derivation lam = make_lam(fs.name(), type_solved_fireball(fs.body()));
        return make_many(fs, {std::move(lam)});
    }
    Derivation body = type_solved_fireball(fs.body());
    MultiType n = ctx_get(body.ctx(), fs.name());
    return make_es(std::move(body), fs.name(), type_inert_any(fs.def(), n));
}

std::optional<Inference> infer(const Term& t, Mode mode, std::size_t fuel)
{
    Strategy s{mode == Mode::Open ? Closure::Open : Closure::Solving, true, false};
    Trace tr = reduce(t, s, fuel, true);
    if (tr.status != Status::NormalForm)
        return std::nullopt;
    const Term& nf = tr.final_term();
    Derivation d = mode == Mode::Open ? type_fireball_tight(nf) : type_solved_fireball(nf);
    for (std::size_t i = tr.steps.size(); i-- > 0;)
        d = subject_expand(d, move_of(tr, i));
    return Inference{std::move(d), std::move(tr)};
}

} // namespace vsc
