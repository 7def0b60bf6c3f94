#include "vsc/multitypes.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace vsc {

LinearType LinearType::arrow(MultiType m, MultiType n)
{
    LinearType a;
    a.is_arrow = true;
    a.left = std::move(m);
    a.right = std::move(n);
    return a;
}

int compare(const MultiType& a, const MultiType& b)
{
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.items[i], b.items[i]))
            return c;
    if (a.size() == b.size())
        return 0;
    return a.size() < b.size() ? -1 : 1;
}

int compare(const LinearType& a, const LinearType& b)
{
    if (a.is_arrow != b.is_arrow)
        return a.is_arrow ? 1 : -1;
    if (!a.is_arrow)
        return 0;
    if (int c = compare(a.left, b.left))
        return c;
    return compare(a.right, b.right);
}

bool operator==(const LinearType& a, const LinearType& b) { return compare(a, b) == 0; }
bool operator==(const MultiType& a, const MultiType& b) { return compare(a, b) == 0; }
bool operator<(const LinearType& a, const LinearType& b) { return compare(a, b) < 0; }
bool operator<(const MultiType& a, const MultiType& b) { return compare(a, b) < 0; }

MultiType multiset(std::vector<LinearType> items)
{
    std::sort(items.begin(), items.end(), [](const LinearType& a, const LinearType& b) { return a < b; });
    return MultiType{std::move(items)};
}

MultiType singleton(const LinearType& a)
{
    return MultiType{{a}};
}

MultiType ground(std::size_t n)
{
    return MultiType{std::vector<LinearType>(n, LinearType::atom())};
}

MultiType operator+(const MultiType& a, const MultiType& b)
{
    std::vector<LinearType> items;
    items.reserve(a.size() + b.size());
    std::merge(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(), std::back_inserter(items),
               [](const LinearType& x, const LinearType& y) { return x < y; });
    return MultiType{std::move(items)};
}

std::optional<MultiType> subtract(const MultiType& a, const MultiType& b)
{
    std::vector<LinearType> rest;
    std::size_t j = 0;
    for (const auto& item : a.items) {
        if (j < b.size() && item == b.items[j])
            ++j;
        else
            rest.push_back(item);
    }
    if (j != b.size())
        return std::nullopt;
    return MultiType{std::move(rest)};
}

std::string to_string(const MultiType& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(m.items[i]);
    }
    return s + "]";
}

std::string to_string(const LinearType& a)
{
    if (!a.is_arrow)
        return "X";
    return to_string(a.left) + " -o " + to_string(a.right);
}

// ---------------------------------------------------------------- contexts

TypeContext ctx_join(const TypeContext& a, const TypeContext& b)
{
    TypeContext out = a;
    for (const auto& [x, m] : b) {
        auto it = out.find(x);
        if (it == out.end())
            out.emplace(x, m);
        else
            it->second = it->second + m;
    }
    return out;
}

MultiType ctx_get(const TypeContext& g, const std::string& x)
{
    auto it = g.find(x);
    return it == g.end() ? MultiType{} : it->second;
}

TypeContext ctx_remove(const TypeContext& g, const std::string& x)
{
    TypeContext out = g;
    out.erase(x);
    return out;
}

TypeContext ctx_single(const std::string& x, const MultiType& m)
{
    TypeContext g;
    if (!m.empty())
        g.emplace(x, m);
    return g;
}

std::string to_string(const TypeContext& g)
{
    std::string s;
    for (const auto& [x, m] : g) {
        if (!s.empty())
            s += ", ";
        s += x + " : " + to_string(m);
    }
    return s;
}

// ---------------------------------------------------------------- type predicates

bool is_ground(const MultiType& m)
{
    return std::all_of(m.items.begin(), m.items.end(), [](const LinearType& a) { return !a.is_arrow; });
}

bool is_inert_type(const MultiType& m)
{
    // A ::= X | n[X] -o M^i
    return std::all_of(m.items.begin(), m.items.end(), [](const LinearType& a) {
        return !a.is_arrow || (is_ground(a.left) && is_inert_type(a.right));
    });
}

bool is_solvable_type(const MultiType& m)
{
    // n > 0,  A ::= X | M -o M^s
    return !m.empty() && std::all_of(m.items.begin(), m.items.end(), [](const LinearType& a) {
        return !a.is_arrow || is_solvable_type(a.right);
    });
}

bool is_unitary_solvable(const MultiType& m)
{
    if (m.size() != 1)
        return false;
    const LinearType& a = m.items.front();
    return !a.is_arrow || is_unitary_solvable(a.right);
}

bool is_inertly_solvable(const MultiType& m)
{
    // n > 0,  A ::= X | M^i -o M^is
    return !m.empty() && std::all_of(m.items.begin(), m.items.end(), [](const LinearType& a) {
        return !a.is_arrow || (is_inert_type(a.left) && is_inertly_solvable(a.right));
    });
}

TypeFlags type_flags(const MultiType& m)
{
    TypeFlags f;
    f.ground = is_ground(m);
    f.inert = is_inert_type(m);
    f.solvable = is_solvable_type(m);
    f.unitary_solvable = is_unitary_solvable(m);
    f.inertly_solvable = is_inertly_solvable(m);
    f.precisely_solvable = f.unitary_solvable && f.inertly_solvable;
    return f;
}

bool is_inert_context(const TypeContext& g)
{
    return std::all_of(g.begin(), g.end(), [](const auto& kv) { return is_inert_type(kv.second); });
}

// ---------------------------------------------------------------- derivations

std::string to_string(Rule r)
{
    switch (r) {
    case Rule::Ax: return "ax";
    case Rule::Lam: return "lambda";
    case Rule::App: return "@";
    case Rule::Es: return "es";
    case Rule::Many: return "many";
    }
    return "?";
}

std::string to_string(const Type& t)
{
    if (auto a = std::get_if<LinearType>(&t))
        return to_string(*a);
    return to_string(std::get<MultiType>(t));
}

const MultiType& Derivation::multi() const
{
    if (auto m = std::get_if<MultiType>(&judgment.type))
        return *m;
    throw DerivationError(DerivationError::Code::RuleShapeMismatch, {},
                          "expected a multi type conclusion for " + print(subject()));
}

const LinearType& Derivation::linear() const
{
    if (auto a = std::get_if<LinearType>(&judgment.type))
        return *a;
    throw DerivationError(DerivationError::Code::RuleShapeMismatch, {},
                          "expected a linear type conclusion for " + print(subject()));
}

std::size_t size(const Derivation& d)
{
    std::size_t n = d.rule == Rule::Many ? 0 : 1;
    for (const auto& p : d.premises)
        n += size(p);
    return n;
}

std::size_t size_m(const Derivation& d)
{
    std::size_t n = (d.rule == Rule::Lam || d.rule == Rule::App) ? 1 : 0;
    for (const auto& p : d.premises)
        n += size_m(p);
    return n;
}

std::string to_string(DerivationError::Code c)
{
    switch (c) {
    case DerivationError::Code::RuleShapeMismatch: return "RuleShapeMismatch";
    case DerivationError::Code::ContextSumMismatch: return "ContextSumMismatch";
    case DerivationError::Code::ManyOnNonValue: return "ManyOnNonValue";
    case DerivationError::Code::SubjectMismatch: return "SubjectMismatch";
    }
    return "?";
}

namespace {

std::string path_string(const std::vector<int>& p)
{
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + std::to_string(p[i]);
    return s + "]";
}

using Code = DerivationError::Code;

bool is_multi(const Derivation& d)
{
    return std::holds_alternative<MultiType>(d.judgment.type);
}

} // namespace

DerivationError::DerivationError(Code code, std::vector<int> path, const std::string& detail)
    : std::runtime_error(to_string(code) + " at " + path_string(path) + ": " + detail), code_(code),
      path_(std::move(path))
{
}

Derivation make_ax(const std::string& x, const LinearType& a)
{
    return Derivation{Rule::Ax, {ctx_single(x, singleton(a)), Term::var(x), a}, {}};
}

Derivation make_lam(const std::string& x, Derivation premise)
{
    if (!is_multi(premise))
        throw DerivationError(Code::RuleShapeMismatch, {}, "lambda premise must conclude a multi type");
    LinearType a = LinearType::arrow(ctx_get(premise.ctx(), x), premise.multi());
    Judgment j{ctx_remove(premise.ctx(), x), Term::abs(x, premise.subject()), a};
    return Derivation{Rule::Lam, std::move(j), {std::move(premise)}};
}

Derivation make_many(const Term& value, std::vector<Derivation> premises)
{
    if (!value.is_value())
        throw DerivationError(Code::ManyOnNonValue, {}, print(value));
    TypeContext g;
    std::vector<LinearType> items;
    for (const auto& p : premises) {
        Rule want = value.is_var() ? Rule::Ax : Rule::Lam;
        if (p.rule != want)
            throw DerivationError(Code::RuleShapeMismatch, {}, "many premise must be " + to_string(want));
        g = ctx_join(g, p.ctx());
        items.push_back(p.linear());
    }
    Term subject = premises.empty() ? value : premises.front().subject();
    return Derivation{Rule::Many, {std::move(g), subject, multiset(std::move(items))}, std::move(premises)};
}

Derivation make_app(Derivation fun, Derivation arg)
{
    if (!is_multi(fun) || !is_multi(arg))
        throw DerivationError(Code::RuleShapeMismatch, {}, "@ premises must conclude multi types");
    const MultiType& ft = fun.multi();
    if (ft.size() != 1 || !ft.items[0].is_arrow || !(ft.items[0].left == arg.multi()))
        throw DerivationError(Code::RuleShapeMismatch, {},
                              "@ needs [M -o N] against M, got " + to_string(ft) + " and " + to_string(arg.multi()));
    Judgment j{ctx_join(fun.ctx(), arg.ctx()), Term::app(fun.subject(), arg.subject()), ft.items[0].right};
    return Derivation{Rule::App, std::move(j), {std::move(fun), std::move(arg)}};
}

Derivation make_es(Derivation body, const std::string& x, Derivation def)
{
    if (!is_multi(body) || !is_multi(def))
        throw DerivationError(Code::RuleShapeMismatch, {}, "es premises must conclude multi types");
    if (!(ctx_get(body.ctx(), x) == def.multi()))
        throw DerivationError(Code::RuleShapeMismatch, {},
                              "es needs " + x + " : " + to_string(ctx_get(body.ctx(), x)) + " against " +
                                  to_string(def.multi()));
    Judgment j{ctx_join(ctx_remove(body.ctx(), x), def.ctx()), Term::es(body.subject(), x, def.subject()),
               body.multi()};
    return Derivation{Rule::Es, std::move(j), {std::move(body), std::move(def)}};
}

// ---------------------------------------------------------------- checker

namespace {

bool same_ctx(const TypeContext& a, const TypeContext& b)
{
    if (a.size() != b.size())
        return false;
    for (const auto& [x, m] : a) {
        if (m.empty())
            return false;
        auto it = b.find(x);
        if (it == b.end() || !(it->second == m))
            return false;
    }
    return true;
}

bool same_type(const Type& a, const Type& b)
{
    if (a.index() != b.index())
        return false;
    if (auto la = std::get_if<LinearType>(&a))
        return *la == std::get<LinearType>(b);
    return std::get<MultiType>(a) == std::get<MultiType>(b);
}

void check_node(const Derivation& d, std::vector<int>& path, CheckResult& acc)
{
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(static_cast<int>(i));
        check_node(d.premises[i], path, acc);
        path.pop_back();
    }
    auto shape = [&](const std::string& msg) { return DerivationError(Code::RuleShapeMismatch, path, msg); };
    auto subject = [&](const std::string& msg) { return DerivationError(Code::SubjectMismatch, path, msg); };
    auto sum = [&](const std::string& msg) { return DerivationError(Code::ContextSumMismatch, path, msg); };
    const Term& s = d.subject();
    if (!s)
        throw subject("missing subject");

    switch (d.rule) {
    case Rule::Ax: {
        if (!d.premises.empty())
            throw shape("ax has no premises");
        if (!s.is_var())
            throw subject("ax subject must be a variable");
        auto a = std::get_if<LinearType>(&d.judgment.type);
        if (!a)
            throw shape("ax concludes a linear type");
        if (!same_ctx(d.ctx(), ctx_single(s.name(), singleton(*a))))
            throw shape("ax context must be " + s.name() + " : [A]");
        break;
    }
    case Rule::Lam: {
        if (d.premises.size() != 1)
            throw shape("lambda has one premise");
        const Derivation& p = d.premises[0];
        if (!s.is_abs())
            throw subject("lambda subject must be an abstraction");
        if (!alpha_equal(s.body(), p.subject()))
            throw subject("premise does not type the body");
        if (!is_multi(p))
            throw shape("lambda premise concludes a multi type");
        auto a = std::get_if<LinearType>(&d.judgment.type);
        if (!a || !a->is_arrow)
            throw shape("lambda concludes an arrow");
        if (!(a->left == ctx_get(p.ctx(), s.name())) || !(a->right == p.multi()))
            throw shape("arrow does not match the premise");
        if (!same_ctx(d.ctx(), ctx_remove(p.ctx(), s.name())))
            throw sum("lambda context must drop the bound variable");
        break;
    }
    case Rule::Many: {
        if (!s.is_value())
            throw DerivationError(Code::ManyOnNonValue, path, print(s));
        if (!is_multi(d))
            throw shape("many concludes a multi type");
        TypeContext g;
        std::vector<LinearType> items;
        for (const auto& p : d.premises) {
            Rule want = s.is_var() ? Rule::Ax : Rule::Lam;
            if (p.rule != want)
                throw shape("many premise must be " + to_string(want));
            if (!alpha_equal(p.subject(), s))
                throw subject("many premise types a different value");
            g = ctx_join(g, p.ctx());
            items.push_back(p.linear());
        }
        if (!(multiset(std::move(items)) == d.multi()))
            throw shape("many type is not the sum of its premises");
        if (!same_ctx(g, d.ctx()))
            throw sum("many context is not the sum of its premises");
        break;
    }
    case Rule::App: {
        if (d.premises.size() != 2)
            throw shape("@ has two premises");
        const Derivation& f = d.premises[0];
        const Derivation& a = d.premises[1];
        if (!s.is_app())
            throw subject("@ subject must be an application");
        if (!alpha_equal(s.fun(), f.subject()) || !alpha_equal(s.arg(), a.subject()))
            throw subject("premises do not type the application's parts");
        if (!is_multi(f) || !is_multi(a) || !is_multi(d))
            throw shape("@ judgments are multi typed");
        const MultiType& ft = f.multi();
        if (ft.size() != 1 || !ft.items[0].is_arrow)
            throw shape("@ function must have a singleton arrow type");
        if (!(ft.items[0].left == a.multi()) || !(ft.items[0].right == d.multi()))
            throw shape("@ argument or result type mismatch");
        if (!same_ctx(d.ctx(), ctx_join(f.ctx(), a.ctx())))
            throw sum("@ context is not the sum of its premises");
        break;
    }
    case Rule::Es: {
        if (d.premises.size() != 2)
            throw shape("es has two premises");
        const Derivation& b = d.premises[0];
        const Derivation& u = d.premises[1];
        if (!s.is_es())
            throw subject("es subject must be an explicit substitution");
        if (!alpha_equal(s.body(), b.subject()) || !alpha_equal(s.def(), u.subject()))
            throw subject("premises do not type the substitution's parts");
        if (!is_multi(b) || !is_multi(u) || !is_multi(d))
            throw shape("es judgments are multi typed");
        if (!(ctx_get(b.ctx(), s.name()) == u.multi()))
            throw shape("es definition type differs from the bound variable's type");
        if (!(b.multi() == d.multi()))
            throw shape("es type must be the body's type");
        if (!same_ctx(d.ctx(), ctx_join(ctx_remove(b.ctx(), s.name()), u.ctx())))
            throw sum("es context is not the sum of its premises");
        break;
    }
    }
    if (d.rule != Rule::Many)
        ++acc.size;
    if (d.rule == Rule::Lam || d.rule == Rule::App)
        ++acc.size_m;
}

} // namespace

CheckResult check_derivation(const Derivation& d)
{
    CheckResult r;
    std::vector<int> path;
    check_node(d, path, r);
    r.judgment = d.judgment;
    return r;
}

DerivationFlags derivation_flags(const Derivation& d)
{
    check_derivation(d);
    DerivationFlags f;
    f.inert = is_inert_context(d.ctx());
    auto m = std::get_if<MultiType>(&d.judgment.type);
    f.tight = f.inert && m && is_ground(*m);
    return f;
}

bool same_judgment(const Judgment& a, const Judgment& b)
{
    return same_ctx(a.ctx, b.ctx) && same_type(a.type, b.type) && alpha_equal(a.subject, b.subject);
}

bool same_judgment(const Derivation& a, const Derivation& b)
{
    return same_judgment(a.judgment, b.judgment);
}

} // namespace vsc
