#include "vsc/syntax.hpp"

#include <cctype>
#include <functional>
#include <unordered_map>

namespace vsc {

// ---------------------------------------------------------------- Term

Term Term::var(std::string name)
{
    return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}}));
}

Term Term::abs(std::string binder, Term body)
{
    return Term(std::make_shared<const Node>(Node{Kind::Abs, std::move(binder), std::move(body), {}}));
}

Term Term::app(Term fun, Term arg)
{
    return Term(std::make_shared<const Node>(Node{Kind::App, {}, std::move(fun), std::move(arg)}));
}

Term Term::es(Term body, std::string binder, Term def)
{
    return Term(std::make_shared<const Node>(Node{Kind::ES, std::move(binder), std::move(body), std::move(def)}));
}

Term Term::hole()
{
    return Term(std::make_shared<const Node>(Node{Kind::Hole, {}, {}, {}}));
}

Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }

const Term& Term::child(int i) const
{
    return i == 0 ? node_->left : node_->right;
}

int Term::arity() const
{
    switch (node_->kind) {
    case Kind::Var:
    case Kind::Hole: return 0;
    case Kind::Abs: return 1;
    default: return 2;
    }
}

bool Term::operator==(const Term& o) const
{
    if (node_ == o.node_)
        return true;
    if (!node_ || !o.node_)
        return false;
    if (kind() != o.kind() || name() != o.name())
        return false;
    for (int i = 0; i < arity(); ++i)
        if (!(child(i) == o.child(i)))
            return false;
    return true;
}

// ---------------------------------------------------------------- parser

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error("parse error at offset " + std::to_string(pos) + ": " + msg), pos_(pos)
{
}

namespace {

class Parser {
public:
    Parser(std::string_view src, const ParseOptions& opts) : s_(src), opts_(opts) {}

    Term parse_all()
    {
        Term t = term();
        skip_ws();
        if (i_ != s_.size())
            fail("unexpected trailing input");
        return t;
    }

private:
    std::string_view s_;
    ParseOptions opts_;
    std::size_t i_ = 0;
    std::vector<std::string> bound_;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }

    void skip_ws()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool starts(std::string_view tok) const { return s_.substr(i_, tok.size()) == tok; }

    bool at_lambda()
    {
        skip_ws();
        return starts("\\") || starts("\xCE\xBB");
    }

    bool at_hole()
    {
        skip_ws();
        if (!opts_.allow_hole || !starts("["))
            return false;
        std::size_t j = i_ + 1;
        while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j])))
            ++j;
        return j < s_.size() && s_[j] == ']';
    }

    bool at_atom()
    {
        skip_ws();
        if (i_ >= s_.size())
            return false;
        char c = s_[i_];
        return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || at_hole();
    }

    std::string ident()
    {
        skip_ws();
        if (i_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[i_])))
            fail("expected a variable name");
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '\''))
            ++i_;
        return std::string(s_.substr(start, i_ - start));
    }

    void expect(std::string_view tok)
    {
        skip_ws();
        if (!starts(tok))
            fail("expected '" + std::string(tok) + "'");
        i_ += tok.size();
    }

    Term term()
    {
        if (at_lambda())
            return abstraction();
        return application();
    }

    Term abstraction()
    {
        skip_ws();
        i_ += starts("\\") ? 1 : 2;
        std::string x = ident();
        expect(".");
        bound_.push_back(x);
        Term body = term();
        bound_.pop_back();
        return Term::abs(x, body);
    }

    Term application()
    {
        if (!at_atom())
            fail("expected a term");
        Term t = postfix();
        for (;;) {
            if (at_atom())
                t = Term::app(t, postfix());
            else if (at_lambda())
                return Term::app(t, abstraction());
            else
                return t;
        }
    }

    Term postfix()
    {
        Term t = atom();
        for (;;) {
            skip_ws();
            if (!starts("[") || at_hole())
                return t;
            ++i_;
            std::string x = ident();
            skip_ws();
            if (starts("<-"))
                i_ += 2;
            else if (starts("\xE2\x86\x90"))
                i_ += 3;
            else
                fail("expected '<-'");
            Term def = term();
            expect("]");
            t = Term::es(t, x, def);
        }
    }

    Term atom()
    {
        skip_ws();
        if (at_hole()) {
            expect("[");
            expect("]");
            return Term::hole();
        }
        if (starts("(")) {
            ++i_;
            Term t = term();
            expect(")");
            return t;
        }
        std::string x = ident();
        if (opts_.abbreviations && !is_bound(x)) {
            if (x == "I")
                return identity();
            if (x == "DELTA")
                return delta();
            if (x == "OMEGA")
                return omega();
        }
        return Term::var(x);
    }

    bool is_bound(const std::string& x) const
    {
        for (const auto& b : bound_)
            if (b == x)
                return true;
        return false;
    }
};

} // namespace

Term parse(std::string_view text, const ParseOptions& opts)
{
    return Parser(text, opts).parse_all();
}

// ---------------------------------------------------------------- printer

namespace {

enum class Slot { Top, Fun, Arg, EsBody };

void print_into(const Term& t, Slot slot, std::string& out)
{
    switch (t.kind()) {
    case Kind::Var:
        out += t.name();
        break;
    case Kind::Hole:
        out += "[]";
        break;
    case Kind::Abs: {
        bool paren = slot != Slot::Top;
        if (paren)
            out += '(';
        out += '\\';
        out += t.name();
        out += '.';
        print_into(t.body(), Slot::Top, out);
        if (paren)
            out += ')';
        break;
    }
    case Kind::App: {
        bool paren = slot == Slot::Arg || slot == Slot::EsBody;
        if (paren)
            out += '(';
        print_into(t.fun(), Slot::Fun, out);
        out += ' ';
        print_into(t.arg(), Slot::Arg, out);
        if (paren)
            out += ')';
        break;
    }
    case Kind::ES:
        print_into(t.body(), Slot::EsBody, out);
        out += '[';
        out += t.name();
        out += "<-";
        print_into(t.def(), Slot::Top, out);
        out += ']';
        break;
    }
}

} // namespace

std::string print(const Term& t)
{
    std::string out;
    print_into(t, Slot::Top, out);
    return out;
}

// ---------------------------------------------------------------- variables

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out)
{
    switch (t.kind()) {
    case Kind::Var:
        for (const auto& b : bound)
            if (b == t.name())
                return;
        out.insert(t.name());
        return;
    case Kind::Hole:
        return;
    case Kind::Abs:
        bound.push_back(t.name());
        collect_free(t.body(), bound, out);
        bound.pop_back();
        return;
    case Kind::App:
        collect_free(t.fun(), bound, out);
        collect_free(t.arg(), bound, out);
        return;
    case Kind::ES:
        collect_free(t.def(), bound, out);
        bound.push_back(t.name());
        collect_free(t.body(), bound, out);
        bound.pop_back();
        return;
    }
}

} // namespace

std::set<std::string> free_vars(const Term& t)
{
    std::set<std::string> out;
    std::vector<std::string> bound;
    collect_free(t, bound, out);
    return out;
}

std::size_t count_free(const std::string& x, const Term& t)
{
    switch (t.kind()) {
    case Kind::Var: return t.name() == x ? 1 : 0;
    case Kind::Hole: return 0;
    case Kind::Abs: return t.name() == x ? 0 : count_free(x, t.body());
    case Kind::App: return count_free(x, t.fun()) + count_free(x, t.arg());
    case Kind::ES:
        return count_free(x, t.def()) + (t.name() == x ? 0 : count_free(x, t.body()));
    }
    return 0;
}

namespace {

bool find_occurrence(const Term& t, const std::string& x, Path& cur)
{
    switch (t.kind()) {
    case Kind::Var: return t.name() == x;
    case Kind::Hole: return false;
    case Kind::Abs:
    case Kind::App:
    case Kind::ES:
        for (int i = 0; i < t.arity(); ++i) {
            if (i == 0 && t.kind() != Kind::App && t.name() == x)
                continue;
            cur.push_back(i);
            if (find_occurrence(t.child(i), x, cur))
                return true;
            cur.pop_back();
        }
        return false;
    }
    return false;
}

} // namespace

std::optional<Path> free_occurrence(const Term& t, const std::string& x)
{
    Path cur;
    if (find_occurrence(t, x, cur))
        return cur;
    return std::nullopt;
}

bool occurs_free(const std::string& x, const Term& t)
{
    switch (t.kind()) {
    case Kind::Var: return t.name() == x;
    case Kind::Hole: return false;
    case Kind::Abs: return t.name() != x && occurs_free(x, t.body());
    case Kind::App: return occurs_free(x, t.fun()) || occurs_free(x, t.arg());
    case Kind::ES: return occurs_free(x, t.def()) || (t.name() != x && occurs_free(x, t.body()));
    }
    return false;
}

std::set<std::string> all_names(const Term& t)
{
    std::set<std::string> out;
    std::function<void(const Term&)> go = [&](const Term& s) {
        if (s.kind() != Kind::App && s.kind() != Kind::Hole)
            out.insert(s.name());
        for (int i = 0; i < s.arity(); ++i)
            go(s.child(i));
    };
    go(t);
    return out;
}

namespace {
thread_local unsigned long fresh_counter = 0;
}

void reset_fresh_names() { fresh_counter = 0; }

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid)
{
    std::string stem = base;
    while (!stem.empty() && (std::isdigit(static_cast<unsigned char>(stem.back())) || stem.back() == '\''))
        stem.pop_back();
    if (stem.empty())
        stem = "v";
    for (;;) {
        std::string candidate = stem + std::to_string(++fresh_counter);
        if (!avoid.count(candidate))
            return candidate;
    }
}

// ---------------------------------------------------------------- substitution

namespace {

// Substitution under a binder y with body b, where the result body is
// produced by recurse(). Renames y when it would capture a free variable of u.
template <class Recurse>
std::pair<std::string, Term> under_binder(const std::string& y, const Term& b, const std::string& x,
                                          const Term& u, const std::set<std::string>& fv_u, Recurse recurse)
{
    if (y == x || !occurs_free(x, b))
        return {y, b};
    if (fv_u.count(y)) {
        std::set<std::string> avoid = all_names(b);
        avoid.insert(fv_u.begin(), fv_u.end());
        avoid.insert(x);
        std::string y2 = fresh_name(y, avoid);
        Term renamed = recurse(b, y, Term::var(y2));
        return {y2, recurse(renamed, x, u)};
    }
    return {y, recurse(b, x, u)};
}

Term subst_rec(const Term& t, const std::string& x, const Term& u, const std::set<std::string>& fv_u)
{
    switch (t.kind()) {
    case Kind::Var: return t.name() == x ? u : t;
    case Kind::Hole: return t;
    case Kind::App: {
        Term f = subst_rec(t.fun(), x, u, fv_u);
        Term a = subst_rec(t.arg(), x, u, fv_u);
        if (f.same_node(t.fun()) && a.same_node(t.arg()))
            return t;
        return Term::app(f, a);
    }
    case Kind::Abs:
    case Kind::ES: {
        auto recurse = [](const Term& s, const std::string& z, const Term& w) {
            return subst_rec(s, z, w, free_vars(w));
        };
        auto [y, body] = under_binder(t.name(), t.body(), x, u, fv_u, recurse);
        if (t.is_abs()) {
            if (y == t.name() && body.same_node(t.body()))
                return t;
            return Term::abs(y, body);
        }
        Term d = subst_rec(t.def(), x, u, fv_u);
        if (y == t.name() && body.same_node(t.body()) && d.same_node(t.def()))
            return t;
        return Term::es(body, y, d);
    }
    }
    return t;
}

} // namespace

Term meta_subst(const Term& t, const std::string& x, const Term& u)
{
    return subst_rec(t, x, u, free_vars(u));
}

Term rename_free(const Term& t, const std::string& from, const std::string& to)
{
    if (from == to)
        return t;
    return meta_subst(t, from, Term::var(to));
}

// ---------------------------------------------------------------- alpha

namespace {

void canon_into(const Term& t, std::vector<std::string>& env, std::string& out)
{
    switch (t.kind()) {
    case Kind::Var:
        for (std::size_t k = env.size(); k-- > 0;) {
            if (env[k] == t.name()) {
                out += 'b';
                out += std::to_string(env.size() - 1 - k);
                out += '.';
                return;
            }
        }
        out += 'f';
        out += t.name();
        out += '.';
        return;
    case Kind::Hole:
        out += 'H';
        return;
    case Kind::Abs:
        out += 'L';
        env.push_back(t.name());
        canon_into(t.body(), env, out);
        env.pop_back();
        return;
    case Kind::App:
        out += 'A';
        canon_into(t.fun(), env, out);
        canon_into(t.arg(), env, out);
        return;
    case Kind::ES:
        out += 'E';
        env.push_back(t.name());
        canon_into(t.body(), env, out);
        env.pop_back();
        canon_into(t.def(), env, out);
        return;
    }
}

} // namespace

CanonicalTerm alpha_canon(const Term& t)
{
    CanonicalTerm c;
    std::vector<std::string> env;
    canon_into(t, env, c.key);
    return c;
}

bool alpha_equal(const Term& a, const Term& b)
{
    return a == b || alpha_canon(a) == alpha_canon(b);
}

// ---------------------------------------------------------------- positions

const Term& subterm_at(const Term& t, const Path& p)
{
    const Term* cur = &t;
    for (int i : p) {
        if (i < 0 || i >= cur->arity())
            throw std::out_of_range("invalid term position");
        cur = &cur->child(i);
    }
    return *cur;
}

namespace {

Term replace_rec(const Term& t, const Path& p, std::size_t k, const Term& u)
{
    if (k == p.size())
        return u;
    int i = p[k];
    if (i < 0 || i >= t.arity())
        throw std::out_of_range("invalid term position");
    Term c = replace_rec(t.child(i), p, k + 1, u);
    switch (t.kind()) {
    case Kind::Abs: return Term::abs(t.name(), c);
    case Kind::App: return i == 0 ? Term::app(c, t.arg()) : Term::app(t.fun(), c);
    case Kind::ES: return i == 0 ? Term::es(c, t.name(), t.def()) : Term::es(t.body(), t.name(), c);
    default: throw std::out_of_range("invalid term position");
    }
}

} // namespace

Term replace_at(const Term& t, const Path& p, const Term& u)
{
    return replace_rec(t, p, 0, u);
}

std::size_t size(const Term& t)
{
    std::size_t n = 1;
    for (int i = 0; i < t.arity(); ++i)
        n += size(t.child(i));
    return n;
}

// ---------------------------------------------------------------- expansion, sizes

Term es_expand(const Term& t)
{
    switch (t.kind()) {
    case Kind::Var:
    case Kind::Hole: return t;
    case Kind::Abs: return Term::abs(t.name(), es_expand(t.body()));
    case Kind::App: return Term::app(es_expand(t.fun()), es_expand(t.arg()));
    case Kind::ES: return Term::app(Term::abs(t.name(), es_expand(t.body())), es_expand(t.def()));
    }
    return t;
}

std::size_t open_size(const Term& t)
{
    switch (t.kind()) {
    case Kind::App: return open_size(t.fun()) + open_size(t.arg()) + 1;
    case Kind::ES: return open_size(t.body()) + open_size(t.def());
    default: return 0;
    }
}

std::size_t solvable_size(const Term& t)
{
    switch (t.kind()) {
    case Kind::Abs: return solvable_size(t.body()) + 1;
    case Kind::App: return solvable_size(t.fun()) + open_size(t.arg()) + 1;
    case Kind::ES: return solvable_size(t.body()) + open_size(t.def());
    default: return 0;
    }
}

Sizes measure(const Term& t)
{
    return {open_size(t), solvable_size(t)};
}

// ---------------------------------------------------------------- contexts

namespace {

void find_holes(const Term& t, Path& cur, std::vector<Path>& out)
{
    if (t.is_hole()) {
        out.push_back(cur);
        return;
    }
    for (int i = 0; i < t.arity(); ++i) {
        cur.push_back(i);
        find_holes(t.child(i), cur, out);
        cur.pop_back();
    }
}

} // namespace

std::optional<Path> hole_path(const Term& tree)
{
    std::vector<Path> holes;
    Path cur;
    find_holes(tree, cur, holes);
    if (holes.size() != 1)
        return std::nullopt;
    return holes.front();
}

bool fits_kind(const Term& tree, ContextKind kind)
{
    auto hp = hole_path(tree);
    if (!hp)
        return false;
    const Path& p = *hp;
    const Term* cur = &tree;
    bool open_only = false;      // solving: left the head spine
    bool after_app_fun = false;  // testing: previous step entered a function position
    for (int i : p) {
        Kind k = cur->kind();
        switch (kind) {
        case ContextKind::Sub:
            if (k != Kind::ES || i != 0)
                return false;
            break;
        case ContextKind::Open:
            if (k == Kind::Abs)
                return false;
            break;
        case ContextKind::Full:
            break;
        case ContextKind::Solving:
            if (k == Kind::Abs && open_only)
                return false;
            if ((k == Kind::App || k == Kind::ES) && i == 1)
                open_only = true;
            break;
        case ContextKind::Head:
            if (!(k == Kind::Abs || (k == Kind::App && i == 0)))
                return false;
            break;
        case ContextKind::Testing:
            if (k == Kind::Abs) {
                if (!after_app_fun)
                    return false;
                after_app_fun = false;
            } else if (k == Kind::App && i == 0) {
                after_app_fun = true;
            } else {
                return false;
            }
            break;
        }
        cur = &cur->child(i);
    }
    return true;
}

Context make_context(const Term& tree, ContextKind kind)
{
    if (!hole_path(tree))
        throw std::invalid_argument("a context needs exactly one hole");
    if (!fits_kind(tree, kind))
        throw std::invalid_argument("not a " + to_string(kind) + " context: " + print(tree));
    return Context{tree, kind};
}

Term plug(const Term& tree, const Term& t)
{
    auto hp = hole_path(tree);
    if (!hp)
        throw std::invalid_argument("a context needs exactly one hole");
    return replace_at(tree, *hp, t);
}

Term plug(const Context& c, const Term& t)
{
    return plug(c.tree, t);
}

std::string to_string(ContextKind k)
{
    switch (k) {
    case ContextKind::Sub: return "substitution";
    case ContextKind::Open: return "open";
    case ContextKind::Full: return "full";
    case ContextKind::Solving: return "solving";
    case ContextKind::Head: return "head";
    case ContextKind::Testing: return "testing";
    }
    return "?";
}

Term identity() { return Term::abs("x", Term::var("x")); }

Term delta() { return Term::abs("x", Term::app(Term::var("x"), Term::var("x"))); }

Term omega() { return Term::app(delta(), delta()); }

} // namespace vsc
