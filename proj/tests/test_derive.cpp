#include <doctest.h>

#include "support.hpp"
#include "vsc/classify.hpp"
#include "vsc/derive.hpp"

using namespace vsc;

namespace {

Term p(const char* s) { return parse(s, {.abbreviations = true}); }

const LinearType X = LinearType::atom();
LinearType ax_arrow() { return LinearType::arrow(ground(1), ground(1)); }

Derivation example_derivation()
{
    MultiType m = singleton(ax_arrow());
    LinearType mm = LinearType::arrow(m, m);
    Derivation xx = make_app(make_many(Term::var("x"), {make_ax("x", mm)}),
                             make_many(Term::var("x"), {make_ax("x", ax_arrow())}));
    Derivation lam_x = make_lam("x", xx);
    Derivation id_mm = make_lam("z", make_many(Term::var("z"), {make_ax("z", ax_arrow())}));
    Derivation id_x = make_lam("z", make_many(Term::var("z"), {make_ax("z", X)}));
    return make_app(make_many(lam_x.subject(), {lam_x}), make_many(id_mm.subject(), {id_mm, id_x}));
}

void check_valid(const Derivation& d, const Term& subject)
{
    CheckResult r = check_derivation(d);
    CHECK(alpha_equal(r.judgment.subject, subject));
}

} // namespace

TEST_CASE("subject reduction on the worked example")
{
    Derivation d = example_derivation();
    Term t = p("(\\x.x x) (\\z.z)");
    Trace tr = reduce(t, {Closure::Open, true, false});
    REQUIRE(tr.steps.size() == 4);
    Derivation d1 = subject_reduce(d, move_of(tr, 0));
    check_valid(d1, tr.steps[0].result);
    CHECK(size_m(d1) == 3);
    CHECK(same_judgment(d1.judgment, Judgment{d.ctx(), d1.subject(), d.judgment.type}));
    Derivation d2 = subject_reduce(d1, move_of(tr, 1));
    check_valid(d2, tr.steps[1].result);
    CHECK(size_m(d2) == 3);
    CHECK(size(d2) < size(d1));

    // and back again
    Derivation back = subject_expand(subject_expand(d2, move_of(tr, 1)), move_of(tr, 0));
    check_valid(back, t);
    CHECK(size_m(back) == 5);
}

TEST_CASE("split and merge")
{
    auto [a, b] = split_value(empty_many(identity()), {}, {});
    CHECK(a.premises.empty());
    CHECK(b.premises.empty());
    CHECK(a.ctx().empty());

    Derivation arg = example_derivation().premises[1];
    MultiType m = singleton(ax_arrow());
    auto [first, second] = split_value(arg, singleton(LinearType::arrow(m, m)), m);
    CHECK(first.multi() == singleton(LinearType::arrow(m, m)));
    CHECK(second.multi() == m);
    CHECK(size(first) + size(second) == size(arg));
    CHECK(size_m(first) + size_m(second) == size_m(arg));
    Derivation merged = merge_value(first, second);
    CHECK(merged.multi() == arg.multi());
    CHECK(size(merged) == size(arg));

    Derivation one = merge_value(second, empty_many(identity()));
    CHECK(one.multi() == m);
    CHECK_THROWS_AS(split_value(arg, m, m), DeriveError);
    CHECK_THROWS_AS(merge_value(first, empty_many(Term::var("q"))), DeriveError);
}

TEST_CASE("substitution lemma")
{
    Derivation psi = example_derivation().premises[1]; // I : [M -o M, A]
    Derivation phi = ax_bundle("x", psi.multi());
    Derivation theta = subst_lemma(phi, "x", psi);
    CHECK(same_judgment(theta, psi));

    Derivation z = ax_bundle("z", ground(1));
    Derivation t2 = subst_lemma(z, "x", empty_many(identity()));
    CHECK(same_judgment(t2, z));
    CHECK_THROWS_AS(subst_lemma(z, "x", psi), DeriveError);

    // the exponential step of (x x)[x<-I]
    Derivation d1 = subject_reduce(example_derivation(), move_of(reduce(p("(\\x.x x) (\\z.z)"), {}), 0));
    REQUIRE(d1.rule == Rule::Es);
    Derivation body = subst_lemma(d1.premises[0], d1.subject().name(), d1.premises[1]);
    check_valid(body, p("(\\z.z) (\\z.z)"));
    CHECK(size_m(body) == size_m(d1.premises[0]) + size_m(d1.premises[1]));
}

TEST_CASE("removal lemma")
{
    Derivation phi = example_derivation().premises[1];
    Removal r = removal_lemma(phi, Term::var("x"), "x", identity());
    CHECK(r.psi.ctx() == ctx_single("x", phi.multi()));
    CHECK(same_judgment(r.theta, phi));

    Derivation z = ax_bundle("z", ground(1));
    Removal r2 = removal_lemma(z, Term::var("z"), "x", identity());
    CHECK(r2.theta.multi().empty());
    CHECK(r2.theta.premises.empty());
    CHECK_THROWS_AS(removal_lemma(z, Term::var("z"), "x", p("y y")), DeriveError);
}

TEST_CASE("linear substitution")
{
    Derivation inner = type_inert_any(p("u w"), ground(1));
    Derivation d = make_es(ax_bundle("x", ground(1)), "x", inner);
    Derivation f = linear_subst(d, Direction::Forward);
    CHECK(same_judgment(f, inner));

    Derivation g = type_inert_any(p("(z x)[x<-u w]"), {});
    Derivation g2 = linear_subst(g, Direction::Forward);
    check_valid(g2, p("z (u w)"));
    CHECK(same_judgment(g2.judgment, Judgment{g.ctx(), g2.subject(), g.judgment.type}));
    Derivation g3 = linear_subst(g2, Direction::Backward, p("(z x)[x<-u w]"));
    check_valid(g3, p("(z x)[x<-u w]"));

    Derivation twice = type_inert_any(p("(x x)[x<-u w]"), {});
    CHECK_THROWS_AS(linear_subst(twice, Direction::Forward), DeriveError);
}

TEST_CASE("subject expansion")
{
    Term before = p("x[x<-\\z.z]");
    Trace tr = reduce(before, {});
    REQUIRE(tr.steps.size() == 1);
    Derivation d = subject_expand(empty_many(identity()), move_of(tr, 0));
    CHECK(d.rule == Rule::Es);
    check_valid(d, before);

    // an m-expansion rebuilds lambda, many and @
    Trace tm = reduce(p("(\\x.x) y"), {Closure::Open, false, false});
    REQUIRE(!tm.steps.empty());
    Derivation dm = subject_expand(type_fireball_tight(tm.steps[0].result), move_of(tm, 0));
    CHECK(dm.rule == Rule::App);
    CHECK(dm.premises[0].premises[0].rule == Rule::Lam);

    Move bad = move_of(tr, 0);
    bad.after = p("\\w.w w");
    CHECK_THROWS_AS(subject_expand(empty_many(p("\\w.w w")), bad), DeriveError);
    bad = move_of(tr, 0);
    bad.kind = MoveKind::M;
    CHECK_THROWS_AS(subject_expand(empty_many(identity()), bad), DeriveError);
}

TEST_CASE("normal form typings")
{
    Derivation a = type_inert_any(Term::var("x"), ground(1));
    CHECK(a.ctx() == ctx_single("x", ground(1)));

    Derivation b = type_inert_any(p("y (\\x.x)"), {});
    CHECK(b.ctx() == ctx_single("y", singleton(LinearType::arrow({}, {}))));
    CHECK(b.multi().empty());

    Derivation c = type_inert_any(p("x[x<-y]"), ground(2));
    CHECK(c.ctx() == ctx_single("y", ground(2)));

    Derivation f = type_fireball_tight(p("\\x.OMEGA"));
    CHECK(size_m(f) == 0);
    Derivation v = type_fireball_tight(Term::var("x"));
    CHECK(v.premises.empty());
    CHECK(v.multi().empty());

    Derivation s = type_solved_fireball(Term::var("x"));
    CHECK(s.ctx() == ctx_single("x", ground(1)));
    Derivation s2 = type_solved_fireball(identity());
    CHECK(s2.multi() == singleton(ax_arrow()));
    CHECK_THROWS_AS(type_solved_fireball(p("\\x.OMEGA")), DeriveError);
}

TEST_CASE("inference spot values")
{
    auto a = infer(p("(\\x.x x) (\\z.z)"), Mode::Open);
    REQUIRE(a);
    CHECK(size_m(a->derivation) == 4);
    CHECK(derivation_flags(a->derivation).tight);

    auto b = infer(p("\\x.((\\z.z) (\\z.z))"), Mode::Solving);
    REQUIRE(b);
    CHECK(size_m(b->derivation) == 4);
    CHECK(type_flags(b->derivation.multi()).precisely_solvable);

    CHECK_FALSE(infer(omega(), Mode::Open));
    CHECK_FALSE(infer(omega(), Mode::Solving));
}

TEST_CASE("inference over small terms")
{
    testing_support::Enumerator en({"y", "z"});
    for (const Term& t : en.up_to(6)) {
        for (Mode mode : {Mode::Open, Mode::Solving}) {
            auto inf = infer(t, mode, 200);
            if (!inf)
                continue;
            const Derivation& d = inf->derivation;
            CheckResult r = check_derivation(d);
            CHECK(d.subject() == t);
            for (const auto& [x, m] : r.judgment.ctx)
                CHECK(occurs_free(x, t));
            const Term& nf = inf->trace.final_term();
            std::size_t u = mode == Mode::Open ? open_size(nf) : solvable_size(nf);
            CHECK(2 * inf->trace.counts[StepKind::M] + u == r.size_m);
            // reducing the derivation forward reaches a typing of the normal form
            Derivation cur = d;
            for (std::size_t i = 0; i < inf->trace.steps.size(); ++i)
                cur = subject_reduce(cur, move_of(inf->trace, i));
            CHECK(same_judgment(cur.judgment, Judgment{d.ctx(), nf, d.judgment.type}));
            CHECK(size_m(cur) == u);
        }
    }
}

TEST_CASE("non-tight typings only bound the steps")
{
    // start from a non-tight typing of the normal form and expand
    Term t = p("(\\x.x) (\\z.z)");
    Trace tr = reduce(t, {});
    Derivation d = type_solved_fireball(tr.final_term()); // [[X] -o [X]] is not ground
    for (std::size_t i = tr.steps.size(); i-- > 0;)
        d = subject_expand(d, move_of(tr, i));
    CHECK_FALSE(derivation_flags(d).tight);
    CHECK(2 * tr.counts[StepKind::M] + open_size(tr.final_term()) <= size_m(d));
}

TEST_CASE("judgments survive equivalence and glue steps")
{
    testing_support::Enumerator en({"y", "z"});
    std::size_t moves = 0;
    for (const Term& t : en.up_to(6)) {
        auto inf = infer(t, Mode::Open, 200);
        if (!inf)
            continue;
        const Derivation& d = inf->derivation;
        for (const auto& st : equiv_steps(t)) {
            Move mv = move_of(t, st);
            Derivation r = subject_reduce(d, mv);
            check_valid(r, st.result);
            CHECK(same_judgment(r.judgment, Judgment{d.ctx(), r.subject(), d.judgment.type}));
            Derivation back = subject_expand(r, mv);
            CHECK(same_judgment(back, d));
            ++moves;
        }
        for (const auto& rx : redexes(t, {Closure::Full, true, true})) {
            if (rx.kind != StepKind::Glue)
                continue;
            Move mv{rx.path, MoveKind::Glue, Axiom::AtLeft, true, t, fire(t, rx)};
            Derivation r = subject_reduce(d, mv);
            check_valid(r, mv.after);
            CHECK(same_judgment(r.judgment, Judgment{d.ctx(), r.subject(), d.judgment.type}));
            CHECK(same_judgment(subject_expand(r, mv), d));
            ++moves;
        }
    }
    CHECK(moves > 100);
}
