#include <doctest.h>

#include "support.hpp"
#include "vsc/classify.hpp"
#include "vsc/solvability.hpp"

using namespace vsc;

namespace {
Term p(const char* s) { return parse(s, {.abbreviations = true}); }
Context head(const char* s) { return make_context(parse(s, {.abbreviations = true, .allow_hole = true}), ContextKind::Head); }
} // namespace

TEST_CASE("verdicts on the classic examples")
{
    CHECK(scrutable(omega(), 1000).answer == Answer::No);
    CHECK(scrutable(p("\\x.OMEGA"), 1000).answer == Answer::Yes);
    CHECK(scrutable(p("(\\x.DELTA) (y y) DELTA"), 1000).answer == Answer::No);
    CHECK(solvable(p("\\x.OMEGA"), 1000).answer == Answer::No);
    Verdict s = solvable(p("x (\\x.OMEGA)"), 1000);
    CHECK(s.answer == Answer::Yes);
    CHECK(s.trace.steps.empty());
    CHECK(solvable(p("x OMEGA"), 1000).answer == Answer::No);
    CHECK(solvable(p("I[x<-\\y.OMEGA]"), 1000).answer == Answer::Yes);

    Verdict u = scrutable(omega(), 1);
    CHECK(u.answer == Answer::Unknown);
}

TEST_CASE("witness contexts")
{
    auto [fe, in] = derive_witnesses(make_context(Term::hole(), ContextKind::Head), delta());
    Trace a = reduce(plug(fe, identity()), {Closure::Full, true, false});
    CHECK(a.status == Status::NormalForm);
    CHECK(alpha_equal(a.final_term(), delta()));
    Trace b = reduce(plug(in, identity()), {Closure::Full, true, false});
    CHECK(b.final_term().is_var());
    CHECK(is_inert(b.final_term()));

    Context bad{parse("y []", {.allow_hole = true}), ContextKind::Open};
    CHECK_THROWS_AS(derive_witnesses(bad, delta()), std::invalid_argument);

    CHECK(verify_witness(head("((\\y.[]) I) I"), p("\\x.y"), Target::Identity).answer == Answer::Yes);
    CHECK(verify_witness(head("((\\x.[]) (\\w.\\y.I)) I"), p("x (\\z.OMEGA)"), Target::Identity).answer ==
          Answer::Yes);
    for (Target tg : {Target::Identity, Target::Inert, Target::Value, Target::Given}) {
        Verdict v = verify_witness(make_context(Term::hole(), ContextKind::Head), omega(), tg, identity(), 1000);
        CHECK(v.answer != Answer::Yes);
    }
    CHECK_THROWS_AS(verify_witness(bad, identity(), Target::Identity), std::invalid_argument);
    CHECK(verify_witness(head("[] y"), identity(), Target::Inert).answer == Answer::Yes);
    CHECK(verify_witness(head("[] y"), identity(), Target::Identity).answer == Answer::No);
}

TEST_CASE("solvability properties on small terms")
{
    testing_support::Enumerator en({"y"});
    auto terms = en.up_to(6);
    std::vector<Term> subs = {Term::var("y"), identity(), p("y y"), delta()};
    for (const Term& t : terms) {
        Verdict so = solvable(t, 300);
        Verdict sc = scrutable(t, 300);
        if (so.answer == Answer::Yes)
            CHECK(sc.answer == Answer::Yes);
        if (so.answer != Answer::Unknown) {
            Verdict e = solvable(es_expand(t), 300);
            if (e.answer != Answer::Unknown)
                CHECK_MESSAGE(e.answer == so.answer, print(t));
        }
        if (sc.answer != Answer::Unknown) {
            Verdict e = scrutable(es_expand(t), 300);
            if (e.answer != Answer::Unknown)
                CHECK_MESSAGE(e.answer == sc.answer, print(t));
        }
        // substitution stability
        for (const Term& u : subs) {
            Term tu = meta_subst(t, "y", u);
            if (solvable(tu, 300).answer == Answer::Yes)
                CHECK(so.answer != Answer::No);
            if (scrutable(tu, 300).answer == Answer::Yes)
                CHECK(sc.answer != Answer::No);
        }
        // reduction stability
        if (so.answer == Answer::No || sc.answer == Answer::No) {
            for (const auto& r : redexes(t, {Closure::Full, true, false})) {
                Term u = fire(t, r);
                if (so.answer == Answer::No)
                    CHECK(solvable(u, 300).answer != Answer::Yes);
                if (sc.answer == Answer::No)
                    CHECK(scrutable(u, 300).answer != Answer::Yes);
            }
        }
    }
}

namespace {

// Head contexts H ::= [] | \y.H | H a, and testing contexts
// T ::= [] | (\y.T) a | T a, up to the given depth, over closed arguments.
std::vector<Term> probe_contexts(bool testing, int depth)
{
    std::vector<Term> args = {identity(), p("\\a.\\b.a"), p("\\a.\\b.b")};
    std::vector<Term> layer = {Term::hole()};
    std::vector<Term> all = layer;
    for (int d = 0; d < depth; ++d) {
        std::vector<Term> next;
        for (const Term& c : layer) {
            for (const Term& a : args) {
                next.push_back(Term::app(c, a));
                if (testing)
                    next.push_back(Term::app(Term::abs("y", c), a));
            }
            if (!testing)
                next.push_back(Term::abs("y", c));
        }
        all.insert(all.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return all;
}

} // namespace

TEST_CASE("plain beta_v probes never contradict a definite No")
{
    testing_support::Enumerator en({"y"});
    auto tests = probe_contexts(true, 2);
    auto heads = probe_contexts(false, 2);
    std::size_t agree = 0;
    for (const Term& t : en.up_to(6)) {
        if (!testing_support::es_free_oracle(t))
            continue;
        Answer sc = scrutable(t, 300).answer;
        Answer so = solvable(t, 300).answer;
        bool value_probe = false;
        for (const Term& c : tests) {
            Trace tr = betav_reduce(plug(c, t), Closure::Open, 200);
            if (tr.status == Status::NormalForm && tr.final_term().is_value()) {
                value_probe = true;
                break;
            }
        }
        bool id_probe = false;
        for (const Term& c : heads) {
            Trace tr = betav_reduce(plug(c, t), Closure::Full, 200);
            if (tr.status == Status::NormalForm && alpha_equal(tr.final_term(), identity())) {
                id_probe = true;
                break;
            }
        }
        if (value_probe)
            CHECK_MESSAGE(sc != Answer::No, print(t));
        if (id_probe)
            CHECK_MESSAGE(so != Answer::No, print(t));
        agree += (value_probe == (sc == Answer::Yes)) + (id_probe == (so == Answer::Yes));
    }
    MESSAGE("probe agreement count: " << agree);
}
