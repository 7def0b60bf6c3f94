#include <doctest.h>

#include "support.hpp"
#include "vsc/classify.hpp"
#include "vsc/rewriting.hpp"

using namespace vsc;

namespace {
Term p(const char* s) { return parse(s, {.abbreviations = true}); }
}

TEST_CASE("classify examples")
{
    NormalFormClass a = classify(p("\\x.y"));
    CHECK(a.value);
    CHECK(a.fireball);
    CHECK_FALSE(a.inert);

    NormalFormClass b = classify(p("x[x<-y (\\x.x)] y"));
    CHECK(b.inert);
    CHECK(b.fireball);
    CHECK(b.solved_fireball);

    NormalFormClass c = classify(p("\\x.OMEGA"));
    CHECK(c.fireball);
    CHECK_FALSE(c.full_fireball);
    CHECK_FALSE(c.solved_fireball);

    NormalFormClass d = classify(p("x"));
    CHECK(d.value);
    CHECK(d.inert);
    CHECK(d.full_inert);
    CHECK(d.solved_fireball);

    CHECK_FALSE(classify(omega()).fireball);
    CHECK(is_solved_fireball(p("\\x.\\y.x (\\z.z z)")));
    CHECK(is_full_fireball(p("\\x.\\y.x (\\z.z z)")));
    CHECK_FALSE(is_full_fireball(p("\\x.(\\z.z) x")));
    CHECK(has_flag(d, "inert"));
    CHECK_THROWS(has_flag(d, "bogus"));
}

// The grammars agree with step-emptiness of the reductions without e_var.
TEST_CASE("normal forms are the grammar members, exhaustively up to size 7")
{
    testing_support::Enumerator en({"y", "z"});
    std::size_t checked = 0;
    for (const Term& t : en.up_to(7)) {
        NormalFormClass c = classify(t);
        bool open_nf = redexes(t, {Closure::Open, false, false}).empty();
        bool solving_nf = redexes(t, {Closure::Solving, false, false}).empty();
        bool full_nf = redexes(t, {Closure::Full, false, false}).empty();
        if (c.fireball != open_nf || c.solved_fireball != solving_nf || c.full_fireball != full_nf)
            FAIL_CHECK(print(t));
        ++checked;
    }
    CHECK(checked == en.up_to(7).size());
}
