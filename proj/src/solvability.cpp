#include "vsc/solvability.hpp"

#include <stdexcept>

#include "vsc/classify.hpp"

namespace vsc {

std::string to_string(Answer a)
{
    switch (a) {
    case Answer::Yes: return "Yes";
    case Answer::No: return "No";
    case Answer::Unknown: return "Unknown";
    }
    return "?";
}

std::string to_string(Target t)
{
    switch (t) {
    case Target::Identity: return "identity";
    case Target::Inert: return "inert";
    case Target::Value: return "value";
    case Target::Given: return "given";
    }
    return "?";
}

std::optional<Target> target_from_string(const std::string& s)
{
    for (Target t : {Target::Identity, Target::Inert, Target::Value, Target::Given})
        if (to_string(t) == s)
            return t;
    return std::nullopt;
}

namespace {

Verdict run(const Term& t, Closure c, std::size_t fuel)
{
    Verdict v;
    v.trace = reduce(t, Strategy{c, true, false}, fuel, true);
    switch (v.trace.status) {
    case Status::NormalForm: v.answer = Answer::Yes; break;
    case Status::Cycle:
        v.answer = Answer::No;
        v.note = "term " + std::to_string(v.trace.steps.size()) + " repeats term " +
                 std::to_string(v.trace.cycle_index);
        break;
    case Status::FuelExhausted:
        v.answer = Answer::Unknown;
        v.note = "fuel exhausted after " + std::to_string(v.trace.steps.size()) + " steps";
        break;
    }
    return v;
}

} // namespace

Verdict scrutable(const Term& t, std::size_t fuel)
{
    return run(t, Closure::Open, fuel);
}

Verdict solvable(const Term& t, std::size_t fuel)
{
    return run(t, Closure::Solving, fuel);
}

std::pair<Context, Context> derive_witnesses(const Context& h, const Term& u)
{
    if (!fits_kind(h.tree, ContextKind::Head))
        throw std::invalid_argument("not a head context: " + print(h.tree));
    std::set<std::string> avoid = all_names(h.tree);
    auto more = all_names(u);
    avoid.insert(more.begin(), more.end());
    std::string x = fresh_name("x", avoid);
    avoid.insert(x);
    std::string x2 = fresh_name("x", avoid);
    Term fe = Term::app(Term::app(h.tree, Term::abs(x, u)), identity());
    Term in = Term::app(h.tree, Term::var(x2));
    return {make_context(fe, ContextKind::Head), make_context(in, ContextKind::Head)};
}

Verdict verify_witness(const Context& h, const Term& t, Target target, const Term& given, std::size_t fuel)
{
    bool head = fits_kind(h.tree, ContextKind::Head);
    if (target == Target::Value ? !(head || fits_kind(h.tree, ContextKind::Testing)) : !head)
        throw std::invalid_argument("context " + print(h.tree) + " has the wrong kind for target " +
                                    to_string(target));
    if (target == Target::Given && !given)
        throw std::invalid_argument("target 'given' needs a term");
    Verdict v = run(plug(h.tree, t), target == Target::Value ? Closure::Open : Closure::Full, fuel);
    if (v.answer != Answer::Yes)
        return v;
    const Term& nf = v.trace.final_term();
    bool hit = false;
    switch (target) {
    case Target::Identity: hit = alpha_equal(nf, identity()); break;
    case Target::Inert: hit = is_inert(nf); break;
    case Target::Value: hit = nf.is_value(); break;
    case Target::Given: hit = alpha_equal(nf, given); break;
    }
    if (!hit) {
        v.answer = Answer::No;
        v.note = "normal form " + print(nf) + " misses the target " + to_string(target);
    }
    return v;
}

} // namespace vsc
