#include "vsc/io.hpp"

#include <stdexcept>

namespace vsc {

json counts_to_json(const Counts& c)
{
    json j = json::object();
    for (StepKind k : {StepKind::M, StepKind::ELambda, StepKind::EVar, StepKind::Glue, StepKind::BetaV})
        j[to_string(k)] = c[k];
    return j;
}

json trace_to_json(const Trace& tr)
{
    json steps = json::array();
    for (const auto& s : tr.steps)
        steps.push_back({{"path", s.path}, {"kind", to_string(s.kind)}, {"term", print(s.result)}});
    json j = {{"start", print(tr.start)},
              {"steps", steps},
              {"status", to_string(tr.status)},
              {"counts", counts_to_json(tr.counts)},
              {"final", print(tr.final_term())}};
    if (tr.status == Status::Cycle)
        j["cycle_index"] = tr.cycle_index;
    return j;
}

json classify_to_json(const NormalFormClass& c)
{
    return {{"value", c.value},
            {"inert", c.inert},
            {"fireball", c.fireball},
            {"full_inert", c.full_inert},
            {"full_fireball", c.full_fireball},
            {"solved_fireball", c.solved_fireball}};
}

json type_to_json(const LinearType& a)
{
    if (!a.is_arrow)
        return {{"atom", "X"}};
    return {{"arrow", {{"left", type_to_json(a.left)}, {"right", type_to_json(a.right)}}}};
}

json type_to_json(const MultiType& m)
{
    json arr = json::array();
    for (const auto& a : m.items)
        arr.push_back(type_to_json(a));
    return arr;
}

json type_to_json(const Type& t)
{
    return std::visit([](const auto& x) { return type_to_json(x); }, t);
}

json ctx_to_json(const TypeContext& g)
{
    json j = json::object();
    for (const auto& [x, m] : g)
        j[x] = type_to_json(m);
    return j;
}

json derivation_to_json(const Derivation& d)
{
    json ps = json::array();
    for (const auto& p : d.premises)
        ps.push_back(derivation_to_json(p));
    return {{"rule", to_string(d.rule)},
            {"judgment",
             {{"ctx", ctx_to_json(d.ctx())}, {"term", print(d.subject())}, {"type", type_to_json(d.judgment.type)}}},
            {"premises", ps}};
}

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw std::invalid_argument("malformed derivation JSON: " + what);
}

Rule rule_from_string(const std::string& s)
{
    for (Rule r : {Rule::Ax, Rule::Lam, Rule::App, Rule::Es, Rule::Many})
        if (to_string(r) == s)
            return r;
    bad("unknown rule '" + s + "'");
}

} // namespace

LinearType linear_from_json(const json& j)
{
    if (!j.is_object())
        bad("linear type must be an object");
    if (j.contains("atom"))
        return LinearType::atom();
    if (j.contains("arrow")) {
        const json& a = j.at("arrow");
        if (!a.is_object() || !a.contains("left") || !a.contains("right"))
            bad("arrow needs left and right");
        return LinearType::arrow(multi_from_json(a.at("left")), multi_from_json(a.at("right")));
    }
    bad("linear type needs 'atom' or 'arrow'");
}

MultiType multi_from_json(const json& j)
{
    if (!j.is_array())
        bad("multi type must be an array");
    std::vector<LinearType> items;
    for (const auto& e : j)
        items.push_back(linear_from_json(e));
    return multiset(std::move(items));
}

Type type_from_json(const json& j)
{
    if (j.is_array())
        return multi_from_json(j);
    return linear_from_json(j);
}

TypeContext ctx_from_json(const json& j)
{
    if (j.is_null())
        return {};
    if (!j.is_object())
        bad("ctx must be an object");
    TypeContext g;
    for (const auto& [x, m] : j.items()) {
        MultiType mt = multi_from_json(m);
        if (!mt.empty())
            g[x] = std::move(mt);
    }
    return g;
}

Derivation derivation_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("rule") || !j.contains("judgment"))
        bad("node needs rule and judgment");
    const json& jj = j.at("judgment");
    if (!jj.is_object() || !jj.contains("term") || !jj.contains("type"))
        bad("judgment needs term and type");
    Derivation d;
    d.rule = rule_from_string(j.at("rule").get<std::string>());
    try {
        d.judgment.subject = parse(jj.at("term").get<std::string>());
    } catch (const ParseError& e) {
        bad(std::string("term: ") + e.what());
    }
    d.judgment.ctx = ctx_from_json(jj.value("ctx", json::object()));
    d.judgment.type = type_from_json(jj.at("type"));
    if (j.contains("premises")) {
        if (!j.at("premises").is_array())
            bad("premises must be an array");
        for (const auto& p : j.at("premises"))
            d.premises.push_back(derivation_from_json(p));
    }
    return d;
}

} // namespace vsc
