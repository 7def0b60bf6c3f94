#include <istream>
#include <stdexcept>

#include "vsc/classify.hpp"
#include "vsc/cli.hpp"
#include "vsc/derive.hpp"
#include "vsc/solvability.hpp"

namespace vsc {

std::optional<NamedStrategy> strategy_from_name(const std::string& name)
{
    if (name == "betav")
        return NamedStrategy{true, {Closure::Open, true, false}};
    static const std::pair<const char*, Closure> bases[] = {
        {"o", Closure::Open}, {"s", Closure::Solving}, {"vsc", Closure::Full}};
    for (const auto& [base, c] : bases) {
        if (name == base)
            return NamedStrategy{false, {c, true, false}};
        if (name == std::string(base) + "lam")
            return NamedStrategy{false, {c, false, false}};
    }
    return std::nullopt;
}

Trace run_strategy(const Term& t, const NamedStrategy& s, std::size_t fuel)
{
    if (s.betav)
        return betav_reduce(t, Closure::Open, fuel, true);
    return reduce(t, s.strategy, fuel, true);
}

bool CorpusReport::pass() const
{
    for (const auto& e : entries)
        if (!e.pass())
            return false;
    return true;
}

std::vector<CorpusEntry> parse_corpus(std::istream& in)
{
    std::vector<CorpusEntry> out;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        auto where = [&](const std::string& msg) {
            return std::invalid_argument("corpus line " + std::to_string(line) + ": " + msg);
        };
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw where(e.what());
        }
        if (!j.is_object() || !j.contains("name") || !j.contains("term"))
            throw where("entry needs name and term");
        CorpusEntry e;
        e.line = line;
        e.name = j.at("name").get<std::string>();
        e.term = j.at("term").get<std::string>();
        e.expect = j.value("expect", json::object());
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

void check_entry(const CorpusEntry& e, std::size_t fuel, std::vector<std::string>& diff)
{
    Term t = parse(e.term, {.abbreviations = true});
    const json& ex = e.expect;
    auto compare_answer = [&](const char* key, const Verdict& v) {
        if (!ex.contains(key))
            return;
        std::string want = ex.at(key).get<std::string>();
        if (want != to_string(v.answer))
            diff.push_back(std::string(key) + ": expected " + want + ", got " + to_string(v.answer));
    };
    compare_answer("scrutable", scrutable(t, fuel));
    compare_answer("solvable", solvable(t, fuel));

    if (ex.contains("nf")) {
        for (const auto& [name, flags] : ex.at("nf").items()) {
            auto s = strategy_from_name(name);
            if (!s) {
                diff.push_back("nf: unknown strategy " + name);
                continue;
            }
            Trace tr = run_strategy(t, *s, fuel);
            if (tr.status != Status::NormalForm) {
                diff.push_back("nf." + name + ": no normal form (" + to_string(tr.status) + ")");
                continue;
            }
            NormalFormClass c = classify(tr.final_term());
            for (const auto& [flag, want] : flags.items())
                if (has_flag(c, flag) != want.get<bool>())
                    diff.push_back("nf." + name + "." + flag + ": expected " + want.dump() + " on " +
                                   print(tr.final_term()));
        }
    }

    if (ex.contains("phi_m")) {
        for (const auto& [mode, want] : ex.at("phi_m").items()) {
            Mode m = mode == "solving" ? Mode::Solving : Mode::Open;
            auto inf = infer(t, m, fuel);
            if (!inf) {
                diff.push_back("phi_m." + mode + ": not typable within fuel");
                continue;
            }
            std::size_t got = size_m(inf->derivation);
            if (got != want.get<std::size_t>())
                diff.push_back("phi_m." + mode + ": expected " + want.dump() + ", got " + std::to_string(got));
        }
    }

    if (ex.contains("witness")) {
        const json& w = ex.at("witness");
        Term tree = parse(w.at("context").get<std::string>(), {.abbreviations = true, .allow_hole = true});
        auto target = target_from_string(w.value("target", "identity"));
        if (!target) {
            diff.push_back("witness: unknown target");
            return;
        }
        Term given;
        if (w.contains("given"))
            given = parse(w.at("given").get<std::string>(), {.abbreviations = true});
        ContextKind kind = fits_kind(tree, ContextKind::Head) ? ContextKind::Head : ContextKind::Testing;
        Verdict v = verify_witness(make_context(tree, kind), t, *target, given, fuel);
        std::string want = w.value("answer", "Yes");
        if (want != to_string(v.answer))
            diff.push_back("witness: expected " + want + ", got " + to_string(v.answer) +
                           (v.note.empty() ? "" : " (" + v.note + ")"));
    }
}

} // namespace

CorpusReport run_corpus(const std::vector<CorpusEntry>& entries, std::size_t fuel)
{
    CorpusReport r;
    for (const auto& e : entries) {
        EntryResult res{e.name, {}};
        try {
            check_entry(e, fuel, res.mismatches);
        } catch (const std::exception& ex) {
            res.mismatches.push_back(std::string("error: ") + ex.what());
        }
        r.entries.push_back(std::move(res));
    }
    return r;
}

json report_to_json(const CorpusReport& r)
{
    json arr = json::array();
    for (const auto& e : r.entries)
        arr.push_back({{"name", e.name}, {"pass", e.pass()}, {"mismatches", e.mismatches}});
    return {{"pass", r.pass()}, {"entries", arr}};
}

} // namespace vsc
