#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vsc/classify.hpp"
#include "vsc/cli.hpp"
#include "vsc/derive.hpp"
#include "vsc/solvability.hpp"

namespace vsc {

namespace {

struct Options {
    std::size_t fuel = 10000;
    std::string strategy = "o";
    bool glue = false;
    bool json_out = false;

    std::string term;
    std::string other;
    std::string mode = "open";
    std::string file;
    std::string context;
    std::string target = "identity";
    std::string given;
    std::string rule = "s1";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Term read_term(const std::string& text)
{
    return parse(text, {.abbreviations = true});
}

json read_json(const std::string& path)
{
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream f(path);
        if (!f)
            throw UsageError("cannot open " + path);
        buf << f.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("bad JSON: ") + e.what());
    }
}

NamedStrategy named(const Options& o)
{
    auto s = strategy_from_name(o.strategy);
    if (!s)
        throw UsageError("unknown strategy " + o.strategy);
    s->strategy.enable_glue = o.glue;
    return *s;
}

int cmd_reduce(const Options& o, std::ostream& out)
{
    Term t = read_term(o.term);
    NamedStrategy s = named(o);
    Trace tr;
    try {
        tr = run_strategy(t, s, o.fuel);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    out << trace_to_json(tr).dump(2) << "\n"; // traces are always JSON
    return 0;
}

int cmd_classify(const Options& o, std::ostream& out)
{
    NormalFormClass c = classify(read_term(o.term));
    out << classify_to_json(c).dump(o.json_out ? 2 : -1) << "\n";
    return 0;
}

int cmd_type(const Options& o, std::ostream& out)
{
    Term t = read_term(o.term);
    if (o.mode != "open" && o.mode != "solving")
        throw UsageError("mode must be open or solving");
    bool open = o.mode == "open";
    auto inf = infer(t, open ? Mode::Open : Mode::Solving, o.fuel);
    if (!inf) {
        Trace tr = reduce(t, {open ? Closure::Open : Closure::Solving, true, false}, o.fuel, true);
        out << "untypable: reduction status " << to_string(tr.status) << "\n";
        return 1;
    }
    const Derivation& d = inf->derivation;
    CheckResult chk = check_derivation(d);
    std::size_t m_steps = inf->trace.counts[StepKind::M];
    const Term& nf = inf->trace.final_term();
    std::size_t nf_size = open ? open_size(nf) : solvable_size(nf);
    bool law = 2 * m_steps + nf_size == chk.size_m;
    DerivationFlags f = derivation_flags(d);
    bool shape = open ? f.tight : (f.inert && type_flags(d.multi()).precisely_solvable);
    std::string bound = "2*" + std::to_string(m_steps) + "+" + std::to_string(nf_size) +
                        " == " + std::to_string(chk.size_m) + ": " + (law ? "OK" : "MISMATCH");
    if (o.json_out) {
        json j = {{"derivation", derivation_to_json(d)},
                  {"normal_form", print(nf)},
                  {"m_steps", m_steps},
                  {"size", chk.size},
                  {"size_m", chk.size_m},
                  {"nf_size", nf_size},
                  {"bound_check", bound},
                  {open ? "tight" : "precisely_solvable", shape}};
        out << j.dump(2) << "\n";
    } else {
        out << "judgment: " << to_string(d.ctx()) << " |- " << print(d.subject()) << " : "
            << to_string(d.judgment.type) << "\n";
        out << "normal form: " << print(nf) << "\n";
        out << "size: " << chk.size << "  size_m: " << chk.size_m << "\n";
        out << (open ? "tight: " : "precisely solvable: ") << (shape ? "yes" : "no") << "\n";
        out << "derivation: " << derivation_to_json(d).dump() << "\n";
        out << bound << "\n";
    }
    return law && shape ? 0 : 1;
}

int cmd_check(const Options& o, std::ostream& out)
{
    Derivation d;
    try {
        d = derivation_from_json(read_json(o.file));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    try {
        CheckResult r = check_derivation(d);
        DerivationFlags f = derivation_flags(d);
        json j = {{"valid", true},
                  {"judgment",
                   {{"ctx", ctx_to_json(r.judgment.ctx)},
                    {"term", print(r.judgment.subject)},
                    {"type", type_to_json(r.judgment.type)}}},
                  {"size", r.size},
                  {"size_m", r.size_m},
                  {"tight", f.tight}};
        out << j.dump(o.json_out ? 2 : -1) << "\n";
        return 0;
    } catch (const DerivationError& e) {
        json j = {{"valid", false}, {"error", to_string(e.code())}, {"path", e.path()}, {"detail", e.what()}};
        out << j.dump(o.json_out ? 2 : -1) << "\n";
        return 1;
    }
}

int cmd_solve(const Options& o, std::ostream& out)
{
    Term t = read_term(o.term);
    Verdict sc = scrutable(t, o.fuel);
    Verdict so = solvable(t, o.fuel);
    json j = {{"scrutable", to_string(sc.answer)},
              {"solvable", to_string(so.answer)},
              {"traces", {{"open", trace_to_json(sc.trace)}, {"solving", trace_to_json(so.trace)}}}};
    int rc = 0;
    if (!o.context.empty()) {
        Term tree = parse(o.context, {.abbreviations = true, .allow_hole = true});
        auto target = target_from_string(o.target);
        if (!target)
            throw UsageError("unknown target " + o.target);
        Term given = o.given.empty() ? Term{} : read_term(o.given);
        Verdict w;
        try {
            ContextKind kind = fits_kind(tree, ContextKind::Head) ? ContextKind::Head : ContextKind::Testing;
            w = verify_witness(make_context(tree, kind), t, *target, given, o.fuel);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        j["witness"] = {{"context", print(tree)},
                        {"target", to_string(*target)},
                        {"answer", to_string(w.answer)},
                        {"note", w.note},
                        {"trace", trace_to_json(w.trace)}};
        rc = w.answer == Answer::Yes ? 0 : 1;
    }
    if (!o.json_out)
        j["traces"] = {{"open", trace_to_json(sc.trace)["final"]}, {"solving", trace_to_json(so.trace)["final"]}};
    out << j.dump(2) << "\n";
    return rc;
}

int cmd_sigma(const Options& o, std::ostream& out)
{
    Term t = read_term(o.term);
    Sigma rule;
    if (o.rule == "s1")
        rule = Sigma::S1;
    else if (o.rule == "s3")
        rule = Sigma::S3;
    else
        throw UsageError("rule must be s1 or s3");
    Term r;
    try {
        r = contract_sigma(t, rule);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    bool ok = sigma_embed_check(t, rule);
    out << json{{"rule", to_string(rule)}, {"term", print(t)}, {"reduct", print(r)}, {"embeds", ok}}.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_equiv(const Options& o, std::ostream& out)
{
    Term a = read_term(o.term);
    Term b = read_term(o.other);
    bool eq = struct_equiv(a, b);
    out << json{{"left", print(a)}, {"right", print(b)}, {"equivalent", eq}}.dump(2) << "\n";
    return eq ? 0 : 1;
}

int cmd_corpus(const Options& o, std::ostream& out)
{
    std::ifstream f(o.file);
    if (!f)
        throw UsageError("cannot open " + o.file);
    std::vector<CorpusEntry> entries;
    try {
        entries = parse_corpus(f);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    CorpusReport r = run_corpus(entries, o.fuel);
    if (o.json_out) {
        out << report_to_json(r).dump(2) << "\n";
    } else {
        std::size_t passed = 0;
        for (const auto& e : r.entries) {
            passed += e.pass();
            out << (e.pass() ? "PASS " : "FAIL ") << e.name << "\n";
            for (const auto& m : e.mismatches)
                out << "  " << m << "\n";
        }
        out << passed << "/" << r.entries.size() << " entries pass\n";
    }
    return r.pass() ? 0 : 1;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"vsc: value substitution calculus toolkit", "vsc"};
    app.require_subcommand(1);
    app.add_option("--fuel", o.fuel, "step bound (default 10000)");
    app.add_option("--strategy", o.strategy, "o, olam, s, slam, vsc, vsclam or betav");
    app.add_flag("--glue", o.glue, "enable the glue rule");
    app.add_flag("--json", o.json_out, "machine-readable output");

    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a term and print the trace");
    reduce_cmd->add_option("term", o.term)->required();
    auto* classify_cmd = app.add_subcommand("classify", "normal-form grammar membership");
    classify_cmd->add_option("term", o.term)->required();
    auto* type_cmd = app.add_subcommand("type", "infer a multi type derivation");
    type_cmd->add_option("term", o.term)->required();
    type_cmd->add_option("--mode", o.mode, "open or solving");
    auto* check_cmd = app.add_subcommand("check-derivation", "check a derivation given as JSON");
    check_cmd->add_option("file", o.file, "path, or - for stdin")->required();
    auto* solve_cmd = app.add_subcommand("solve", "scrutability and solvability verdicts");
    solve_cmd->add_option("term", o.term)->required();
    solve_cmd->add_option("--context", o.context, "witness context with [] as hole");
    solve_cmd->add_option("--target", o.target, "identity, inert, value or given");
    solve_cmd->add_option("--given", o.given, "term for target given");
    auto* sigma_cmd = app.add_subcommand("sigma-check", "check a sigma step against m-steps and equivalence");
    sigma_cmd->add_option("term", o.term)->required();
    sigma_cmd->add_option("--rule", o.rule, "s1 or s3");
    auto* equiv_cmd = app.add_subcommand("equiv", "structural equivalence");
    equiv_cmd->add_option("left", o.term)->required();
    equiv_cmd->add_option("right", o.other)->required();
    auto* corpus_cmd = app.add_subcommand("corpus", "check a JSONL corpus");
    corpus_cmd->add_option("file", o.file)->required();
    for (auto* sub : app.get_subcommands({}))
        sub->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "vsc: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (reduce_cmd->parsed())
            return cmd_reduce(o, out);
        if (classify_cmd->parsed())
            return cmd_classify(o, out);
        if (type_cmd->parsed())
            return cmd_type(o, out);
        if (check_cmd->parsed())
            return cmd_check(o, out);
        if (solve_cmd->parsed())
            return cmd_solve(o, out);
        if (sigma_cmd->parsed())
            return cmd_sigma(o, out);
        if (equiv_cmd->parsed())
            return cmd_equiv(o, out);
        if (corpus_cmd->parsed())
            return cmd_corpus(o, out);
    } catch (const ParseError& e) {
        err << "vsc: parse error at " << e.position() << ": " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "vsc: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace vsc
