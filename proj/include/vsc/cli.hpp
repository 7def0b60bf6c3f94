#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vsc/io.hpp"
#include "vsc/rewriting.hpp"

namespace vsc {

// Named strategies: o, olam, s, slam, vsc, vsclam, betav.
struct NamedStrategy {
    bool betav = false; // plain beta_v under the open closure
    Strategy strategy;
};
std::optional<NamedStrategy> strategy_from_name(const std::string& name);
Trace run_strategy(const Term& t, const NamedStrategy& s, std::size_t fuel);

// One JSON object per line:
//   {"name", "term", "origin", "expect": {
//       "scrutable": "Yes"|"No", "solvable": ...,
//       "nf": {strategy: {flag: bool}},
//       "phi_m": {"open": n, "solving": n},
//       "witness": {"context", "target", "given"?, "answer"?}}}
struct CorpusEntry {
    std::size_t line = 0;
    std::string name;
    std::string term;
    json expect;
};

struct EntryResult {
    std::string name;
    std::vector<std::string> mismatches;
    bool pass() const { return mismatches.empty(); }
};

struct CorpusReport {
    std::vector<EntryResult> entries;
    bool pass() const;
};

// Blank lines are skipped. Throws std::invalid_argument naming the line.
std::vector<CorpusEntry> parse_corpus(std::istream& in);
CorpusReport run_corpus(const std::vector<CorpusEntry>& entries, std::size_t fuel = 10000);
json report_to_json(const CorpusReport& r);

// Exit codes: 0 success, 1 failed check, 2 usage or input error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vsc
