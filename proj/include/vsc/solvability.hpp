#pragma once

#include <optional>
#include <string>
#include <utility>

#include "vsc/rewriting.hpp"

namespace vsc {

enum class Answer { Yes, No, Unknown };
std::string to_string(Answer a);

// Yes carries a terminating trace, No a trace ending in a repeated term (or,
// for witness checks, in a normal form that misses the target), Unknown the
// trace cut by fuel.
struct Verdict {
    Answer answer = Answer::Unknown;
    Trace trace;
    std::string note;
};

Verdict scrutable(const Term& t, std::size_t fuel = 10000);
Verdict solvable(const Term& t, std::size_t fuel = 10000);

// H_fe = (H (\x.u)) I and H_in = H x' for a head context H.
std::pair<Context, Context> derive_witnesses(const Context& h, const Term& u);

enum class Target { Identity, Inert, Value, Given };
std::string to_string(Target t);
std::optional<Target> target_from_string(const std::string& s);

// Reduces H<t> and tests the target on the normal form. Identity, Inert and
// Given use the full closure and need a head context; Value uses the open
// closure and also accepts a testing context.
Verdict verify_witness(const Context& h, const Term& t, Target target, const Term& given = {},
                       std::size_t fuel = 10000);

} // namespace vsc
