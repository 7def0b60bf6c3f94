#pragma once

#include <json.hpp>

#include "vsc/classify.hpp"
#include "vsc/multitypes.hpp"
#include "vsc/rewriting.hpp"

namespace vsc {

using json = nlohmann::json;

json counts_to_json(const Counts& c);
json trace_to_json(const Trace& tr);
json classify_to_json(const NormalFormClass& c);

json type_to_json(const LinearType& a);
json type_to_json(const MultiType& m); // array in canonical order
json type_to_json(const Type& t);
json ctx_to_json(const TypeContext& g);
json derivation_to_json(const Derivation& d);

// Accepts the same shapes as the writers. Types given as arrays are multi
// types. Throws std::invalid_argument on malformed input; the derivation is
// not checked against the rules (use check_derivation).
LinearType linear_from_json(const json& j);
MultiType multi_from_json(const json& j);
Type type_from_json(const json& j);
TypeContext ctx_from_json(const json& j);
Derivation derivation_from_json(const json& j);

} // namespace vsc
