#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vsc/syntax.hpp"

namespace vsc {

struct LinearType;

// Finite multiset of linear types, kept sorted under compare().
struct MultiType {
    std::vector<LinearType> items;

    bool empty() const { return items.empty(); }
    std::size_t size() const { return items.size(); }
};

// X, or M -o N
struct LinearType {
    bool is_arrow = false;
    MultiType left;
    MultiType right;

    static LinearType atom() { return {}; }
    static LinearType arrow(MultiType m, MultiType n);
};

// Total order: atom < arrow; arrows lexicographic on (left, right); multisets
// lexicographic on their sorted items, shorter first on a common prefix.
int compare(const LinearType& a, const LinearType& b);
int compare(const MultiType& a, const MultiType& b);

bool operator==(const LinearType& a, const LinearType& b);
bool operator==(const MultiType& a, const MultiType& b);
bool operator<(const LinearType& a, const LinearType& b);
bool operator<(const MultiType& a, const MultiType& b);

MultiType multiset(std::vector<LinearType> items);
MultiType singleton(const LinearType& a);
MultiType ground(std::size_t n); // n[X]
MultiType operator+(const MultiType& a, const MultiType& b);
// a - b when b is a sub-multiset of a
std::optional<MultiType> subtract(const MultiType& a, const MultiType& b);

std::string to_string(const LinearType& a);
std::string to_string(const MultiType& m);

// name -> nonempty multi type; absent names stand for 0
using TypeContext = std::map<std::string, MultiType>;

TypeContext ctx_join(const TypeContext& a, const TypeContext& b);
MultiType ctx_get(const TypeContext& g, const std::string& x);
TypeContext ctx_remove(const TypeContext& g, const std::string& x);
TypeContext ctx_single(const std::string& x, const MultiType& m);
std::string to_string(const TypeContext& g);

struct TypeFlags {
    bool ground = false;
    bool inert = false;
    bool solvable = false;
    bool unitary_solvable = false;
    bool inertly_solvable = false;
    bool precisely_solvable = false;
};

TypeFlags type_flags(const MultiType& m);
bool is_ground(const MultiType& m);
bool is_inert_type(const MultiType& m);
bool is_solvable_type(const MultiType& m);
bool is_unitary_solvable(const MultiType& m);
bool is_inertly_solvable(const MultiType& m);
bool is_inert_context(const TypeContext& g);

// ---- derivations ----

enum class Rule { Ax, Lam, App, Es, Many };
std::string to_string(Rule r);

using Type = std::variant<LinearType, MultiType>;
std::string to_string(const Type& t);

struct Judgment {
    TypeContext ctx;
    Term subject;
    Type type;
};

struct Derivation {
    Rule rule = Rule::Many;
    Judgment judgment;
    std::vector<Derivation> premises;

    const TypeContext& ctx() const { return judgment.ctx; }
    const Term& subject() const { return judgment.subject; }
    const MultiType& multi() const;   // throws unless the conclusion is a multi type
    const LinearType& linear() const; // throws unless the conclusion is a linear type
};

// |D|: every rule except many.  |D|_m: lambda and @ rules.
std::size_t size(const Derivation& d);
std::size_t size_m(const Derivation& d);

class DerivationError : public std::runtime_error {
public:
    enum class Code { RuleShapeMismatch, ContextSumMismatch, ManyOnNonValue, SubjectMismatch };

    DerivationError(Code code, std::vector<int> path, const std::string& detail);
    Code code() const { return code_; }
    const std::vector<int>& path() const { return path_; }

private:
    Code code_;
    std::vector<int> path_;
};

std::string to_string(DerivationError::Code c);

// Builders compute the conclusion from the premises. They throw
// DerivationError on ill-formed input.
Derivation make_ax(const std::string& x, const LinearType& a);
Derivation make_lam(const std::string& x, Derivation premise);
Derivation make_many(const Term& value, std::vector<Derivation> premises);
Derivation make_app(Derivation fun, Derivation arg);
Derivation make_es(Derivation body, const std::string& x, Derivation def);

struct CheckResult {
    Judgment judgment;
    std::size_t size = 0;
    std::size_t size_m = 0;
};

// Rechecks every node bottom-up against the typing rules.
CheckResult check_derivation(const Derivation& d);

struct DerivationFlags {
    bool inert = false;
    bool tight = false;
};

DerivationFlags derivation_flags(const Derivation& d);

bool same_judgment(const Judgment& a, const Judgment& b);
bool same_judgment(const Derivation& a, const Derivation& b);

} // namespace vsc
