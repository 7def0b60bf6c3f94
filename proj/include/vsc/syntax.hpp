#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vsc {

enum class Kind { Var, Abs, App, ES, Hole };

struct Node;
using Path = std::vector<int>;

// Immutable term handle. Nodes are shared, so copying a Term is cheap.
//   Var:  name
//   Abs:  name = binder, child(0) = body
//   App:  child(0) = function, child(1) = argument
//   ES:   child(0) = body, name = binder, child(1) = definition
//   Hole: only inside contexts
class Term {
public:
    Term() = default;

    static Term var(std::string name);
    static Term abs(std::string binder, Term body);
    static Term app(Term fun, Term arg);
    static Term es(Term body, std::string binder, Term def);
    static Term hole();

    Kind kind() const;
    const std::string& name() const;
    const Term& child(int i) const;
    int arity() const;

    const Term& body() const { return child(0); }
    const Term& fun() const { return child(0); }
    const Term& arg() const { return child(1); }
    const Term& def() const { return child(1); }

    bool is_var() const { return kind() == Kind::Var; }
    bool is_abs() const { return kind() == Kind::Abs; }
    bool is_app() const { return kind() == Kind::App; }
    bool is_es() const { return kind() == Kind::ES; }
    bool is_hole() const { return kind() == Kind::Hole; }
    bool is_value() const { return is_var() || is_abs(); }

    explicit operator bool() const { return node_ != nullptr; }
    bool same_node(const Term& o) const { return node_ == o.node_; }

    // syntactic equality, binder names included
    bool operator==(const Term& o) const;

private:
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind;
    std::string name;
    Term left;
    Term right;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

struct ParseOptions {
    bool abbreviations = false; // I, DELTA, OMEGA when not bound
    bool allow_hole = false;    // "[]" denotes the hole of a context
};

Term parse(std::string_view text, const ParseOptions& opts = {});
std::string print(const Term& t);

std::set<std::string> free_vars(const Term& t);
bool occurs_free(const std::string& x, const Term& t);
std::size_t count_free(const std::string& x, const Term& t);
// Path of the leftmost free occurrence of x in t.
std::optional<Path> free_occurrence(const Term& t, const std::string& x);
std::set<std::string> all_names(const Term& t);

// Deterministic fresh names: base with trailing digits/primes stripped, plus a
// counter. The counter is thread-local; reset it to make a session reproducible.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);
void reset_fresh_names();

// t{x<-u}, renaming binders of t on the fly to avoid capture.
Term meta_subst(const Term& t, const std::string& x, const Term& u);
Term rename_free(const Term& t, const std::string& from, const std::string& to);

struct CanonicalTerm {
    std::string key;
    bool operator==(const CanonicalTerm& o) const { return key == o.key; }
    bool operator<(const CanonicalTerm& o) const { return key < o.key; }
};

struct CanonicalHash {
    std::size_t operator()(const CanonicalTerm& c) const { return std::hash<std::string>()(c.key); }
};

CanonicalTerm alpha_canon(const Term& t);
bool alpha_equal(const Term& a, const Term& b);

// Positions are root paths of child indices (see Term).
const Term& subterm_at(const Term& t, const Path& p);
// Literal grafting: no renaming, capture allowed.
Term replace_at(const Term& t, const Path& p, const Term& u);

std::size_t size(const Term& t);

Term es_expand(const Term& t);

struct Sizes {
    std::size_t open_size;
    std::size_t solvable_size;
    bool operator==(const Sizes&) const = default;
};
Sizes measure(const Term& t);
std::size_t open_size(const Term& t);
std::size_t solvable_size(const Term& t);

// ---- contexts ----

enum class ContextKind { Sub, Open, Full, Solving, Head, Testing };

struct Context {
    Term tree;
    ContextKind kind;
};

std::optional<Path> hole_path(const Term& tree);
bool fits_kind(const Term& tree, ContextKind kind);
// Throws std::invalid_argument when tree has not exactly one hole or does not
// match the grammar of kind.
Context make_context(const Term& tree, ContextKind kind);
Term plug(const Term& tree, const Term& t);
Term plug(const Context& c, const Term& t);

std::string to_string(ContextKind k);

// Common closed terms.
Term identity();
Term delta();
Term omega();

} // namespace vsc
