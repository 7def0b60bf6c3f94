#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "vsc/multitypes.hpp"
#include "vsc/rewriting.hpp"

namespace vsc {

class DeriveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Derivation empty_many(const Term& v);
// many over ax nodes: x : M |- x : M
Derivation ax_bundle(const std::string& x, const MultiType& m);

// Value derivations split along any decomposition of their type, and merge.
// Both preserve |.| and |.|_m additively.
std::pair<Derivation, Derivation> split_value(const Derivation& d, const MultiType& m1, const MultiType& m2);
Derivation merge_value(const Derivation& a, const Derivation& b);

// From phi : G, x:N |- t : M and psi : D |- v : N, builds theta : G+D |- t{x<-v} : M
// with |theta|_m = |phi|_m + |psi|_m.
Derivation subst_lemma(const Derivation& phi, const std::string& x, const Derivation& psi);

struct Removal {
    Derivation psi;   // D, x:N |- t : M
    Derivation theta; // S |- v : N
};

// Inverse of subst_lemma for phi typing t{x<-v}.
Removal removal_lemma(const Derivation& phi, const Term& t, const std::string& x, const Term& v);

enum class Direction { Forward, Backward };

// Forward: phi types O<x>[x<-t] (x free once, outside abstractions) and the
// result types O<t>. Backward: phi types O<t> and redex is O<x>[x<-t].
Derivation linear_subst(const Derivation& phi, Direction dir, const Term& redex = {});

// One rewriting step, or one structural equivalence axiom, located at a path.
enum class MoveKind { M, ELambda, EVar, Glue, Equiv };
std::string to_string(MoveKind k);

struct Move {
    Path path;
    MoveKind kind = MoveKind::M;
    Axiom axiom = Axiom::AtLeft; // Equiv only
    bool forward = true;         // Equiv only
    Term before;
    Term after;
};

Move move_of(const Trace& tr, std::size_t i);
Move move_of(const Term& before, const EquivStep& s);

// Number of derivation nodes typing the subterm at p (0 under erased values).
std::size_t copies_at(const Derivation& phi, const Path& p);

// Both keep the final judgment. Size laws per typed copy of the redex:
//   m-step: |.|_m drops by exactly 2 and |.| by exactly 1
//   e-step: |.|_m unchanged, |.| strictly drops
// They are asserted internally; a violation throws std::logic_error.
Derivation subject_reduce(const Derivation& phi, const Move& mv);
Derivation subject_expand(const Derivation& phi, const Move& mv);

// Normal-form typings: arguments of inert applications get 0, solved
// fireballs are typed from [X] at their inert core.
Derivation type_inert_any(const Term& i, const MultiType& m);
Derivation type_fireball_tight(const Term& f);
Derivation type_solved_fireball(const Term& fs);

enum class Mode { Open, Solving };

struct Inference {
    Derivation derivation;
    Trace trace;
};

// Reduces t, types the normal form and expands the typing back along the trace.
// Empty when the reduction cycles or runs out of fuel.
std::optional<Inference> infer(const Term& t, Mode mode, std::size_t fuel = 10000);

// Renames binders of d so that its subject is syntactically target; throws
// DeriveError if d does not type a term alpha-equivalent to target.
Derivation align(const Derivation& d, const Term& target);
// Capture-avoiding renaming of the free variable from into to.
Derivation rename_var(const Derivation& d, const std::string& from, const std::string& to);

} // namespace vsc
