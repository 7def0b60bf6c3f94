#pragma once

#include <string>

#include "vsc/syntax.hpp"

namespace vsc {

// Membership in the normal-form grammars:
//   inert           i  ::= x | i f | i[x<-i']
//   fireball        f  ::= v | i | f[x<-i]
//   full inert      if ::= x | if ff | if[x<-if']
//   full fireball   ff ::= vf | if | ff[x<-if]      vf ::= x | \x.ff
//   solved fireball fs ::= i | \x.fs | fs[x<-i]
// A variable is both a value and inert, so the result is a set of flags.
struct NormalFormClass {
    bool value = false;
    bool inert = false;
    bool fireball = false;
    bool full_inert = false;
    bool full_fireball = false;
    bool solved_fireball = false;

    bool operator==(const NormalFormClass&) const = default;
};

NormalFormClass classify(const Term& t);

bool is_inert(const Term& t);
bool is_fireball(const Term& t);
bool is_full_value(const Term& t);
bool is_full_inert(const Term& t);
bool is_full_fireball(const Term& t);
bool is_solved_fireball(const Term& t);

// Looks up a flag by its field name ("inert", "solved_fireball", ...).
bool has_flag(const NormalFormClass& c, const std::string& flag);

} // namespace vsc
