#include "vsc/classify.hpp"

#include <stdexcept>

namespace vsc {

bool is_inert(const Term& t)
{
    switch (t.kind()) {
    case Kind::Var: return true;
    case Kind::App: return is_inert(t.fun()) && is_fireball(t.arg());
    case Kind::ES: return is_inert(t.body()) && is_inert(t.def());
    default: return false;
    }
}

bool is_fireball(const Term& t)
{
    if (t.is_value() || is_inert(t))
        return true;
    return t.is_es() && is_fireball(t.body()) && is_inert(t.def());
}

bool is_full_value(const Term& t)
{
    if (t.is_var())
        return true;
    return t.is_abs() && is_full_fireball(t.body());
}

bool is_full_inert(const Term& t)
{
    switch (t.kind()) {
    case Kind::Var: return true;
    case Kind::App: return is_full_inert(t.fun()) && is_full_fireball(t.arg());
    case Kind::ES: return is_full_inert(t.body()) && is_full_inert(t.def());
    default: return false;
    }
}

bool is_full_fireball(const Term& t)
{
    if (is_full_value(t) || is_full_inert(t))
        return true;
    return t.is_es() && is_full_fireball(t.body()) && is_full_inert(t.def());
}

bool is_solved_fireball(const Term& t)
{
    if (is_inert(t))
        return true;
    if (t.is_abs())
        return is_solved_fireball(t.body());
    return t.is_es() && is_solved_fireball(t.body()) && is_inert(t.def());
}

NormalFormClass classify(const Term& t)
{
    NormalFormClass c;
    c.value = t.is_value();
    c.inert = is_inert(t);
    c.fireball = is_fireball(t);
    c.full_inert = is_full_inert(t);
    c.full_fireball = is_full_fireball(t);
    c.solved_fireball = is_solved_fireball(t);
    return c;
}

bool has_flag(const NormalFormClass& c, const std::string& flag)
{
    if (flag == "value")
        return c.value;
    if (flag == "inert")
        return c.inert;
    if (flag == "fireball")
        return c.fireball;
    if (flag == "full_inert")
        return c.full_inert;
    if (flag == "full_fireball")
        return c.full_fireball;
    if (flag == "solved_fireball")
        return c.solved_fireball;
    throw std::invalid_argument("unknown normal-form flag: " + flag);
}

} // namespace vsc
