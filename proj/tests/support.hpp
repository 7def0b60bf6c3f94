#pragma once

// Shared helpers for the unit tests and the acceptance binary: exhaustive
// term enumeration and small oracles written independently of src/.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vsc/syntax.hpp"

namespace testing_support {

using vsc::Term;

// All terms with exactly n nodes. Binders are named by depth (x0, x1, ...)
// so no term shadows; free names are drawn from `free`.
class Enumerator {
public:
    explicit Enumerator(std::vector<std::string> free) : free_(std::move(free)) {}

    const std::vector<Term>& exact(int n, int depth = 0)
    {
        auto key = std::make_pair(n, depth);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        std::vector<Term> out;
        if (n == 1) {
            for (const auto& f : free_)
                out.push_back(Term::var(f));
            for (int d = 0; d < depth; ++d)
                out.push_back(Term::var(binder(d)));
        } else if (n >= 2) {
            for (const auto& b : exact(n - 1, depth + 1))
                out.push_back(Term::abs(binder(depth), b));
            for (int k = 1; k <= n - 2; ++k) {
                for (const auto& l : exact(k, depth))
                    for (const auto& r : exact(n - 1 - k, depth))
                        out.push_back(Term::app(l, r));
                for (const auto& l : exact(k, depth + 1))
                    for (const auto& r : exact(n - 1 - k, depth))
                        out.push_back(Term::es(l, binder(depth), r));
            }
        }
        return memo_[key] = std::move(out);
    }

    std::vector<Term> up_to(int n)
    {
        std::vector<Term> all;
        for (int k = 1; k <= n; ++k) {
            const auto& e = exact(k);
            all.insert(all.end(), e.begin(), e.end());
        }
        return all;
    }

    static std::string binder(int d) { return "x" + std::to_string(d); }

private:
    std::vector<std::string> free_;
    std::map<std::pair<int, int>, std::vector<Term>> memo_;
};

inline bool es_free_oracle(const Term& t)
{
    switch (t.kind()) {
    case vsc::Kind::Var: return true;
    case vsc::Kind::Abs: return es_free_oracle(t.body());
    case vsc::Kind::App: return es_free_oracle(t.fun()) && es_free_oracle(t.arg());
    default: return false;
    }
}

// De Bruijn rendering, independent of alpha_canon: bound variables become
// indices, free ones keep their names.
inline std::string debruijn(const Term& t, std::vector<std::string>& env)
{
    switch (t.kind()) {
    case vsc::Kind::Var:
        for (std::size_t i = env.size(); i-- > 0;)
            if (env[i] == t.name())
                return "#" + std::to_string(env.size() - 1 - i);
        return t.name();
    case vsc::Kind::Abs: {
        env.push_back(t.name());
        std::string b = debruijn(t.body(), env);
        env.pop_back();
        return "(L " + b + ")";
    }
    case vsc::Kind::App: return "(" + debruijn(t.fun(), env) + " " + debruijn(t.arg(), env) + ")";
    case vsc::Kind::ES: {
        std::string d = debruijn(t.def(), env);
        env.push_back(t.name());
        std::string b = debruijn(t.body(), env);
        env.pop_back();
        return "(S " + b + " " + d + ")";
    }
    default: return "[]";
    }
}

inline std::string debruijn(const Term& t)
{
    std::vector<std::string> env;
    return debruijn(t, env);
}

// Node count, recomputed from scratch.
inline std::size_t nodes(const Term& t)
{
    switch (t.kind()) {
    case vsc::Kind::Var:
    case vsc::Kind::Hole: return 1;
    case vsc::Kind::Abs: return 1 + nodes(t.body());
    default: return 1 + nodes(t.child(0)) + nodes(t.child(1));
    }
}

// Random term of roughly the given size over free names {y, z}.
inline Term random_term(std::mt19937& rng, int size, int depth = 0)
{
    std::uniform_int_distribution<int> pick(0, 9);
    auto leaf = [&]() {
        std::uniform_int_distribution<int> v(0, depth + 1);
        int k = v(rng);
        if (k < depth)
            return Term::var(Enumerator::binder(k));
        return Term::var(k == depth ? "y" : "z");
    };
    if (size <= 1)
        return leaf();
    int c = pick(rng);
    if (c < 3)
        return Term::abs(Enumerator::binder(depth), random_term(rng, size - 1, depth + 1));
    std::uniform_int_distribution<int> split(1, std::max(1, size - 2));
    int k = split(rng);
    if (c < 8)
        return Term::app(random_term(rng, k, depth), random_term(rng, size - 1 - k, depth));
    return Term::es(random_term(rng, k, depth + 1), Enumerator::binder(depth), random_term(rng, size - 1 - k, depth));
}

} // namespace testing_support
