#pragma once

#include <map>
#include <optional>

#include "arithdyn/exactreal.hpp"

namespace arithdyn {

namespace detail {

/// Brent's variant of Pollard rho; returns a nontrivial factor or nothing
/// within the iteration budget.
inline std::optional<Integer> pollard_brent(const Integer& n, unsigned long seed, unsigned long budget) {
    if (mpz_even_p(n.get_mpz_t())) return Integer(2);
    Integer y = seed % 1000 + 2, c = seed % 97 + 1, g = 1, q = 1, x, ys;
    unsigned long r = 1, m = 128, used = 0;
    auto step = [&](const Integer& v) {
        Integer t = v * v + c;
        mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        return t;
    };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = step(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            unsigned long lim = std::min(m, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                y = step(y);
                Integer d = abs(Integer(x - y));
                q = q * d;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            g = gcd(q, n);
            k += lim;
            used += lim;
            if (used > budget) return std::nullopt;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = step(ys);
            g = gcd(Integer(abs(Integer(x - ys))), n);
        } while (g == 1);
    }
    if (g == n) return std::nullopt;
    return g;
}

} // namespace detail

/// Prime factorization by trial division and Pollard rho. Throws
/// ResourceLimit if a composite cofactor resists the budget.
inline std::map<Integer, unsigned> factor_integer(Integer n, unsigned long budget = 20000000) {
    if (sgn(n) == 0) throw InvalidInput("cannot factor zero");
    n = abs(n);
    std::map<Integer, unsigned> out;
    for (unsigned long p = 2; p < 10000 && n > 1; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++out[Integer(p)];
            n /= p;
        }
    }
    std::vector<Integer> work;
    if (n > 1) work.push_back(n);
    while (!work.empty()) {
        Integer m = work.back();
        work.pop_back();
        if (m == 1) continue;
        if (mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
            ++out[m];
            continue;
        }
        std::optional<Integer> f;
        for (unsigned long seed = 1; seed < 16 && !f; ++seed) f = detail::pollard_brent(m, seed, budget / 16);
        if (!f) throw ResourceLimit("could not factor " + m.get_str());
        work.push_back(*f);
        work.push_back(Integer(m / *f));
    }
    return out;
}

} // namespace arithdyn
