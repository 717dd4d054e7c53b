/*
   Copyright 2026 The stridepow authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Dense polynomials over an arbitrary finite field (coefficients are
// FieldElement values of one field, low degree first, no trailing zeros).
// Internal machinery shared by the factorization routines and the
// embedding construction for extension towers.

#ifndef STRIDEPOW_FQPOLY_HPP
#define STRIDEPOW_FQPOLY_HPP

#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stridepow/field.hpp"

namespace stridepow::detail {

using FqPoly = std::vector<FieldElement>;

inline void fq_trim(FqPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

inline int fq_deg(const FqPoly& f) { return static_cast<int>(f.size()) - 1; }

inline FqPoly fq_x(const FieldPtr& F) { return {F->zero(), F->one()}; }

inline FqPoly fq_add(const FqPoly& a, const FqPoly& b) {
    FqPoly c(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.size() && i < b.size()) c[i] = a[i] + b[i];
        else c[i] = i < a.size() ? a[i] : b[i];
    }
    fq_trim(c);
    return c;
}

inline FqPoly fq_sub(const FqPoly& a, const FqPoly& b) {
    FqPoly c(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.size() && i < b.size()) c[i] = a[i] - b[i];
        else c[i] = i < a.size() ? a[i] : -b[i];
    }
    fq_trim(c);
    return c;
}

inline FqPoly fq_mul(const FqPoly& a, const FqPoly& b, const FieldPtr& F) {
    if (a.empty() || b.empty()) return {};
    FqPoly c(a.size() + b.size() - 1, F->zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = c[i + j] + a[i] * b[j];
    }
    fq_trim(c);
    return c;
}

inline FqPoly fq_scale(const FqPoly& a, const FieldElement& s) {
    FqPoly c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * s;
    fq_trim(c);
    return c;
}

inline FqPoly fq_monic(FqPoly f) {
    fq_trim(f);
    if (f.empty() || f.back().is_one()) return f;
    return fq_scale(f, inv(f.back()));
}

// remainder of f modulo g (g nonzero, any leading coefficient)
inline FqPoly fq_rem(FqPoly f, const FqPoly& g) {
    const int dg = fq_deg(g);
    if (dg < 0) throw std::domain_error("fq_rem: division by zero polynomial");
    const FieldElement li = inv(g.back());
    while (fq_deg(f) >= dg) {
        const FieldElement c = f.back() * li;
        const std::size_t shift = f.size() - g.size();
        if (!c.is_zero()) {
            for (std::size_t j = 0; j + 1 < g.size(); ++j)
                f[shift + j] = f[shift + j] - c * g[j];
        }
        f.pop_back();
        fq_trim(f);
    }
    return f;
}

// quotient and remainder
inline std::pair<FqPoly, FqPoly> fq_divmod(FqPoly f, const FqPoly& g) {
    const int dg = fq_deg(g);
    if (dg < 0) throw std::domain_error("fq_divmod: division by zero polynomial");
    const FieldPtr& F = g.back().field();
    if (fq_deg(f) < dg) return {FqPoly{}, std::move(f)};
    const FieldElement li = inv(g.back());
    FqPoly q(f.size() - g.size() + 1, F->zero());
    while (fq_deg(f) >= dg) {
        const FieldElement c = f.back() * li;
        const std::size_t shift = f.size() - g.size();
        q[shift] = c;
        if (!c.is_zero()) {
            for (std::size_t j = 0; j + 1 < g.size(); ++j)
                f[shift + j] = f[shift + j] - c * g[j];
        }
        f.pop_back();
        fq_trim(f);
    }
    fq_trim(q);
    return {std::move(q), std::move(f)};
}

inline FqPoly fq_gcd(FqPoly a, FqPoly b) {
    while (!b.empty()) {
        a = fq_rem(std::move(a), b);
        std::swap(a, b);
    }
    return fq_monic(std::move(a));
}

inline FqPoly fq_mulmod(const FqPoly& a, const FqPoly& b, const FqPoly& m, const FieldPtr& F) {
    return fq_rem(fq_mul(a, b, F), m);
}

inline FqPoly fq_powmod(FqPoly base, std::uint64_t e, const FqPoly& m, const FieldPtr& F) {
    FqPoly r{F->one()};
    base = fq_rem(std::move(base), m);
    while (e) {
        if (e & 1) r = fq_mulmod(r, base, m, F);
        e >>= 1;
        if (e) base = fq_mulmod(base, base, m, F);
    }
    return r;
}

inline FieldElement fq_eval(const FqPoly& f, const FieldElement& x) {
    FieldElement acc = x.field()->zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

inline FieldElement fq_random_element(const FieldPtr& F, std::mt19937_64& rng) {
    return F->element_at(rng() % F->size());
}

// One root of a monic polynomial that splits into linear factors over F.
// Equal-degree splitting specialised to degree 1; seeded and bounded.
inline FieldElement fq_find_root(FqPoly f, const FieldPtr& F, std::mt19937_64& rng) {
    f = fq_monic(std::move(f));
    const std::uint64_t q = F->size();
    while (fq_deg(f) > 1) {
        FqPoly part;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            FqPoly w;
            if (F->characteristic() == 2) {
                // trace splitter: gcd(f, xi + xi^2 + ... + xi^(2^(e-1))), q = 2^e
                FqPoly xi{fq_random_element(F, rng), fq_random_element(F, rng)};
                fq_trim(xi);
                if (xi.empty()) continue;
                FqPoly acc = fq_rem(xi, f);
                FqPoly t = acc;
                for (std::uint64_t qq = q; qq > 2; qq >>= 1) {
                    t = fq_mulmod(t, t, f, F);
                    acc = fq_add(acc, t);
                }
                w = std::move(acc);
            } else {
                FqPoly shifted{fq_random_element(F, rng), F->one()};
                w = fq_powmod(std::move(shifted), (q - 1) / 2, f, F);
                w = fq_sub(w, FqPoly{F->one()});
            }
            FqPoly g = fq_gcd(w, f);
            if (fq_deg(g) > 0 && fq_deg(g) < fq_deg(f)) {
                FqPoly other = fq_divmod(f, g).first;
                part = fq_deg(g) <= fq_deg(other) ? std::move(g) : std::move(other);
                break;
            }
        }
        if (part.empty()) throw std::runtime_error("fq_find_root: splitting stalled");
        f = fq_monic(std::move(part));
    }
    if (fq_deg(f) != 1) throw std::runtime_error("fq_find_root: no linear factor");
    return -f[0];
}

}  // namespace stridepow::detail

#endif
