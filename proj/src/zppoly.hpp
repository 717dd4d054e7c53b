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

// Raw dense polynomials over F_p (residues as uint64_t, low degree first,
// no trailing zeros). Internal plumbing for modulus validation and
// irreducible-modulus search; p < 2^31 so products fit in 64 bits.

#ifndef STRIDEPOW_ZPPOLY_HPP
#define STRIDEPOW_ZPPOLY_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace stridepow::detail {

using ZpPoly = std::vector<std::uint64_t>;

inline std::uint64_t zp_inv(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; p prime, a != 0
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a % p);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::domain_error("zp_inv: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

inline void zp_trim(ZpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int zp_deg(const ZpPoly& f) { return static_cast<int>(f.size()) - 1; }

inline ZpPoly zp_mul(const ZpPoly& a, const ZpPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ZpPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    zp_trim(c);
    return c;
}

// remainder of f modulo monic m
inline ZpPoly zp_rem(ZpPoly f, const ZpPoly& m, std::uint64_t p) {
    const int dm = zp_deg(m);
    while (zp_deg(f) >= dm) {
        const std::uint64_t c = f.back();
        const std::size_t shift = f.size() - m.size();
        if (c != 0) {
            for (std::size_t j = 0; j + 1 < m.size(); ++j)
                f[shift + j] = (f[shift + j] + c * (p - m[j])) % p;
        }
        f.pop_back();
        zp_trim(f);
    }
    return f;
}

inline ZpPoly zp_mulmod(const ZpPoly& a, const ZpPoly& b, const ZpPoly& m, std::uint64_t p) {
    return zp_rem(zp_mul(a, b, p), m, p);
}

inline ZpPoly zp_powmod(ZpPoly base, std::uint64_t e, const ZpPoly& m, std::uint64_t p) {
    ZpPoly r{1};
    base = zp_rem(std::move(base), m, p);
    while (e) {
        if (e & 1) r = zp_mulmod(r, base, m, p);
        e >>= 1;
        if (e) base = zp_mulmod(base, base, m, p);
    }
    return r;
}

inline ZpPoly zp_gcd(ZpPoly a, ZpPoly b, std::uint64_t p) {
    while (!b.empty()) {
        ZpPoly m = b;
        const std::uint64_t li = zp_inv(m.back(), p);
        for (auto& c : m) c = c * li % p;
        a = zp_rem(std::move(a), m, p);
        std::swap(a, b);
    }
    if (!a.empty()) {
        const std::uint64_t li = zp_inv(a.back(), p);
        for (auto& c : a) c = c * li % p;
    }
    return a;
}

// Rabin test: f (monic, degree d) is irreducible over F_p iff
// x^(p^d) = x mod f and gcd(x^(p^(d/l)) - x, f) = 1 for every prime l | d.
inline bool zp_irreducible(const ZpPoly& f, std::uint64_t p) {
    const int d = zp_deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    auto frob_power = [&](unsigned steps) {
        // x^(p^steps) mod f by iterated p-th powers
        ZpPoly h{0, 1};
        for (unsigned i = 0; i < steps; ++i) h = zp_powmod(std::move(h), p, f, p);
        return h;
    };
    std::vector<unsigned> primes;
    {
        unsigned n = static_cast<unsigned>(d);
        for (unsigned q = 2; q * q <= n; ++q)
            if (n % q == 0) {
                primes.push_back(q);
                while (n % q == 0) n /= q;
            }
        if (n > 1) primes.push_back(n);
    }
    for (unsigned l : primes) {
        ZpPoly h = frob_power(static_cast<unsigned>(d) / l);
        // h - x
        if (h.size() < 2) h.resize(2, 0);
        h[1] = (h[1] + p - 1) % p;
        zp_trim(h);
        ZpPoly g = zp_gcd(std::move(h), f, p);
        if (zp_deg(g) != 0) return false;
    }
    ZpPoly h = frob_power(static_cast<unsigned>(d));
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    zp_trim(h);
    return h.empty();
}

inline ZpPoly zp_find_irreducible(unsigned degree, std::uint64_t p, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 20000; ++attempt) {
        ZpPoly f(degree + 1, 0);
        f[degree] = 1;
        for (unsigned i = 0; i < degree; ++i) f[i] = rng() % p;
        if (zp_irreducible(f, p)) return f;
    }
    throw std::runtime_error("zp_find_irreducible: search exhausted");
}

}  // namespace stridepow::detail

#endif
