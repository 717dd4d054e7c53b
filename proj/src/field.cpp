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

#include "stridepow/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <atomic>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fqpoly.hpp"
#include "zppoly.hpp"

namespace stridepow {

namespace {

constexpr std::uint64_t kPrimeCap = std::uint64_t{1} << 31;
constexpr std::uint64_t kSizeCap = std::uint64_t{1} << 62;

// fixed seeds: root extraction and modulus search are pure functions
constexpr std::uint64_t kNonResidueSeed = 0x5eedc0de1234abcdULL;
constexpr std::uint64_t kModulusSearchSeed = 0x1337f1e1d5eedULL;

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t checked_pow_u64(std::uint64_t base, unsigned exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (r > cap / base) throw std::invalid_argument("field size exceeds the supported 2^62 cap");
        r *= base;
    }
    return r;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m) {
    // extended Euclid, gcd(a, m) = 1
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(a % m);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::domain_error("inv_mod_u64: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

std::uint64_t next_field_serial() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_same(const FieldElement& x, const FieldElement& y) {
    if (!x.valid() || !y.valid()) throw std::invalid_argument("arithmetic on an invalid field element");
    if (!same_field(x.field(), y.field()))
        throw std::invalid_argument("field descriptor mismatch between operands");
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldElement basics

FieldKind FieldElement::kind() const {
    if (!valid()) throw std::invalid_argument("invalid field element");
    return field_->kind();
}

std::complex<double> FieldElement::complex_value() const {
    if (kind() != FieldKind::ComplexApprox)
        throw std::invalid_argument("complex_value() on a finite-field element");
    return z_;
}

std::uint64_t FieldElement::residue() const {
    if (kind() != FieldKind::PrimeField)
        throw std::invalid_argument("residue() is only defined for prime-field elements");
    return res_[0];
}

bool FieldElement::is_zero() const {
    if (kind() == FieldKind::ComplexApprox) return std::abs(z_) <= field_->epsilon();
    for (auto r : res_)
        if (r != 0) return false;
    return true;
}

bool FieldElement::is_one() const {
    if (kind() == FieldKind::ComplexApprox)
        return std::abs(z_ - std::complex<double>(1.0, 0.0)) <= field_->epsilon();
    if (res_[0] != 1) return false;
    for (std::size_t i = 1; i < res_.size(); ++i)
        if (res_[i] != 0) return false;
    return true;
}

std::string FieldElement::to_text() const {
    switch (kind()) {
        case FieldKind::ComplexApprox: {
            const double re = z_.real(), im = z_.imag();
            if (im == 0.0) return fmt_double(re);
            std::string s;
            if (re != 0.0) {
                s = fmt_double(re);
                s += im < 0.0 ? "-" : "+";
                s += fmt_double(std::abs(im));
            } else {
                s = fmt_double(im);
            }
            s += 'i';
            return s;
        }
        case FieldKind::PrimeField:
            return std::to_string(res_[0]);
        case FieldKind::ExtensionField: {
            std::string s = "[";
            for (std::size_t i = 0; i < res_.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(res_[i]);
            }
            s += ']';
            return s;
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Field construction and validation

FieldPtr Field::complex_approx(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::ComplexApprox;
    f->eps_ = epsilon;
    f->p_ = 0;
    f->k_ = 1;
    f->serial_ = next_field_serial();
    return f;
}

FieldPtr Field::prime(std::uint64_t p) {
    if (p >= kPrimeCap) throw std::invalid_argument("prime modulus must be below 2^31");
    if (!is_prime_u64(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::PrimeField;
    f->p_ = p;
    f->k_ = 1;
    f->serial_ = next_field_serial();
    return f;
}

FieldPtr Field::extension(std::uint64_t p, std::vector<std::uint64_t> modulus) {
    if (p >= kPrimeCap) throw std::invalid_argument("prime modulus must be below 2^31");
    if (!is_prime_u64(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    if (modulus.size() < 3)
        throw std::invalid_argument("extension modulus must have degree >= 2 (use F:p for the prime field)");
    for (auto& c : modulus) c %= p;
    if (modulus.back() != 1) throw std::invalid_argument("extension modulus must be monic");
    const unsigned k = static_cast<unsigned>(modulus.size()) - 1;
    checked_pow_u64(p, k, kSizeCap);
    if (!detail::zp_irreducible(modulus, p))
        throw std::invalid_argument("extension modulus is reducible over F_" + std::to_string(p));
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::ExtensionField;
    f->p_ = p;
    f->k_ = k;
    f->modulus_ = std::move(modulus);
    f->serial_ = next_field_serial();
    return f;
}

std::uint64_t Field::size() const {
    if (!finite()) throw std::invalid_argument("size() on the complex field");
    return checked_pow_u64(p_, k_, kSizeCap);
}

std::string Field::to_text() const {
    switch (kind_) {
        case FieldKind::ComplexApprox: return "C";
        case FieldKind::PrimeField: return "F:" + std::to_string(p_);
        case FieldKind::ExtensionField: {
            std::string s = "F:" + std::to_string(p_) + "^" + std::to_string(k_) + ":";
            for (std::size_t i = 0; i < modulus_.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(modulus_[i]);
            }
            return s;
        }
    }
    return {};
}

FieldPtr Field::parse(const std::string& text) {
    if (text == "C") return complex_approx();
    if (text.rfind("F:", 0) != 0)
        throw std::invalid_argument("unrecognized field descriptor '" + text + "'");
    const std::string body = text.substr(2);
    const auto caret = body.find('^');
    if (caret == std::string::npos) {
        std::size_t pos = 0;
        const std::uint64_t p = std::stoull(body, &pos);
        if (pos != body.size()) throw std::invalid_argument("bad prime in field descriptor '" + text + "'");
        return prime(p);
    }
    const std::uint64_t p = std::stoull(body.substr(0, caret));
    const auto colon = body.find(':', caret);
    if (colon == std::string::npos)
        throw std::invalid_argument("extension descriptor '" + text + "' is missing its modulus");
    const std::uint64_t k = std::stoull(body.substr(caret + 1, colon - caret - 1));
    std::vector<std::uint64_t> mod;
    std::stringstream ss(body.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ','))
        mod.push_back(std::stoull(tok));
    if (mod.size() != k + 1)
        throw std::invalid_argument("modulus in '" + text + "' must list k+1 coefficients");
    return extension(p, std::move(mod));
}

bool same_field(const Field& a, const Field& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FieldKind::ComplexApprox: return true;  // epsilon is a comparison policy, not identity
        case FieldKind::PrimeField: return a.characteristic() == b.characteristic();
        case FieldKind::ExtensionField:
            return a.characteristic() == b.characteristic() && a.degree() == b.degree() &&
                   a.modulus() == b.modulus();
    }
    return false;
}

bool same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a == b) return a != nullptr;
    if (!a || !b) return false;
    return same_field(*a, *b);
}

// ---------------------------------------------------------------------------
// Element factories

FieldElement Field::zero() const {
    if (kind_ == FieldKind::ComplexApprox) return {shared_from_this(), std::complex<double>{}};
    return {shared_from_this(), std::vector<std::uint64_t>(k_, 0)};
}

FieldElement Field::one() const { return from_int(1); }

FieldElement Field::from_int(std::int64_t v) const {
    if (kind_ == FieldKind::ComplexApprox)
        return {shared_from_this(), std::complex<double>(static_cast<double>(v), 0.0)};
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    std::vector<std::uint64_t> res(k_, 0);
    res[0] = static_cast<std::uint64_t>(r);
    return {shared_from_this(), std::move(res)};
}

FieldElement Field::from_complex(std::complex<double> z) const {
    if (kind_ != FieldKind::ComplexApprox)
        throw std::invalid_argument("complex payload for a finite field");
    return {shared_from_this(), z};
}

FieldElement Field::from_residues(std::vector<std::uint64_t> residues) const {
    if (kind_ == FieldKind::ComplexApprox)
        throw std::invalid_argument("residue payload for the complex field");
    if (residues.size() > k_) throw std::invalid_argument("residue vector longer than extension degree");
    residues.resize(k_, 0);
    for (auto& r : residues) r %= p_;
    return {shared_from_this(), std::move(residues)};
}

FieldElement Field::element_at(std::uint64_t index) const {
    if (!finite()) throw std::invalid_argument("element_at() on the complex field");
    std::vector<std::uint64_t> res(k_, 0);
    for (unsigned i = 0; i < k_ && index; ++i) {
        res[i] = index % p_;
        index /= p_;
    }
    if (index) throw std::invalid_argument("element index out of range");
    return {shared_from_this(), std::move(res)};
}

std::uint64_t Field::index_of(const FieldElement& x) const {
    if (!finite()) throw std::invalid_argument("index_of() on the complex field");
    std::uint64_t idx = 0;
    for (std::size_t i = x.res_.size(); i-- > 0;) idx = idx * p_ + x.res_[i];
    return idx;
}

// ---------------------------------------------------------------------------
// Arithmetic

FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    require_same(x, y);
    const FieldPtr& F = x.field();
    if (F->kind() == FieldKind::ComplexApprox) return F->from_complex(x.complex_value() + y.complex_value());
    const std::uint64_t p = F->characteristic();
    std::vector<std::uint64_t> r(x.residues());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += y.residues()[i];
        if (r[i] >= p) r[i] -= p;
    }
    return F->from_residues(std::move(r));
}

FieldElement operator-(const FieldElement& x, const FieldElement& y) {
    require_same(x, y);
    const FieldPtr& F = x.field();
    if (F->kind() == FieldKind::ComplexApprox) return F->from_complex(x.complex_value() - y.complex_value());
    const std::uint64_t p = F->characteristic();
    std::vector<std::uint64_t> r(x.residues());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += p - y.residues()[i];
        if (r[i] >= p) r[i] -= p;
    }
    return F->from_residues(std::move(r));
}

FieldElement operator-(const FieldElement& x) {
    if (!x.valid()) throw std::invalid_argument("arithmetic on an invalid field element");
    const FieldPtr& F = x.field();
    if (F->kind() == FieldKind::ComplexApprox) return F->from_complex(-x.complex_value());
    const std::uint64_t p = F->characteristic();
    std::vector<std::uint64_t> r(x.residues());
    for (auto& c : r) c = c == 0 ? 0 : p - c;
    return F->from_residues(std::move(r));
}

FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    require_same(x, y);
    const FieldPtr& F = x.field();
    if (F->kind() == FieldKind::ComplexApprox) return F->from_complex(x.complex_value() * y.complex_value());
    const std::uint64_t p = F->characteristic();
    const unsigned k = F->degree();
    if (k == 1) return F->from_residues({x.residues()[0] * y.residues()[0] % p});
    // schoolbook convolution, then reduction by the monic modulus
    std::vector<std::uint64_t> tmp(2 * k - 1, 0);
    const auto& a = x.residues();
    const auto& b = y.residues();
    for (unsigned i = 0; i < k; ++i) {
        if (a[i] == 0) continue;
        for (unsigned j = 0; j < k; ++j) tmp[i + j] = (tmp[i + j] + a[i] * b[j]) % p;
    }
    const auto& m = F->modulus();
    for (unsigned d = 2 * k - 2; d >= k; --d) {
        const std::uint64_t c = tmp[d];
        if (c == 0) continue;
        tmp[d] = 0;
        for (unsigned j = 0; j < k; ++j) tmp[d - k + j] = (tmp[d - k + j] + c * (p - m[j])) % p;
    }
    tmp.resize(k);
    return F->from_residues(std::move(tmp));
}

FieldElement pow(const FieldElement& x, std::uint64_t e) {
    if (!x.valid()) throw std::invalid_argument("arithmetic on an invalid field element");
    FieldElement r = x.field()->one();
    FieldElement base = x;
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

FieldElement inv(const FieldElement& x) {
    if (!x.valid()) throw std::invalid_argument("arithmetic on an invalid field element");
    const FieldPtr& F = x.field();
    if (x.is_zero()) throw std::domain_error("division by zero");
    switch (F->kind()) {
        case FieldKind::ComplexApprox: return F->from_complex(1.0 / x.complex_value());
        case FieldKind::PrimeField:
            return F->from_residues({detail::zp_inv(x.residues()[0], F->characteristic())});
        case FieldKind::ExtensionField: return pow(x, F->size() - 2);
    }
    throw std::logic_error("unreachable");
}

FieldElement operator/(const FieldElement& x, const FieldElement& y) { return x * inv(y); }

bool operator==(const FieldElement& x, const FieldElement& y) {
    require_same(x, y);
    if (x.field()->kind() == FieldKind::ComplexApprox) {
        const auto a = x.complex_value(), b = y.complex_value();
        const double eps = x.field()->epsilon();
        return std::abs(a - b) <= eps * (1.0 + std::max(std::abs(a), std::abs(b)));
    }
    return x.residues() == y.residues();
}

bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }

double magnitude(const FieldElement& x) {
    if (x.kind() == FieldKind::ComplexApprox) return std::abs(x.complex_value());
    return x.is_zero() ? 0.0 : 1.0;
}

bool canonical_less(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    if (a.kind() == FieldKind::ComplexApprox) {
        const auto x = a.complex_value(), y = b.complex_value();
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    }
    return a.field()->index_of(a) < b.field()->index_of(b);
}

// ---------------------------------------------------------------------------
// Root extraction

bool is_square(const FieldElement& x) {
    if (x.kind() == FieldKind::ComplexApprox) return true;
    if (x.is_zero()) return true;
    const std::uint64_t q = x.field()->size();
    if (x.field()->characteristic() == 2) return true;  // Frobenius is bijective
    return pow(x, (q - 1) / 2).is_one();
}

namespace {

// deterministic seeded search for an element whose (q-1)/l power is nontrivial
FieldElement find_power_nonresidue(const FieldPtr& F, std::uint64_t l) {
    const std::uint64_t q = F->size();
    std::mt19937_64 rng(kNonResidueSeed ^ (q * 0x9e3779b97f4a7c15ULL) ^ l);
    for (int attempt = 0; attempt < 20000; ++attempt) {
        FieldElement z = F->element_at(rng() % q);
        if (z.is_zero()) continue;
        if (!pow(z, (q - 1) / l).is_one()) return z;
    }
    throw std::runtime_error("non-residue search exhausted");
}

}  // namespace

std::optional<FieldElement> sqrt(const FieldElement& x) {
    if (!x.valid()) throw std::invalid_argument("sqrt of an invalid field element");
    const FieldPtr& F = x.field();
    if (F->kind() == FieldKind::ComplexApprox) return F->from_complex(std::sqrt(x.complex_value()));
    if (F->characteristic() == 2)
        throw std::domain_error("square roots in characteristic 2 are unsupported");
    if (x.is_zero()) return F->zero();
    const std::uint64_t q = F->size();
    if (!pow(x, (q - 1) / 2).is_one()) return std::nullopt;  // Euler: non-residue

    // Tonelli-Shanks in the multiplicative group of order q - 1
    std::uint64_t Q = q - 1;
    unsigned S = 0;
    while ((Q & 1) == 0) {
        Q >>= 1;
        ++S;
    }
    FieldElement z = find_power_nonresidue(F, 2);
    FieldElement c = pow(z, Q);
    FieldElement t = pow(x, Q);
    FieldElement r = pow(x, (Q + 1) / 2);
    unsigned M = S;
    while (!t.is_one()) {
        FieldElement t2 = t;
        unsigned i = 0;
        while (!t2.is_one()) {
            t2 = t2 * t2;
            ++i;
            if (i == M) throw std::logic_error("Tonelli-Shanks: residue test lied");
        }
        FieldElement b = c;
        for (unsigned j = 0; j + i + 1 < M; ++j) b = b * b;
        M = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    FieldElement nr = -r;
    return canonical_less(r, nr) ? r : nr;
}

namespace {

// discrete log of u in the cyclic l-Sylow subgroup generated by g (order l^t)
std::uint64_t dlog_sylow(const FieldElement& u, const FieldElement& g, std::uint64_t l, unsigned t,
                         std::uint64_t sylow) {
    std::uint64_t e = 0;
    FieldElement zeta = g;
    for (unsigned i = 0; i + 1 < t; ++i) zeta = pow(zeta, l);  // order l
    std::uint64_t lpow = 1;                                    // l^i
    for (unsigned i = 0; i < t; ++i) {
        FieldElement c = u * pow(g, sylow - e % sylow);
        for (unsigned j = 0; j + 1 + i < t; ++j) c = pow(c, l);
        std::uint64_t digit = 0;
        FieldElement probe = c.field()->one();
        while (!(probe == c)) {
            probe = probe * zeta;
            ++digit;
            if (digit >= l) throw std::logic_error("dlog_sylow: element outside subgroup");
        }
        e += digit * lpow;
        if (i + 1 < t) lpow *= l;
    }
    return e;
}

// exact l^a-th root in F_q (l prime); nullopt if none exists in the field
std::optional<FieldElement> prime_power_root(const FieldElement& x, std::uint64_t l, unsigned a) {
    const FieldPtr& F = x.field();
    const std::uint64_t N = F->size() - 1;
    if (N % l != 0) {
        // l invertible mod N: direct exponentiation
        std::uint64_t e = 1;
        const std::uint64_t li = inv_mod_u64(l % N, N);
        for (unsigned i = 0; i < a; ++i) e = mulmod_u64(e, li, N);
        return pow(x, e);
    }
    unsigned t = 0;
    std::uint64_t sylow = 1;
    std::uint64_t s = N;
    while (s % l == 0) {
        s /= l;
        sylow *= l;
        ++t;
    }
    // split x across Z_{l^t} x Z_s: u = x^(s*A), w = x^(l^t*B) with sA + l^t B = 1 (mod N)
    const std::uint64_t A = inv_mod_u64(s % sylow, sylow);
    const std::uint64_t B = inv_mod_u64(sylow % s, s);
    const FieldElement u = pow(x, mulmod_u64(s, A, N));
    const FieldElement w = pow(x, mulmod_u64(sylow % N, B, N));
    // order-coprime part: l^a is invertible mod s
    std::uint64_t ew = 1;
    {
        const std::uint64_t li = inv_mod_u64(l % s, s);
        for (unsigned i = 0; i < a; ++i) ew = mulmod_u64(ew, li, s);
    }
    const FieldElement wroot = pow(w, ew);
    // Sylow part: dlog, divisibility check, exponent division
    const FieldElement g = pow(find_power_nonresidue(F, l), s);
    std::uint64_t e = dlog_sylow(u, g, l, t, sylow);
    std::uint64_t need = 1;
    for (unsigned i = 0; i < std::min<unsigned>(a, t); ++i) need *= l;
    if (e % need != 0) return std::nullopt;
    std::uint64_t eroot = e / need;
    // if a > t the remaining root steps act trivially on an identity component
    const FieldElement uroot = pow(g, eroot);
    return uroot * wroot;
}

}  // namespace

std::optional<FieldElement> nth_root(const FieldElement& x, std::uint64_t r) {
    if (!x.valid()) throw std::invalid_argument("nth_root of an invalid field element");
    if (r == 0) throw std::invalid_argument("root degree must be positive");
    const FieldPtr& F = x.field();
    if (F->kind() == FieldKind::ComplexApprox) {
        const auto z = x.complex_value();
        if (r == 1) return x;
        if (std::abs(z) == 0.0) return F->zero();
        return F->from_complex(std::pow(z, 1.0 / static_cast<double>(r)));
    }
    if (x.is_zero()) return F->zero();
    const std::uint64_t q = F->size();
    const std::uint64_t N = q - 1;
    if (N == 1) return x;  // F_2: identity
    std::uint64_t rr = r % N;
    if (rr == 0) {
        // y^r = y^(N*k) = 1 for nonzero y; solvable only for x = 1
        if (x.is_one()) return F->one();
        return std::nullopt;
    }
    // peel off the part of rr coprime to N
    std::uint64_t core = 1, cop = 1, rest = rr;
    for (std::uint64_t l = 2; l * l <= rest; ++l) {
        if (rest % l) continue;
        std::uint64_t part = 1;
        while (rest % l == 0) {
            part *= l;
            rest /= l;
        }
        (N % l == 0 ? core : cop) *= part;
    }
    if (rest > 1) (N % rest == 0 ? core : cop) *= rest;
    FieldElement y = x;
    if (cop > 1) y = pow(y, inv_mod_u64(cop % N, N));
    std::uint64_t c = core;
    for (std::uint64_t l = 2; c > 1 && l * l <= c; ++l) {
        if (c % l) continue;
        unsigned a = 0;
        while (c % l == 0) {
            c /= l;
            ++a;
        }
        auto root = prime_power_root(y, l, a);
        if (!root) return std::nullopt;
        y = *root;
    }
    if (c > 1) {
        // c is prime after trial division; the in-group digit search is O(c)
        if (c > 2'000'000)
            throw std::invalid_argument("root degree has a prime factor too large for in-field search");
        auto root = prime_power_root(y, c, 1);
        if (!root) return std::nullopt;
        y = *root;
    }
    return y;
}

FieldElement frobenius_root(const FieldElement& x, unsigned s) {
    if (!x.valid()) throw std::invalid_argument("frobenius_root of an invalid field element");
    const FieldPtr& F = x.field();
    if (!F->finite())
        throw std::invalid_argument("frobenius_root is only defined over finite fields");
    const unsigned k = F->degree();
    const unsigned j = (k - s % k) % k;  // inverse Frobenius applied s times = Frobenius^j
    if (j == 0) return x;
    std::uint64_t e = 1;
    for (unsigned i = 0; i < j; ++i) e *= F->characteristic();
    return pow(x, e);
}

// ---------------------------------------------------------------------------
// Extensions and embeddings

FieldElement Field::lift_from_base(const FieldElement& x) const {
    const FieldPtr& src = x.field();
    if (src->kind() == FieldKind::PrimeField)
        return from_residues({x.residues()[0]});
    FieldElement rho = from_residues(base_gen_image_);
    FieldElement acc = zero();
    const auto& res = x.residues();
    for (std::size_t i = res.size(); i-- > 0;) {
        acc = acc * rho;
        acc = acc + from_int(static_cast<std::int64_t>(res[i]));
    }
    return acc;
}

FieldElement embed_into(const FieldElement& x, const FieldPtr& target) {
    if (!x.valid() || !target) throw std::invalid_argument("embed_into: invalid argument");
    const FieldPtr& src = x.field();
    if (same_field(src, target)) return x;
    if (src->kind() == FieldKind::ComplexApprox && target->kind() == FieldKind::ComplexApprox)
        return target->from_complex(x.complex_value());
    if (!src->finite() || !target->finite() || src->characteristic() != target->characteristic())
        throw std::invalid_argument("embed_into: incompatible fields");
    if (src->kind() == FieldKind::PrimeField) return target->from_residues({x.residues()[0]});
    // walk the construction chain of target down to src
    std::vector<FieldPtr> path;
    FieldPtr cur = target;
    while (cur && !same_field(cur, src)) {
        path.push_back(cur);
        cur = cur->built_from();
    }
    if (!cur)
        throw std::invalid_argument("embed_into: target was not built as an extension of the source field");
    FieldElement val = x;
    for (auto it = path.rbegin(); it != path.rend(); ++it) val = (*it)->lift_from_base(val);
    return val;
}

namespace {

std::mutex g_extension_cache_mutex;
std::map<std::string, FieldPtr>& extension_cache() {
    static std::map<std::string, FieldPtr> cache;
    return cache;
}

}  // namespace

FieldPtr extend_degree(const FieldPtr& base, unsigned d) {
    if (!base || !base->finite()) throw std::invalid_argument("extend_degree: finite base field required");
    if (d == 0) throw std::invalid_argument("extend_degree: degree must be positive");
    if (d == 1) return base;
    const std::uint64_t p = base->characteristic();
    const unsigned K = base->degree() * d;
    checked_pow_u64(p, K, kSizeCap);

    const std::string key = std::to_string(base->serial()) + "|" + std::to_string(d);
    {
        std::lock_guard<std::mutex> lock(g_extension_cache_mutex);
        auto it = extension_cache().find(key);
        if (it != extension_cache().end()) return it->second;
    }

    std::mt19937_64 rng(kModulusSearchSeed ^ (p * 0x9e3779b97f4a7c15ULL) ^ K);
    detail::ZpPoly mod = detail::zp_find_irreducible(K, p, rng);
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::ExtensionField;
    f->p_ = p;
    f->k_ = K;
    f->modulus_ = std::move(mod);
    f->serial_ = next_field_serial();
    f->built_from_ = base;
    FieldPtr result = f;
    if (base->kind() == FieldKind::ExtensionField) {
        // embed the base: find a root of its modulus in the new field
        detail::FqPoly g;
        g.reserve(base->modulus().size());
        for (auto c : base->modulus()) g.push_back(result->from_int(static_cast<std::int64_t>(c)));
        FieldElement rho = detail::fq_find_root(std::move(g), result, rng);
        f->base_gen_image_ = rho.residues();
    }

    std::lock_guard<std::mutex> lock(g_extension_cache_mutex);
    auto [it, inserted] = extension_cache().emplace(key, result);
    return it->second;
}

FieldPtr extend_quadratic(const FieldPtr& base, const FieldElement& nonresidue) {
    if (!base || !base->finite())
        throw std::invalid_argument("extend_quadratic: finite base field required");
    if (!nonresidue.valid() || !same_field(nonresidue.field(), base))
        throw std::invalid_argument("extend_quadratic: nonresidue must belong to the base field");
    if (is_square(nonresidue))
        throw std::invalid_argument("extend_quadratic: the supplied element is a square");
    if (base->kind() == FieldKind::ExtensionField) return extend_degree(base, 2);

    const std::uint64_t p = base->characteristic();
    const std::uint64_t c = nonresidue.residues()[0];
    const std::string key = std::to_string(base->serial()) + "|quad|" + std::to_string(c);
    {
        std::lock_guard<std::mutex> lock(g_extension_cache_mutex);
        auto it = extension_cache().find(key);
        if (it != extension_cache().end()) return it->second;
    }
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::ExtensionField;
    f->p_ = p;
    f->k_ = 2;
    f->modulus_ = {p - c, 0, 1};  // t^2 - nonresidue
    f->serial_ = next_field_serial();
    f->built_from_ = base;
    FieldPtr result = f;
    std::lock_guard<std::mutex> lock(g_extension_cache_mutex);
    auto [it, inserted] = extension_cache().emplace(key, result);
    return it->second;
}

// ---------------------------------------------------------------------------
// Element parsing

namespace {

std::complex<double> parse_complex_text(const std::string& raw) {
    std::string s;
    s.reserve(raw.size());
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    auto fail = [&]() -> std::complex<double> {
        throw std::invalid_argument("bad complex literal '" + raw + "'");
    };
    if (s == "i" || s == "+i") return {0.0, 1.0};
    if (s == "-i") return {0.0, -1.0};
    const char* begin = s.c_str();
    char* end = nullptr;
    const double first = std::strtod(begin, &end);
    if (end == begin) return fail();
    if (*end == '\0') return {first, 0.0};
    if (*end == 'i' && *(end + 1) == '\0') return {0.0, first};
    if (*end == '+' || *end == '-') {
        const double sign = *end == '-' ? -1.0 : 1.0;
        if (*(end + 1) == 'i' && *(end + 2) == '\0') return {first, sign};
        const char* begin2 = end;
        char* end2 = nullptr;
        const double second = std::strtod(begin2, &end2);
        if (end2 == begin2 || *end2 != 'i' || *(end2 + 1) != '\0') return fail();
        return {first, second};
    }
    return fail();
}

std::uint64_t parse_residue(const std::string& tok, std::uint64_t p) {
    std::string s = tok;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad residue '" + tok + "'");
    const std::uint64_t v = std::stoull(s) % p;
    return neg && v != 0 ? p - v : v;
}

}  // namespace

FieldElement Field::parse_element(const std::string& text) const {
    switch (kind_) {
        case FieldKind::ComplexApprox: return from_complex(parse_complex_text(text));
        case FieldKind::PrimeField: return from_residues({parse_residue(text, p_)});
        case FieldKind::ExtensionField: {
            std::string s = text;
            if (s.size() < 2 || s.front() != '[' || s.back() != ']')
                throw std::invalid_argument("extension element '" + text + "' must use [r0,r1,...]");
            s = s.substr(1, s.size() - 2);
            std::vector<std::uint64_t> res;
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) res.push_back(parse_residue(tok, p_));
            if (res.size() > k_)
                throw std::invalid_argument("element '" + text + "' has more residues than the extension degree");
            return from_residues(std::move(res));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace stridepow
