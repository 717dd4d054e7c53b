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

#ifndef STRIDEPOW_FIELD_HPP
#define STRIDEPOW_FIELD_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stridepow {

/**
 * Three field families share one element interface:
 *
 *  - ComplexApprox:  std::complex<double> with an explicit comparison
 *                    tolerance (epsilon, relative).
 *  - PrimeField:     Z/p for an odd or even prime p < 2^31.
 *  - ExtensionField: F_{p^k} = F_p[t]/(modulus), modulus monic irreducible
 *                    of degree k over F_p, coefficients stored low degree
 *                    first. Elements are length-k residue vectors.
 *
 * Finite arithmetic is exact; complex arithmetic is approximate by
 * contract. Algebraic closure is handled lazily: root extractions that
 * leave the field report "extension needed" (std::nullopt) and the caller
 * rebuilds its values in a larger field via extend_quadratic /
 * extend_degree. Fields built that way remember their base field, so
 * elements can be embedded upward along the construction chain.
 */

enum class FieldKind { ComplexApprox, PrimeField, ExtensionField };

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class FieldElement {
public:
    /// Invalid element; using it in arithmetic throws.
    FieldElement() = default;

    const FieldPtr& field() const { return field_; }
    bool valid() const { return static_cast<bool>(field_); }
    FieldKind kind() const;

    /// ComplexApprox payload.
    std::complex<double> complex_value() const;
    /// Finite payload: length-k residue vector, each in [0, p).
    const std::vector<std::uint64_t>& residues() const { return res_; }
    /// Prime-field shortcut for the single residue.
    std::uint64_t residue() const;

    bool is_zero() const;
    bool is_one() const;

    std::string to_text() const;

private:
    friend class Field;
    FieldElement(FieldPtr f, std::complex<double> z) : field_(std::move(f)), z_(z) {}
    FieldElement(FieldPtr f, std::vector<std::uint64_t> r)
        : field_(std::move(f)), res_(std::move(r)) {}

    FieldPtr field_;
    std::complex<double> z_{0.0, 0.0};
    std::vector<std::uint64_t> res_;
};

class Field : public std::enable_shared_from_this<Field> {
public:
    static FieldPtr complex_approx(double epsilon = 1e-9);
    static FieldPtr prime(std::uint64_t p);
    static FieldPtr extension(std::uint64_t p, std::vector<std::uint64_t> modulus);

    /// Parses the canonical text form: "C", "F:p", or
    /// "F:p^k:c0,c1,...,ck" (modulus low degree first).
    static FieldPtr parse(const std::string& text);
    std::string to_text() const;

    FieldKind kind() const { return kind_; }
    bool finite() const { return kind_ != FieldKind::ComplexApprox; }
    /// 0 for ComplexApprox, p otherwise.
    std::uint64_t characteristic() const { return p_; }
    /// Extension degree k over F_p (1 for the prime field itself).
    unsigned degree() const { return k_; }
    /// Field size q = p^k. Throws for ComplexApprox.
    std::uint64_t size() const;
    double epsilon() const { return eps_; }
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    FieldElement zero() const;
    FieldElement one() const;
    /// Reduces v into the field (finite: v mod p as a constant; complex: v + 0i).
    FieldElement from_int(std::int64_t v) const;
    FieldElement from_complex(std::complex<double> z) const;
    FieldElement from_residues(std::vector<std::uint64_t> residues) const;

    /// Canonical enumeration of a finite field: index in [0, q), the
    /// residue vector being the base-p digits of the index.
    FieldElement element_at(std::uint64_t index) const;
    std::uint64_t index_of(const FieldElement& x) const;

    /// Parses one element: complex "re+imi" / "re" / "imi", prime-field
    /// decimal residue, extension "[r0,r1,...]".
    FieldElement parse_element(const std::string& text) const;

    /// The field this one was built from by extend_quadratic /
    /// extend_degree, or null for directly constructed fields.
    const FieldPtr& built_from() const { return built_from_; }

    /// Process-unique construction id. Extension memoization is keyed by
    /// the base instance so that embedding chains stay lineage-consistent
    /// even when two towers happen to share a modulus.
    std::uint64_t serial() const { return serial_; }

private:
    Field() = default;
    friend FieldPtr extend_degree(const FieldPtr&, unsigned);
    friend FieldPtr extend_quadratic(const FieldPtr&, const FieldElement&);
    friend FieldElement embed_into(const FieldElement&, const FieldPtr&);

    FieldElement lift_from_base(const FieldElement& x) const;

    FieldKind kind_ = FieldKind::ComplexApprox;
    std::uint64_t p_ = 0;
    unsigned k_ = 1;
    std::vector<std::uint64_t> modulus_;  // monic, degree k, over F_p
    double eps_ = 1e-9;
    std::uint64_t serial_ = 0;
    FieldPtr built_from_;
    // image in this field of built_from_'s generator t (extension bases only)
    std::vector<std::uint64_t> base_gen_image_;
};

bool same_field(const Field& a, const Field& b);
bool same_field(const FieldPtr& a, const FieldPtr& b);

FieldElement operator+(const FieldElement& x, const FieldElement& y);
FieldElement operator-(const FieldElement& x, const FieldElement& y);
FieldElement operator*(const FieldElement& x, const FieldElement& y);
FieldElement operator/(const FieldElement& x, const FieldElement& y);
FieldElement operator-(const FieldElement& x);
/// Exact for finite fields; within the field epsilon (relative) for complex.
bool operator==(const FieldElement& x, const FieldElement& y);
bool operator!=(const FieldElement& x, const FieldElement& y);

FieldElement inv(const FieldElement& x);
FieldElement pow(const FieldElement& x, std::uint64_t e);

/// |z| for complex; 0 or 1 for finite elements. Used for tolerance scaling.
double magnitude(const FieldElement& x);
/// Strict deterministic order: enumeration index (finite), (re, im) lex (complex).
bool canonical_less(const FieldElement& a, const FieldElement& b);

/// Euler-criterion residue test; true for 0. Finite fields of odd
/// characteristic only.
bool is_square(const FieldElement& x);

/// Square root, deterministic representative. Finite fields: Euler test
/// then Tonelli-Shanks in F_q with multiplicative order q-1; std::nullopt
/// means the root lives in a quadratic extension. Throws for finite
/// characteristic 2.
std::optional<FieldElement> sqrt(const FieldElement& x);

/// r-th root. Complex: principal root. Finite: direct exponentiation when
/// gcd(r, q-1) = 1, otherwise a prime-by-prime root extraction in the
/// multiplicative group; std::nullopt when no root exists in the field.
std::optional<FieldElement> nth_root(const FieldElement& x, std::uint64_t r);

/// The unique b with b^(p^s) = x, i.e. the s-fold inverse of the p-power
/// map. Finite fields only.
FieldElement frobenius_root(const FieldElement& x, unsigned s);

/// Degree-2 extension of a finite field. For a prime base the modulus is
/// literally t^2 - nonresidue; for an extension base a fresh irreducible
/// modulus over F_p is found and the base is embedded into the new field.
/// Throws if nonresidue is actually a square.
FieldPtr extend_quadratic(const FieldPtr& base, const FieldElement& nonresidue);

/// Degree-d extension of a finite field, with the base embedded. d = 1
/// returns the base itself.
FieldPtr extend_degree(const FieldPtr& base, unsigned d);

/// Embeds x into target, which must be reachable from x's field along
/// built_from() links (or be the prime field / an equal field).
FieldElement embed_into(const FieldElement& x, const FieldPtr& target);

}  // namespace stridepow

#endif
