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

#ifndef STRIDEPOW_POLY_HPP
#define STRIDEPOW_POLY_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stridepow/field.hpp"

namespace stridepow {

/**
 * Dense univariate polynomial over one field, coefficients stored low
 * degree first in canonical form: the vector is empty (zero polynomial)
 * or its last entry is nonzero. Coefficient queries beyond the stored
 * degree return the field zero.
 */
class DensePoly {
public:
    DensePoly() = default;
    explicit DensePoly(FieldPtr field) : field_(std::move(field)) {}
    DensePoly(FieldPtr field, std::vector<FieldElement> coeffs);

    const FieldPtr& field() const { return field_; }
    bool valid() const { return static_cast<bool>(field_); }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<FieldElement>& coeffs() const { return coeffs_; }
    FieldElement coeff(std::size_t i) const;
    FieldElement leading() const;

    FieldElement eval(const FieldElement& x) const;

    /// Comma-separated coefficients, lowest degree first ("0" for zero).
    std::string to_text() const;

private:
    FieldPtr field_;
    std::vector<FieldElement> coeffs_;
};

DensePoly operator+(const DensePoly& f, const DensePoly& g);
DensePoly operator-(const DensePoly& f, const DensePoly& g);
DensePoly operator*(const DensePoly& f, const DensePoly& g);
bool operator==(const DensePoly& f, const DensePoly& g);

DensePoly scale(const DensePoly& f, const FieldElement& c);
/// f * x^k
DensePoly shift_up(const DensePoly& f, unsigned k);
DensePoly derivative(const DensePoly& f);
DensePoly pow(const DensePoly& f, unsigned n);

/// Quotient and remainder; divisor must be nonzero.
std::pair<DensePoly, DensePoly> divmod(const DensePoly& f, const DensePoly& g);
/// Monic gcd (finite fields).
DensePoly gcd(DensePoly f, DensePoly g);

/// Coefficients of f at degrees 0, n, 2n, ..., mn (absent ones read as zero).
std::vector<FieldElement> stride_coeffs(const DensePoly& f, unsigned n, unsigned m);

/// n * f^(n-1) * x^(j-1) for f with the given coefficients: the exact
/// symbolic partial derivative of f^n with respect to coefficient j-1.
DensePoly formal_partial_of_power(const std::vector<FieldElement>& alpha, unsigned n, unsigned j);

/// Rebuilds f over an extension of its field.
DensePoly embed_poly(const DensePoly& f, const FieldPtr& target);

struct RootEntry {
    FieldElement value;
    unsigned multiplicity = 0;
};

struct RootMultiset {
    std::vector<RootEntry> roots;  // sorted by canonical order
    FieldPtr extension_used;       // the field the roots live in
};

struct RootFindingError : std::runtime_error {
    explicit RootFindingError(const std::string& what, std::vector<std::complex<double>> best = {})
        : std::runtime_error(what), best_iterate(std::move(best)) {}
    std::vector<std::complex<double>> best_iterate;
};

/// Aberth-Ehrlich simultaneous iteration. Roots closer than the cluster
/// tolerance (1e-7, scaled by the largest root magnitude) are merged into
/// one entry with summed multiplicity. Throws RootFindingError with the
/// best iterate attached on non-convergence.
RootMultiset roots_complex(const DensePoly& f, int max_iters = 200);

/// Squarefree decomposition, distinct-degree factorization, then seeded
/// equal-degree splitting. All roots are returned in one common extension
/// F_{q^lcm} recorded in extension_used.
RootMultiset roots_finite(const DensePoly& f, std::mt19937_64& rng);

}  // namespace stridepow

#endif
