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

#ifndef STRIDEPOW_PHI_HPP
#define STRIDEPOW_PHI_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "stridepow/field.hpp"
#include "stridepow/poly.hpp"

namespace stridepow {

/**
 * The coefficient-power map: a tuple (a_0, ..., a_m) of length m+1 maps to
 * the stride-n coefficients of (a_0 + a_1 x + ... + a_m x^m)^n, i.e. the
 * coefficients at degrees 0, n, 2n, ..., mn.
 *
 * Over a finite field of characteristic p the instance is only accepted
 * when n = p^s * n' with n' < p (s = 0 allowed); other exponents are
 * rejected at construction.
 */

/// n = p^s * n' with p not dividing n'. For complex fields s = 0, n' = n.
struct CharDecomposition {
    unsigned s = 0;
    unsigned n_prime = 0;
};

/// std::nullopt when the finite-characteristic hypothesis n' < p fails.
std::optional<CharDecomposition> characteristic_decompose(const FieldPtr& field, unsigned n);

struct JacobianReport {
    std::vector<std::vector<FieldElement>> matrix;  // row-major, (m+1) x (m+1)
    bool invertible = false;
    /// Present only when the matrix has exactly one nonzero entry in every
    /// row and every column; maps column j (0-based) to its nonzero row.
    std::optional<std::vector<unsigned>> permutation;
    /// Paired with permutation: the nonzero entry of each column.
    std::optional<std::vector<FieldElement>> diagonal_values;
    /// Complex only: smallest elimination pivot relative to the matrix
    /// max-norm, and the declared singularity cut (1e-10). The pair makes
    /// borderline invertibility calls auditable.
    double min_pivot_ratio = 0.0;
    double singular_threshold = 0.0;
};

class StrideMap {
public:
    StrideMap(unsigned m, unsigned n, FieldPtr field);

    unsigned m() const { return m_; }
    unsigned n() const { return n_; }
    const FieldPtr& field() const { return field_; }

    /// phi(alpha): the stride-n coefficient tuple of (sum alpha_i x^i)^n.
    /// alpha may live in the instance field or an extension of it.
    std::vector<FieldElement> apply(const std::vector<FieldElement>& alpha) const;

    /// phi(gamma * alpha) == gamma^n * phi(alpha)?
    bool homogeneity_holds(const std::vector<FieldElement>& alpha, const FieldElement& gamma) const;

    JacobianReport jacobian_at(const std::vector<FieldElement>& alpha) const;

    /// The tuple (1, 0, ..., 0, 1), the polynomial x^m + 1.
    std::vector<FieldElement> special_point() const;

    /// jacobian_at the special point. For m >= 1 and characteristic 0 or
    /// p > n this is invertible exactly when gcd(m, n) = 1, in which case
    /// the matrix is a permutation times a diagonal.
    JacobianReport special_point_structure() const;

    /// Exhaustive fiber enumeration over a finite field; requires
    /// q^(m+1) <= 10^7. Output is sorted by tuple enumeration order.
    std::vector<std::vector<FieldElement>> brute_force_fiber(
        const std::vector<FieldElement>& target) const;

private:
    void check_tuple(const std::vector<FieldElement>& alpha) const;

    unsigned m_ = 0;
    unsigned n_ = 1;
    FieldPtr field_;
};

}  // namespace stridepow

#endif
