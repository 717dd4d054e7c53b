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

#include "stridepow/phi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stridepow {

std::optional<CharDecomposition> characteristic_decompose(const FieldPtr& field, unsigned n) {
    if (!field) throw std::invalid_argument("characteristic_decompose: null field");
    if (n == 0) throw std::invalid_argument("the exponent must be positive");
    if (!field->finite()) return CharDecomposition{0, n};
    const std::uint64_t p = field->characteristic();
    unsigned s = 0;
    unsigned np = n;
    while (np % p == 0) {
        np /= static_cast<unsigned>(p);
        ++s;
    }
    if (np >= p) return std::nullopt;
    return CharDecomposition{s, np};
}

StrideMap::StrideMap(unsigned m, unsigned n, FieldPtr field)
    : m_(m), n_(n), field_(std::move(field)) {
    if (!field_) throw std::invalid_argument("StrideMap: null field");
    if (n_ == 0) throw std::invalid_argument("StrideMap: the power n must be positive");
    if (!characteristic_decompose(field_, n_)) {
        throw std::invalid_argument(
            "StrideMap: over characteristic p the power must factor as n = p^s * n' with n' < p; "
            "n = " + std::to_string(n_) + " violates the hypothesis over " + field_->to_text());
    }
}

void StrideMap::check_tuple(const std::vector<FieldElement>& alpha) const {
    if (alpha.size() != static_cast<std::size_t>(m_) + 1)
        throw std::invalid_argument("coefficient tuple must have length m+1");
    const FieldPtr& Fa = alpha.front().field();
    if (!Fa) throw std::invalid_argument("invalid element in coefficient tuple");
    for (const auto& x : alpha)
        if (!x.valid() || !same_field(x.field(), Fa))
            throw std::invalid_argument("coefficient tuple mixes fields");
    if (Fa->kind() == FieldKind::ComplexApprox) {
        if (field_->finite()) throw std::invalid_argument("complex tuple for a finite instance");
        return;
    }
    if (!field_->finite() || Fa->characteristic() != field_->characteristic())
        throw std::invalid_argument("coefficient tuple field is incompatible with the instance");
}

std::vector<FieldElement> StrideMap::apply(const std::vector<FieldElement>& alpha) const {
    check_tuple(alpha);
    const FieldPtr& Fa = alpha.front().field();
    DensePoly f(Fa, alpha);
    return stride_coeffs(pow(f, n_), n_, m_);
}

bool StrideMap::homogeneity_holds(const std::vector<FieldElement>& alpha,
                                  const FieldElement& gamma) const {
    check_tuple(alpha);
    std::vector<FieldElement> scaled;
    scaled.reserve(alpha.size());
    for (const auto& x : alpha) scaled.push_back(gamma * x);
    const auto lhs = apply(scaled);
    auto rhs = apply(alpha);
    const FieldElement gn = pow(gamma, n_);
    for (auto& x : rhs) x = gn * x;
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (lhs[i] != rhs[i]) return false;
    return true;
}

namespace {

struct EliminationResult {
    bool invertible = false;
    double min_pivot_ratio = 0.0;
    double threshold = 0.0;
};

EliminationResult eliminate(std::vector<std::vector<FieldElement>> a, const FieldPtr& F) {
    const std::size_t n = a.size();
    EliminationResult res;
    if (F->kind() != FieldKind::ComplexApprox) {
        // exact Gaussian elimination
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && a[piv][col].is_zero()) ++piv;
            if (piv == n) return res;  // singular
            std::swap(a[piv], a[col]);
            const FieldElement ip = inv(a[col][col]);
            for (std::size_t r = col + 1; r < n; ++r) {
                if (a[r][col].is_zero()) continue;
                const FieldElement factor = a[r][col] * ip;
                for (std::size_t c = col; c < n; ++c) a[r][c] = a[r][c] - factor * a[col][c];
            }
        }
        res.invertible = true;
        return res;
    }
    double norm = 0.0;
    for (const auto& row : a)
        for (const auto& x : row) norm = std::max(norm, std::abs(x.complex_value()));
    res.threshold = 1e-10 * norm;
    if (norm == 0.0) return res;
    double min_ratio = 1.0;
    bool ok = true;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a[col][col].complex_value());
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r][col].complex_value());
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        min_ratio = std::min(min_ratio, best / norm);
        if (best <= res.threshold) {
            ok = false;
            break;
        }
        std::swap(a[piv], a[col]);
        const FieldElement ip = inv(a[col][col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const FieldElement factor = a[r][col] * ip;
            for (std::size_t c = col; c < n; ++c) a[r][c] = a[r][c] - factor * a[col][c];
        }
    }
    res.invertible = ok;
    res.min_pivot_ratio = min_ratio;
    return res;
}

}  // namespace

JacobianReport StrideMap::jacobian_at(const std::vector<FieldElement>& alpha) const {
    check_tuple(alpha);
    const FieldPtr& Fa = alpha.front().field();
    DensePoly f(Fa, alpha);
    // every partial is n * f^(n-1) * x^(j-1); one power serves all entries
    DensePoly w = scale(pow(f, n_ - 1), Fa->from_int(static_cast<std::int64_t>(n_)));

    const std::size_t dim = static_cast<std::size_t>(m_) + 1;
    JacobianReport rep;
    rep.matrix.assign(dim, std::vector<FieldElement>(dim, Fa->zero()));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const std::size_t target = i * n_;
            if (target >= j) rep.matrix[i][j] = w.coeff(target - j);
        }

    EliminationResult el = eliminate(rep.matrix, Fa);
    rep.invertible = el.invertible;
    rep.min_pivot_ratio = el.min_pivot_ratio;
    rep.singular_threshold = el.threshold;

    // strict structure: one nonzero per column and per row
    const double zero_cut = el.threshold;
    auto entry_zero = [&](const FieldElement& x) {
        if (Fa->kind() == FieldKind::ComplexApprox)
            return std::abs(x.complex_value()) <= zero_cut;
        return x.is_zero();
    };
    std::vector<unsigned> sigma(dim, 0);
    std::vector<unsigned> row_counts(dim, 0);
    std::vector<FieldElement> diag(dim, Fa->zero());
    bool strict = true;
    for (std::size_t j = 0; j < dim && strict; ++j) {
        unsigned count = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (entry_zero(rep.matrix[i][j])) continue;
            ++count;
            sigma[j] = static_cast<unsigned>(i);
            diag[j] = rep.matrix[i][j];
            ++row_counts[i];
        }
        if (count != 1) strict = false;
    }
    for (std::size_t i = 0; i < dim && strict; ++i)
        if (row_counts[i] != 1) strict = false;
    if (strict) {
        rep.permutation = std::move(sigma);
        rep.diagonal_values = std::move(diag);
    }
    return rep;
}

std::vector<FieldElement> StrideMap::special_point() const {
    std::vector<FieldElement> alpha(m_ + 1, field_->zero());
    alpha.front() = field_->one();
    alpha.back() = field_->one();
    return alpha;
}

JacobianReport StrideMap::special_point_structure() const { return jacobian_at(special_point()); }

std::vector<std::vector<FieldElement>> StrideMap::brute_force_fiber(
    const std::vector<FieldElement>& target) const {
    if (!field_->finite())
        throw std::invalid_argument("brute_force_fiber requires a finite field");
    if (target.size() != static_cast<std::size_t>(m_) + 1)
        throw std::invalid_argument("target tuple must have length m+1");
    const std::uint64_t q = field_->size();
    double total = 1.0;
    for (unsigned i = 0; i <= m_; ++i) total *= static_cast<double>(q);
    if (total > 1e7)
        throw std::invalid_argument("brute_force_fiber: instance too large (q^(m+1) > 10^7)");

    std::vector<std::vector<FieldElement>> hits;
    std::vector<std::uint64_t> digits(m_ + 1, 0);
    std::vector<FieldElement> alpha(m_ + 1, field_->zero());
    const std::uint64_t count = static_cast<std::uint64_t>(total);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t v = idx;
        for (unsigned j = 0; j <= m_; ++j) {
            const std::uint64_t digit = v % q;
            v /= q;
            if (digit != digits[j] || idx == 0) {
                digits[j] = digit;
                alpha[j] = field_->element_at(digit);
            }
        }
        const auto image = apply(alpha);
        bool match = true;
        for (std::size_t j = 0; j < image.size() && match; ++j) match = image[j] == target[j];
        if (match) hits.push_back(alpha);
    }
    return hits;
}

}  // namespace stridepow
