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

#include "stridepow/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fqpoly.hpp"

namespace stridepow {

namespace {

void require_same_poly(const DensePoly& f, const DensePoly& g) {
    if (!f.valid() || !g.valid()) throw std::invalid_argument("operation on an invalid polynomial");
    if (!same_field(f.field(), g.field()))
        throw std::invalid_argument("field descriptor mismatch between polynomials");
}

DensePoly wrap(const FieldPtr& F, detail::FqPoly v) { return DensePoly(F, std::move(v)); }

}  // namespace

DensePoly::DensePoly(FieldPtr field, std::vector<FieldElement> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (!field_) throw std::invalid_argument("polynomial needs a field");
    for (const auto& c : coeffs_) {
        if (!c.valid() || !same_field(c.field(), field_))
            throw std::invalid_argument("polynomial coefficient from a different field");
    }
    detail::fq_trim(coeffs_);
}

FieldElement DensePoly::coeff(std::size_t i) const {
    if (!valid()) throw std::invalid_argument("coeff() on an invalid polynomial");
    if (i < coeffs_.size()) return coeffs_[i];
    return field_->zero();
}

FieldElement DensePoly::leading() const {
    if (is_zero()) return field_->zero();
    return coeffs_.back();
}

FieldElement DensePoly::eval(const FieldElement& x) const {
    FieldElement acc = field_->zero();
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

std::string DensePoly::to_text() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ',';
        s += coeffs_[i].to_text();
    }
    return s;
}

DensePoly operator+(const DensePoly& f, const DensePoly& g) {
    require_same_poly(f, g);
    return wrap(f.field(), detail::fq_add(f.coeffs(), g.coeffs()));
}

DensePoly operator-(const DensePoly& f, const DensePoly& g) {
    require_same_poly(f, g);
    return wrap(f.field(), detail::fq_sub(f.coeffs(), g.coeffs()));
}

DensePoly operator*(const DensePoly& f, const DensePoly& g) {
    require_same_poly(f, g);
    return wrap(f.field(), detail::fq_mul(f.coeffs(), g.coeffs(), f.field()));
}

bool operator==(const DensePoly& f, const DensePoly& g) {
    require_same_poly(f, g);
    if (f.degree() != g.degree()) return false;
    for (int i = 0; i <= f.degree(); ++i)
        if (f.coeffs()[i] != g.coeffs()[i]) return false;
    return true;
}

DensePoly scale(const DensePoly& f, const FieldElement& c) {
    return wrap(f.field(), detail::fq_scale(f.coeffs(), c));
}

DensePoly shift_up(const DensePoly& f, unsigned k) {
    if (f.is_zero() || k == 0) return f;
    std::vector<FieldElement> c(f.coeffs().size() + k, f.field()->zero());
    std::copy(f.coeffs().begin(), f.coeffs().end(), c.begin() + k);
    return DensePoly(f.field(), std::move(c));
}

DensePoly derivative(const DensePoly& f) {
    if (f.degree() < 1) return DensePoly(f.field());
    std::vector<FieldElement> c;
    c.reserve(f.coeffs().size() - 1);
    for (std::size_t i = 1; i < f.coeffs().size(); ++i)
        c.push_back(f.coeffs()[i] * f.field()->from_int(static_cast<std::int64_t>(i)));
    return DensePoly(f.field(), std::move(c));
}

DensePoly pow(const DensePoly& f, unsigned n) {
    if (!f.valid()) throw std::invalid_argument("pow() on an invalid polynomial");
    DensePoly result(f.field(), {f.field()->one()});
    DensePoly base = f;
    while (n) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

std::pair<DensePoly, DensePoly> divmod(const DensePoly& f, const DensePoly& g) {
    require_same_poly(f, g);
    auto [q, r] = detail::fq_divmod(f.coeffs(), g.coeffs());
    return {wrap(f.field(), std::move(q)), wrap(f.field(), std::move(r))};
}

DensePoly gcd(DensePoly f, DensePoly g) {
    require_same_poly(f, g);
    return wrap(f.field(), detail::fq_gcd(f.coeffs(), g.coeffs()));
}

std::vector<FieldElement> stride_coeffs(const DensePoly& f, unsigned n, unsigned m) {
    if (!f.valid()) throw std::invalid_argument("stride_coeffs() on an invalid polynomial");
    if (n == 0) throw std::invalid_argument("stride must be positive");
    std::vector<FieldElement> out;
    out.reserve(m + 1);
    for (unsigned j = 0; j <= m; ++j) out.push_back(f.coeff(std::size_t{j} * n));
    return out;
}

DensePoly formal_partial_of_power(const std::vector<FieldElement>& alpha, unsigned n, unsigned j) {
    if (alpha.empty()) throw std::invalid_argument("empty coefficient tuple");
    if (n == 0) throw std::invalid_argument("power must be positive");
    if (j < 1 || j > alpha.size()) throw std::invalid_argument("coefficient index out of range");
    const FieldPtr& F = alpha.front().field();
    DensePoly f(F, alpha);
    DensePoly part = pow(f, n - 1);
    return shift_up(scale(part, F->from_int(static_cast<std::int64_t>(n))), j - 1);
}

DensePoly embed_poly(const DensePoly& f, const FieldPtr& target) {
    std::vector<FieldElement> c;
    c.reserve(f.coeffs().size());
    for (const auto& x : f.coeffs()) c.push_back(embed_into(x, target));
    return DensePoly(target, std::move(c));
}

// ---------------------------------------------------------------------------
// Complex roots: Aberth-Ehrlich simultaneous iteration

namespace {

std::complex<double> horner(const std::vector<std::complex<double>>& c, std::complex<double> x) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

}  // namespace

RootMultiset roots_complex(const DensePoly& f, int max_iters) {
    if (!f.valid() || f.field()->kind() != FieldKind::ComplexApprox)
        throw std::invalid_argument("roots_complex needs a ComplexApprox polynomial");
    if (f.degree() < 1) throw std::invalid_argument("roots_complex needs degree >= 1");
    const FieldPtr F = f.field();
    const double eps = F->epsilon();
    const int total_degree = f.degree();

    std::vector<std::complex<double>> c;
    c.reserve(f.coeffs().size());
    double max_coeff = 0.0;
    for (const auto& x : f.coeffs()) {
        c.push_back(x.complex_value());
        max_coeff = std::max(max_coeff, std::abs(c.back()));
    }

    // peel off roots at the origin
    unsigned zero_mult = 0;
    while (c.size() > 1 && std::abs(c.front()) <= eps * (1.0 + max_coeff)) {
        c.erase(c.begin());
        ++zero_mult;
    }
    const int d = static_cast<int>(c.size()) - 1;

    std::vector<std::complex<double>> alpha;
    if (d >= 1) {
        // normalize to a monic working copy
        std::vector<std::complex<double>> w(c);
        for (auto& x : w) x /= w.back();
        std::vector<std::complex<double>> wd(d);
        for (int i = 1; i <= d; ++i) wd[i - 1] = w[i] * static_cast<double>(i);

        double radius = 0.0;
        for (int i = 0; i < d; ++i) radius = std::max(radius, std::abs(w[i]));
        radius = 1.0 + radius;
        alpha.resize(d);
        for (int i = 0; i < d; ++i) {
            const double theta = 2.0 * M_PI * (i + 0.35) / d + 0.4;
            alpha[i] = std::polar(radius * (0.6 + 0.4 * (i + 1.0) / d), theta);
        }

        const double stop = 1e-14 * (1.0 + max_coeff);
        bool converged = false;
        for (int iter = 0; iter < max_iters && !converged; ++iter) {
            converged = true;
            for (int i = 0; i < d; ++i) {
                const std::complex<double> p = horner(w, alpha[i]);
                if (std::abs(p) <= stop) continue;
                std::complex<double> pd = horner(wd, alpha[i]);
                if (std::abs(pd) < 1e-300) pd = 1e-300;
                const std::complex<double> newton = p / pd;
                std::complex<double> s = 0.0;
                for (int j = 0; j < d; ++j) {
                    if (j == i) continue;
                    std::complex<double> diff = alpha[i] - alpha[j];
                    if (std::abs(diff) < 1e-300) diff = 1e-300;
                    s += 1.0 / diff;
                }
                const std::complex<double> denom = 1.0 - newton * s;
                const std::complex<double> step =
                    std::abs(denom) < 1e-300 ? newton : newton / denom;
                alpha[i] -= step;
                if (std::abs(step) > 1e-13 * (1.0 + std::abs(alpha[i]))) converged = false;
            }
        }

        // contract: residual of the original polynomial at every root
        const double bound = eps * (1.0 + max_coeff) * total_degree;
        for (int i = 0; i < d; ++i) {
            if (std::abs(horner(c, alpha[i])) > bound)
                throw RootFindingError("root iteration did not reach the residual bound", alpha);
        }
    }

    // cluster merge
    double max_mag = 1.0;
    for (const auto& a : alpha) max_mag = std::max(max_mag, std::abs(a));
    const double cluster_tol = 1e-7 * max_mag;
    std::vector<std::complex<double>> centers;
    std::vector<unsigned> counts;
    std::sort(alpha.begin(), alpha.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        bool placed = false;
        for (std::size_t g = 0; g < centers.size(); ++g) {
            if (std::abs(alpha[i] - centers[g]) <= cluster_tol) {
                centers[g] = (centers[g] * static_cast<double>(counts[g]) + alpha[i]) /
                             static_cast<double>(counts[g] + 1);
                ++counts[g];
                placed = true;
                break;
            }
        }
        if (!placed) {
            centers.push_back(alpha[i]);
            counts.push_back(1);
        }
    }

    RootMultiset out;
    out.extension_used = F;
    if (zero_mult > 0) out.roots.push_back({F->zero(), zero_mult});
    for (std::size_t g = 0; g < centers.size(); ++g)
        out.roots.push_back({F->from_complex(centers[g]), counts[g]});
    std::sort(out.roots.begin(), out.roots.end(),
              [](const RootEntry& a, const RootEntry& b) { return canonical_less(a.value, b.value); });

    unsigned sum = 0;
    for (const auto& r : out.roots) sum += r.multiplicity;
    if (sum != static_cast<unsigned>(total_degree))
        throw std::logic_error("roots_complex: multiplicities do not sum to the degree");
    return out;
}

// ---------------------------------------------------------------------------
// Finite-field roots: squarefree -> distinct degree -> equal degree, then
// everything is read back in one common extension.

namespace {

using detail::FqPoly;

DensePoly pth_root_poly(const DensePoly& f) {
    const FieldPtr& F = f.field();
    const std::uint64_t p = F->characteristic();
    std::vector<FieldElement> out;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        const auto& ci = f.coeffs()[i];
        if (i % p == 0) {
            out.push_back(frobenius_root(ci, 1));
        } else if (!ci.is_zero()) {
            throw std::logic_error("pth_root_poly: polynomial is not a p-th power");
        }
    }
    return DensePoly(F, std::move(out));
}

void squarefree_decompose(const DensePoly& f, unsigned mult,
                          std::vector<std::pair<DensePoly, unsigned>>& out) {
    if (f.degree() < 1) return;
    DensePoly fp = derivative(f);
    if (fp.is_zero()) {
        squarefree_decompose(pth_root_poly(f), mult * static_cast<unsigned>(f.field()->characteristic()),
                             out);
        return;
    }
    DensePoly c = gcd(f, fp);
    DensePoly w = divmod(f, c).first;
    unsigned i = 1;
    while (w.degree() > 0) {
        DensePoly y = gcd(w, c);
        DensePoly z = divmod(w, y).first;
        if (z.degree() > 0) out.emplace_back(z, mult * i);
        w = y;
        c = divmod(c, y).first;
        ++i;
    }
    if (c.degree() > 0)
        squarefree_decompose(pth_root_poly(c), mult * static_cast<unsigned>(f.field()->characteristic()),
                             out);
}

std::vector<std::pair<DensePoly, unsigned>> distinct_degree(const DensePoly& gin) {
    const FieldPtr& F = gin.field();
    std::vector<std::pair<DensePoly, unsigned>> blocks;
    FqPoly g = gin.coeffs();
    FqPoly h = detail::fq_x(F);
    unsigned d = 0;
    while (detail::fq_deg(g) >= 2 * static_cast<int>(d + 1)) {
        ++d;
        h = detail::fq_powmod(std::move(h), F->size(), g, F);
        FqPoly hx = detail::fq_sub(h, detail::fq_x(F));
        FqPoly gd = detail::fq_gcd(hx, g);
        if (detail::fq_deg(gd) > 0) {
            blocks.emplace_back(DensePoly(F, gd), d);
            g = detail::fq_divmod(g, gd).first;
            h = detail::fq_rem(std::move(h), g);
        }
    }
    if (detail::fq_deg(g) > 0) blocks.emplace_back(DensePoly(F, g), static_cast<unsigned>(detail::fq_deg(g)));
    return blocks;
}

FqPoly random_poly_below(int deg_bound, const FieldPtr& F, std::mt19937_64& rng) {
    FqPoly v(static_cast<std::size_t>(deg_bound), F->zero());
    for (auto& c : v) c = F->element_at(rng() % F->size());
    detail::fq_trim(v);
    return v;
}

void equal_degree_split(const DensePoly& block, unsigned d, std::mt19937_64& rng,
                        std::vector<DensePoly>& out) {
    const FieldPtr& F = block.field();
    if (block.degree() == static_cast<int>(d)) {
        out.push_back(block);
        return;
    }
    const FqPoly& B = block.coeffs();
    const std::uint64_t q = F->size();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        FqPoly xi = random_poly_below(block.degree(), F, rng);
        if (detail::fq_deg(xi) < 1) continue;
        FqPoly w;
        if (F->characteristic() == 2) {
            // absolute trace down to F_2: q^d = 2^(e*d)
            std::uint64_t bits = q;
            unsigned e = 0;
            while (bits > 1) {
                bits >>= 1;
                ++e;
            }
            FqPoly t2 = detail::fq_rem(xi, B);
            FqPoly sum = t2;
            for (unsigned j = 1; j < e * d; ++j) {
                t2 = detail::fq_mulmod(t2, t2, B, F);
                sum = detail::fq_add(sum, t2);
            }
            w = std::move(sum);
        } else {
            // trace of xi down to the base field keeps every exponent <= q
            FqPoly tr = detail::fq_rem(xi, B);
            FqPoly acc = tr;
            for (unsigned i = 1; i < d; ++i) {
                tr = detail::fq_powmod(std::move(tr), q, B, F);
                acc = detail::fq_add(acc, tr);
            }
            w = detail::fq_powmod(std::move(acc), (q - 1) / 2, B, F);
            w = detail::fq_sub(w, FqPoly{F->one()});
        }
        FqPoly g = detail::fq_gcd(w, B);
        if (detail::fq_deg(g) > 0 && detail::fq_deg(g) < block.degree()) {
            DensePoly left(F, g);
            DensePoly right = divmod(block, left).first;
            equal_degree_split(left, d, rng, out);
            equal_degree_split(right, d, rng, out);
            return;
        }
    }
    throw std::runtime_error("equal-degree splitting stalled after 1000 attempts");
}

}  // namespace

RootMultiset roots_finite(const DensePoly& f, std::mt19937_64& rng) {
    if (!f.valid() || !f.field()->finite())
        throw std::invalid_argument("roots_finite needs a finite-field polynomial");
    if (f.degree() < 1) throw std::invalid_argument("roots_finite needs degree >= 1");
    const FieldPtr F = f.field();
    const int total_degree = f.degree();

    DensePoly g = scale(f, inv(f.leading()));
    unsigned zero_mult = 0;
    while (g.degree() >= 1 && g.coeff(0).is_zero()) {
        std::vector<FieldElement> c(g.coeffs().begin() + 1, g.coeffs().end());
        g = DensePoly(F, std::move(c));
        ++zero_mult;
    }

    // (irreducible factor, degree, multiplicity)
    std::vector<std::tuple<DensePoly, unsigned, unsigned>> factors;
    if (g.degree() >= 1) {
        std::vector<std::pair<DensePoly, unsigned>> sff;
        squarefree_decompose(g, 1, sff);
        for (const auto& [sf, mult] : sff) {
            for (const auto& [block, d] : distinct_degree(sf)) {
                std::vector<DensePoly> irr;
                equal_degree_split(block, d, rng, irr);
                for (auto& h : irr) factors.emplace_back(std::move(h), d, mult);
            }
        }
    }

    std::uint64_t D = 1;
    for (const auto& [h, d, mult] : factors) D = std::lcm(D, static_cast<std::uint64_t>(d));
    const FieldPtr L = D == 1 ? F : extend_degree(F, static_cast<unsigned>(D));

    RootMultiset out;
    out.extension_used = L;
    if (zero_mult > 0) out.roots.push_back({L->zero(), zero_mult});
    const std::uint64_t q = F->size();
    for (const auto& [h, d, mult] : factors) {
        if (d == 1) {
            out.roots.push_back({embed_into(-h.coeff(0), L), mult});  // h is monic x + c
            continue;
        }
        DensePoly hL = embed_poly(h, L);
        FieldElement rho = detail::fq_find_root(hL.coeffs(), L, rng);
        FieldElement conj = rho;
        for (unsigned i = 0; i < d; ++i) {
            out.roots.push_back({conj, mult});
            if (i + 1 < d) conj = pow(conj, q);
        }
    }

    std::sort(out.roots.begin(), out.roots.end(),
              [](const RootEntry& a, const RootEntry& b) { return canonical_less(a.value, b.value); });
    unsigned sum = 0;
    for (const auto& r : out.roots) sum += r.multiplicity;
    if (sum != static_cast<unsigned>(total_degree))
        throw std::logic_error("roots_finite: multiplicities do not sum to the degree");
    return out;
}

}  // namespace stridepow
