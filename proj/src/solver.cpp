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

#include "stridepow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace stridepow {

namespace {

constexpr std::uint64_t kMix = 0x9e3779b97f4a7c15ULL;

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

TargetVector::TargetVector(unsigned n_, std::vector<FieldElement> values_)
    : n(n_), values(std::move(values_)) {
    if (n == 0) throw std::invalid_argument("TargetVector: n must be positive");
    if (values.empty()) throw std::invalid_argument("TargetVector: needs at least one target");
    field = values.front().field();
    if (!field) throw std::invalid_argument("TargetVector: invalid element");
    for (const auto& v : values)
        if (!v.valid() || !same_field(v.field(), field))
            throw std::invalid_argument("TargetVector: elements mix fields");
}

double verify(const std::vector<FieldElement>& alpha, const TargetVector& target) {
    if (alpha.size() != target.values.size())
        throw std::invalid_argument("verify: tuple lengths do not match");
    const FieldPtr& Fa = alpha.front().field();
    for (const auto& x : alpha)
        if (!x.valid() || !same_field(x.field(), Fa))
            throw std::invalid_argument("verify: alpha mixes fields");
    DensePoly f(Fa, alpha);
    const auto image = stride_coeffs(pow(f, target.n), target.n, target.m());
    if (Fa->kind() == FieldKind::ComplexApprox) {
        double worst = 0.0;
        for (std::size_t j = 0; j < image.size(); ++j) {
            const auto d = image[j].complex_value() - target.values[j].complex_value();
            worst = std::max(worst, std::abs(d));
        }
        return worst;
    }
    unsigned mismatches = 0;
    for (std::size_t j = 0; j < image.size(); ++j) {
        if (image[j] != embed_into(target.values[j], Fa)) ++mismatches;
    }
    return static_cast<double>(mismatches);
}

// ---------------------------------------------------------------------------
// The n = 2 construction, shared by solve_n2 and the sign-sweep enumeration.
//
// After trimming to the last nonzero target a_m' and normalizing it to 1,
// the roots beta_i of a~_0 + a~_1 x + ... + x^m' are extracted, square
// roots of a_m', the beta_i, and -1 are taken (one quadratic field
// extension covers all of them at once if any is missing), h_+ =
// prod(x + sqrt(beta_i)) = sum c_i x^i is formed, the parity twist
// c'_i = c_i or sqrt(-1) c_i (by m' = i mod 2) symmetrizes the even
// coefficients, and f = sqrt(a_m') * sum c'_i x^i.

namespace {

struct N2Core {
    bool all_zero = false;
    unsigned m_prime = 0;
    FieldPtr arena;
    FieldElement sqrt_leading;
    FieldElement sqrt_minus_one;          // valid when m_prime >= 1
    std::vector<FieldElement> beta_sqrt;  // with multiplicity, canonical signs
    std::vector<FieldElement> g;          // a~_0 + a~_1 x^2 + ... + x^(2m')
    std::vector<std::string> trace;
};

FieldElement sqrt_or_throw(const FieldElement& x) {
    auto r = sqrt(x);
    if (!r) throw std::logic_error("square root unexpectedly missing after extension");
    return *r;
}

N2Core build_n2_core(const TargetVector& target, std::uint64_t seed) {
    if (target.n != 2) throw std::invalid_argument("solve_n2: the power must be 2");
    const FieldPtr& K = target.field;
    if (K->finite() && K->characteristic() == 2)
        throw UnsupportedInstanceError("the n = 2 construction requires characteristic != 2");

    N2Core core;
    int mp = -1;
    for (std::size_t j = target.values.size(); j-- > 0;) {
        if (!target.values[j].is_zero()) {
            mp = static_cast<int>(j);
            break;
        }
    }
    if (mp < 0) {
        core.all_zero = true;
        core.arena = K;
        return core;
    }
    core.m_prime = static_cast<unsigned>(mp);
    core.trace.push_back("trim: m' = " + std::to_string(core.m_prime));

    const FieldElement lead = target.values[core.m_prime];
    const FieldElement lead_inv = inv(lead);
    std::vector<FieldElement> monic;  // a~_0 .. a~_{m'-1}, 1
    monic.reserve(core.m_prime + 1);
    for (unsigned j = 0; j < core.m_prime; ++j) monic.push_back(target.values[j] * lead_inv);
    monic.push_back(K->one());

    // roots of the trimmed monic polynomial
    std::vector<FieldElement> beta;
    FieldPtr L = K;
    if (core.m_prime >= 1) {
        DensePoly P(K, monic);
        RootMultiset rm;
        if (K->finite()) {
            std::mt19937_64 rng(seed ^ 0x6e32a5a5c3d2f0b1ULL);
            rm = roots_finite(P, rng);
        } else {
            rm = roots_complex(P);
        }
        L = rm.extension_used;
        for (const auto& e : rm.roots)
            for (unsigned i = 0; i < e.multiplicity; ++i) beta.push_back(e.value);
        if (!same_field(L, K))
            core.trace.push_back("splitting extension: " + L->to_text());
    }

    FieldElement lead_L = embed_into(lead, L);
    FieldElement minus_one_L = -L->one();
    if (K->finite()) {
        // one quadratic step makes every needed value a square at once
        FieldElement bad;
        bool need = false;
        auto consider = [&](const FieldElement& x) {
            if (!need && !is_square(x)) {
                bad = x;
                need = true;
            }
        };
        consider(lead_L);
        for (const auto& b : beta) consider(b);
        if (core.m_prime >= 1) consider(minus_one_L);
        if (need) {
            FieldPtr L2 = extend_quadratic(L, bad);
            core.trace.push_back("quadratic step: " + L2->to_text());
            lead_L = embed_into(lead_L, L2);
            minus_one_L = -L2->one();
            for (auto& b : beta) b = embed_into(b, L2);
            L = L2;
        }
    }

    core.arena = L;
    core.sqrt_leading = sqrt_or_throw(lead_L);
    if (core.m_prime >= 1) core.sqrt_minus_one = sqrt_or_throw(minus_one_L);
    core.beta_sqrt.reserve(beta.size());
    for (const auto& b : beta) core.beta_sqrt.push_back(sqrt_or_throw(b));

    core.g.assign(2 * core.m_prime + 1, L->zero());
    for (unsigned j = 0; j <= core.m_prime; ++j) core.g[2 * j] = embed_into(monic[j], L);
    return core;
}

SolveOutcome assemble_n2(const N2Core& core, const TargetVector& target, std::uint64_t sign_mask,
                         N2Internals* internals) {
    const FieldPtr& L = core.arena;
    SolveOutcome out;
    out.method = SolveMethod::N2Constructive;
    out.extension_used = L;
    out.trace = core.trace;

    if (core.all_zero) {
        out.alpha.assign(target.values.size(), L->zero());
        out.residual = verify(out.alpha, target);
        if (internals) {
            internals->m_prime = 0;
            internals->arena = L;
        }
        return out;
    }

    FieldElement s0 = (sign_mask & 1) ? -core.sqrt_leading : core.sqrt_leading;
    DensePoly h_plus(L, {L->one()});
    for (std::size_t i = 0; i < core.beta_sqrt.size(); ++i) {
        FieldElement root = (sign_mask >> (i + 1)) & 1 ? -core.beta_sqrt[i] : core.beta_sqrt[i];
        h_plus = h_plus * DensePoly(L, {root, L->one()});
    }

    std::vector<FieldElement> twisted(core.m_prime + 1, L->zero());
    for (unsigned i = 0; i <= core.m_prime; ++i) {
        const FieldElement ci = h_plus.coeff(i);
        twisted[i] = ((core.m_prime - i) % 2 == 0) ? ci : core.sqrt_minus_one * ci;
    }

    out.alpha.assign(target.values.size(), L->zero());
    for (unsigned i = 0; i <= core.m_prime; ++i) out.alpha[i] = s0 * twisted[i];
    out.residual = verify(out.alpha, target);
    if (L->finite() && out.residual != 0.0)
        throw std::logic_error("n = 2 construction failed to verify exactly");

    if (internals) {
        internals->m_prime = core.m_prime;
        internals->arena = L;
        internals->h_plus.assign(core.m_prime + 1, L->zero());
        for (unsigned i = 0; i <= core.m_prime; ++i) internals->h_plus[i] = h_plus.coeff(i);
        internals->twisted = twisted;
        internals->g = core.g;
        internals->sqrt_leading = s0;
        internals->sqrt_minus_one = core.sqrt_minus_one;
    }
    return out;
}

}  // namespace

SolveOutcome solve_n2(const TargetVector& target, std::uint64_t seed, N2Internals* internals) {
    N2Core core = build_n2_core(target, seed);
    return assemble_n2(core, target, 0, internals);
}

std::vector<SolveOutcome> enumerate_n2_solutions(const TargetVector& target, std::uint64_t seed) {
    N2Core core = build_n2_core(target, seed);
    if (core.all_zero) return {assemble_n2(core, target, 0, nullptr)};
    if (core.m_prime + 1 > 24)
        throw std::invalid_argument("enumerate_n2_solutions: 2^(m'+1) sign choices is too large");
    const std::uint64_t count = std::uint64_t{1} << (core.m_prime + 1);
    const bool complex_arena = core.arena->kind() == FieldKind::ComplexApprox;
    std::vector<SolveOutcome> out;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        SolveOutcome cand = assemble_n2(core, target, mask, nullptr);
        bool dup = false;
        for (const auto& seen : out) {
            bool equal = true;
            for (std::size_t i = 0; i < cand.alpha.size() && equal; ++i) {
                if (complex_arena) {
                    // 1e-6 relative: sign sweeps over numerically-split
                    // multiple roots must still collapse
                    const auto a = cand.alpha[i].complex_value();
                    const auto b = seen.alpha[i].complex_value();
                    equal = std::abs(a - b) <= 1e-6 * (1.0 + std::max(std::abs(a), std::abs(b)));
                } else {
                    equal = cand.alpha[i] == seen.alpha[i];
                }
            }
            if (equal) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(cand));
    }
    return out;
}

CharPReduction reduce_char_p(const TargetVector& target) {
    const FieldPtr& K = target.field;
    if (!K || !K->finite())
        throw std::invalid_argument("reduce_char_p: finite-field target required");
    auto dec = characteristic_decompose(K, target.n);
    if (!dec) {
        throw UnsupportedInstanceError(
            "characteristic hypothesis violated: n = " + std::to_string(target.n) + " = p^s * n' needs n' < p = " +
            std::to_string(K->characteristic()));
    }
    std::vector<FieldElement> b;
    b.reserve(target.values.size());
    for (const auto& a : target.values) b.push_back(frobenius_root(a, dec->s));
    return CharPReduction{dec->s, dec->n_prime, TargetVector(dec->n_prime, std::move(b))};
}

// ---------------------------------------------------------------------------
// Complex numeric kernel: raw std::complex<double> vectors for the path
// tracker, Newton corrector, and fiber experiments.

namespace {

using CVec = std::vector<std::complex<double>>;

double inf_norm(const CVec& v) {
    double r = 0.0;
    for (const auto& x : v) r = std::max(r, std::abs(x));
    return r;
}

CVec poly_mul_c(const CVec& a, const CVec& b) {
    CVec c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

CVec poly_pow_c(const CVec& f, unsigned n) {
    CVec r{1.0};
    CVec base = f;
    while (n) {
        if (n & 1) r = poly_mul_c(r, base);
        n >>= 1;
        if (n) base = poly_mul_c(base, base);
    }
    return r;
}

struct ComplexSystem {
    unsigned m;
    unsigned n;

    CVec phi(const CVec& alpha) const {
        const CVec p = poly_pow_c(alpha, n);
        CVec out(m + 1, 0.0);
        for (unsigned j = 0; j <= m; ++j) {
            const std::size_t deg = std::size_t{j} * n;
            if (deg < p.size()) out[j] = p[deg];
        }
        return out;
    }

    std::vector<CVec> jacobian(const CVec& alpha) const {
        CVec w = poly_pow_c(alpha, n - 1);
        for (auto& x : w) x *= static_cast<double>(n);
        std::vector<CVec> jac(m + 1, CVec(m + 1, 0.0));
        for (unsigned i = 0; i <= m; ++i)
            for (unsigned j = 0; j <= m; ++j) {
                const std::size_t target = std::size_t{i} * n;
                if (target >= j && target - j < w.size()) jac[i][j] = w[target - j];
            }
        return jac;
    }

    double residual(const CVec& alpha, const CVec& target) const {
        const CVec img = phi(alpha);
        double r = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i) r = std::max(r, std::abs(img[i] - target[i]));
        return r;
    }
};

bool lu_solve(std::vector<CVec> a, CVec b, CVec& out) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a[col][col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r][col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-300) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const std::complex<double> factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        std::complex<double> acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * out[j];
        out[i] = acc / a[i][i];
    }
    return true;
}

// damped Newton iteration toward phi(alpha) = target
bool newton_iterate(const ComplexSystem& sys, CVec& alpha, const CVec& target, int iters,
                    double tol) {
    double res = sys.residual(alpha, target);
    for (int it = 0; it < iters; ++it) {
        if (res <= tol) return true;
        const CVec img = sys.phi(alpha);
        CVec rhs(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) rhs[i] = img[i] - target[i];
        CVec delta;
        if (!lu_solve(sys.jacobian(alpha), rhs, delta)) return false;
        double lambda = 1.0;
        bool improved = false;
        for (int h = 0; h < 10; ++h) {
            CVec cand(alpha.size());
            for (std::size_t i = 0; i < alpha.size(); ++i) cand[i] = alpha[i] - lambda * delta[i];
            const double cres = sys.residual(cand, target);
            if (cres < res) {
                alpha = std::move(cand);
                res = cres;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) return res <= tol;
    }
    return res <= tol;
}

bool track_path(const ComplexSystem& sys, CVec& alpha, const CVec& from, const CVec& to,
                int steps, const HomotopyConfig& cfg, int depth) {
    const double tol_step =
        std::max(cfg.tolerance, 1e-11) * (1.0 + std::max(inf_norm(from), inf_norm(to))) * 100.0;
    CVec prev = from;
    for (int s = 1; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        CVec at(from.size());
        for (std::size_t i = 0; i < from.size(); ++i) at[i] = (1.0 - t) * from[i] + t * to[i];
        CVec save = alpha;
        if (!newton_iterate(sys, alpha, at, cfg.newton_iters, tol_step)) {
            // escalate the corrector budget before subdividing: stiff
            // valleys can need a dozen damped iterations before the
            // quadratic phase kicks in
            alpha = save;
            if (!newton_iterate(sys, alpha, at, std::max(40, cfg.newton_iters * 5), tol_step)) {
                alpha = std::move(save);
                if (depth >= 5) return false;
                if (!track_path(sys, alpha, prev, at, 2, cfg, depth + 1)) return false;
            }
        }
        prev = std::move(at);
    }
    return true;
}

CVec anchor_tuple(unsigned m) {
    CVec a(m + 1, 0.0);
    a.front() = 1.0;
    a.back() = 1.0;
    return a;
}

std::complex<double> random_gamma(std::mt19937_64& rng) {
    const double mag = 0.6 + 1.1 * (static_cast<double>(rng() >> 11) * 0x1p-53);
    const double phase = 2.0 * M_PI * (static_cast<double>(rng() >> 11) * 0x1p-53);
    return std::polar(mag, phase);
}

CVec values_to_cvec(const std::vector<FieldElement>& values) {
    CVec v;
    v.reserve(values.size());
    for (const auto& x : values) v.push_back(x.complex_value());
    return v;
}

std::vector<FieldElement> cvec_to_values(const CVec& v, const FieldPtr& F) {
    std::vector<FieldElement> out;
    out.reserve(v.size());
    for (const auto& z : v) out.push_back(F->from_complex(z));
    return out;
}

// Geometric endgame: approach the endpoint along leg targets
// target + tau * (start - target) with tau shrinking by a constant factor.
// Near-branch-locus endpoints (for instance a tiny top coefficient) make
// the final stretch stiff for uniform steps; geometric legs keep each
// intermediate problem comfortably regular. Legs take full (guarded)
// Newton steps: a residual gate would stall once the remaining gap drops
// below it.
bool geometric_endgame(const ComplexSystem& sys, CVec& alpha, const CVec& start,
                       const CVec& target, double tau_start) {
    double tau = tau_start;
    CVec leg_target(target.size());
    while (tau > 1e-14) {
        tau *= 0.25;
        for (std::size_t i = 0; i < target.size(); ++i)
            leg_target[i] = target[i] + tau * (start[i] - target[i]);
        double res = sys.residual(alpha, leg_target);
        for (int it = 0; it < 6; ++it) {
            const CVec img = sys.phi(alpha);
            CVec rhs(img.size());
            for (std::size_t i = 0; i < img.size(); ++i) rhs[i] = img[i] - leg_target[i];
            CVec delta;
            if (!lu_solve(sys.jacobian(alpha), rhs, delta)) return false;
            double best_res = res;
            CVec best = alpha;
            double lam = 1.0;
            for (int h = 0; h < 4; ++h) {
                CVec cand(alpha.size());
                for (std::size_t i = 0; i < alpha.size(); ++i)
                    cand[i] = alpha[i] - lam * delta[i];
                const double cres = sys.residual(cand, leg_target);
                if (std::isfinite(cres) &&
                    (h == 0 ? cres <= std::max(1e3 * res, 0.5) : cres < best_res)) {
                    best = std::move(cand);
                    best_res = cres;
                    break;
                }
                lam *= 0.5;
            }
            alpha = std::move(best);
            res = best_res;
        }
    }
    return true;
}

// one tracked path from the gamma-scaled anchor; nullopt when tracking or
// the final polish fails. The target is first normalized to unit sup-norm
// through the homogeneity action (solve phi(beta) = a/lambda^n, then
// alpha = lambda beta), which keeps the path steps well conditioned for
// targets of any magnitude.
std::optional<CVec> homotopy_attempt(const ComplexSystem& sys, const CVec& target,
                                     std::complex<double> gamma, const HomotopyConfig& cfg) {
    const double norm = inf_norm(target);
    if (norm == 0.0) return CVec(sys.m + 1, 0.0);  // phi(0) = 0
    const double lambda = std::pow(norm, 1.0 / sys.n);
    CVec scaled = target;
    for (auto& x : scaled) x /= norm;

    CVec alpha = anchor_tuple(sys.m);
    for (auto& x : alpha) x *= gamma;
    const CVec start = sys.phi(alpha);
    const int steps = std::max(2, cfg.steps);
    const double t1 = 1.0 - 1.0 / steps;
    CVec at1(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i)
        at1[i] = (1.0 - t1) * start[i] + t1 * scaled[i];
    if (!track_path(sys, alpha, start, at1, steps - 1, cfg, 0)) return std::nullopt;
    if (!geometric_endgame(sys, alpha, start, scaled, 1.0 / steps)) return std::nullopt;
    const double tol = cfg.tolerance * 2.0;
    if (!newton_iterate(sys, alpha, scaled, 60, tol)) return std::nullopt;
    for (auto& x : alpha) x *= lambda;
    return alpha;
}

struct LiftedAttempt {
    CVec trimmed;
    double dropped = 0.0;
};

// tracks the lifted system toward (a, 0, ..., 0), peels the padded
// coordinates off one at a time (each below its vanishing threshold), and
// polishes the surviving head on the original system.
std::optional<LiftedAttempt> lifted_attempt(unsigned m, unsigned n, unsigned M,
                                            const CVec& original_target,
                                            std::complex<double> gamma,
                                            const HomotopyConfig& cfg) {
    const ComplexSystem lifted{M, n};
    const double norm = inf_norm(original_target);
    if (norm == 0.0) {
        LiftedAttempt zero;
        zero.trimmed.assign(m + 1, 0.0);
        return zero;
    }
    // unit-norm working copy via the homogeneity action (see homotopy_attempt)
    const double lambda = std::pow(norm, 1.0 / n);
    CVec target(original_target);
    for (auto& x : target) x /= norm;
    const CVec scaled_original = target;
    target.resize(M + 1, 0.0);

    CVec alpha = anchor_tuple(M);
    for (auto& x : alpha) x *= gamma;
    const CVec start = lifted.phi(alpha);

    // The endpoint lies on the branch locus (the top target equation is
    // alpha_M^n = 0). Track to one step short of t = 1 and let the peeling
    // stages below walk the rest.
    const int steps = std::max(2, cfg.steps);
    const double t1 = 1.0 - 1.0 / steps;
    CVec at1(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) at1[i] = (1.0 - t1) * start[i] + t1 * target[i];
    if (!track_path(lifted, alpha, start, at1, steps - 1, cfg, 0)) return std::nullopt;

    const double tol = cfg.tolerance * 2.0;
    const double drop_goal = 1e-6;

    // Stage-wise peeling, one padded coordinate at a time, from the top.
    // The exact endpoint (padded targets all zero) sits on the branch
    // locus, where a direct Newton race decays the padding only
    // sublinearly. Instead, each stage runs a geometric continuation of
    // the TOP coordinate's target (the lower padding held at its tracked
    // value, so its rows stay regular): shrinking that target by a
    // constant factor per leg keeps every intermediate problem regular,
    // and the top coordinate falls like ratio^(legs/n). Once it is below
    // the vanishing threshold it is trimmed away and the next padded
    // coordinate becomes the top of a smaller system.
    double dropped_worst = 0.0;
    const double tau0 = 1.0 / steps;  // padding fraction left after the tracked path
    for (unsigned D = M; D > m; --D) {
        const ComplexSystem sysD{D, n};
        CVec alphaD(alpha.begin(), alpha.begin() + D + 1);
        CVec targetD(D + 1);
        for (unsigned j = 0; j <= m; ++j) targetD[j] = scaled_original[j];
        for (unsigned j = m + 1; j < D; ++j) targetD[j] = tau0 * start[j];

        // ladder reference: the top row of this stage reads exactly
        // alpha_D^n, so the decaying targets start from its current value
        // (the anchor image itself can have zero entries at these strides)
        std::complex<double> ref = 1.0;
        for (unsigned i = 0; i < n; ++i) ref *= alphaD[D];
        double tau = 1.0;
        const double ratio = 0.25;
        for (int leg = 0; leg < 220; ++leg) {
            const double coord_goal = 0.3 * drop_goal * std::max(inf_norm(alphaD), 1e-12);
            double tau_goal = 1.0;
            for (unsigned i = 0; i < n; ++i) tau_goal *= coord_goal;
            if (tau * std::abs(ref) <= tau_goal) break;
            tau *= ratio;
            targetD[D] = tau * ref;
            double res = sysD.residual(alphaD, targetD);
            for (int it = 0; it < 6; ++it) {
                const CVec img = sysD.phi(alphaD);
                CVec rhs(img.size());
                for (std::size_t i = 0; i < img.size(); ++i) rhs[i] = img[i] - targetD[i];
                CVec delta;
                if (!lu_solve(sysD.jacobian(alphaD), rhs, delta)) return std::nullopt;
                // full step preferred (it is what decays the padding);
                // transient residual bumps self-correct on the next
                // iterations, so the first-candidate gate is generous
                double best_res = res;
                CVec best = alphaD;
                double lam = 1.0;
                for (int h = 0; h < 4; ++h) {
                    CVec cand(alphaD.size());
                    for (std::size_t i = 0; i < alphaD.size(); ++i)
                        cand[i] = alphaD[i] - lam * delta[i];
                    const double cres = sysD.residual(cand, targetD);
                    if (std::isfinite(cres) &&
                        (h == 0 ? cres <= std::max(1e3 * res, 0.5) : cres < best_res)) {
                        best = std::move(cand);
                        best_res = cres;
                        break;
                    }
                    lam *= 0.5;
                }
                alphaD = std::move(best);
                res = best_res;
            }
        }
        // snap onto the exact zero target for the top coordinate
        targetD[D] = 0.0;
        newton_iterate(sysD, alphaD, targetD, 20, tol);
        const double dropped = std::abs(alphaD[D]);
        if (dropped > drop_goal * std::max(inf_norm(alphaD), 1e-12)) return std::nullopt;
        dropped_worst = std::max(dropped_worst, dropped);
        alpha.assign(alphaD.begin(), alphaD.begin() + D);  // trim the top coordinate
    }

    LiftedAttempt out;
    out.dropped = dropped_worst;  // scale free: lambda cancels in the threshold
    out.trimmed = alpha;          // length m + 1 after the peeling stages
    const ComplexSystem original{m, n};
    newton_iterate(original, out.trimmed, scaled_original, 40, tol);
    if (original.residual(out.trimmed, scaled_original) > tol) return std::nullopt;
    for (auto& x : out.trimmed) x *= lambda;
    return out;
}

void require_complex_target(const TargetVector& target, const char* who) {
    if (!target.field || target.field->kind() != FieldKind::ComplexApprox)
        throw std::invalid_argument(std::string(who) + ": ComplexApprox target required");
}

}  // namespace

SolveOutcome solve_homotopy(const TargetVector& target, const HomotopyConfig& config) {
    require_complex_target(target, "solve_homotopy");
    const unsigned m = target.m();
    const unsigned n = target.n;
    if (std::gcd(m, n) != 1)
        throw std::invalid_argument("solve_homotopy requires gcd(m, n) = 1; use solve_lifted");
    const ComplexSystem sys{m, n};
    const CVec tvec = values_to_cvec(target.values);
    const double tol = config.tolerance * (1.0 + inf_norm(tvec));

    SolveOutcome best;
    best.method = SolveMethod::Homotopy;
    best.extension_used = target.field;
    best.residual = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart <= config.max_restarts; ++restart) {
        std::mt19937_64 rng(config.seed ^ (kMix * (restart + 1)));
        const std::complex<double> gamma = restart == 0 ? 1.0 : random_gamma(rng);
        auto alpha = homotopy_attempt(sys, tvec, gamma, config);
        if (alpha) {
            SolveOutcome out;
            out.alpha = cvec_to_values(*alpha, target.field);
            out.residual = verify(out.alpha, target);
            out.method = restart == 0 ? SolveMethod::Homotopy : SolveMethod::NewtonRestart;
            out.extension_used = target.field;
            if (restart > 0) out.trace.push_back("restarts: " + std::to_string(restart));
            if (out.residual <= tol) return out;
            if (out.residual < best.residual) best = out;
        }
    }
    throw NumericFailure("homotopy tracking exhausted " + std::to_string(config.max_restarts) +
                             " restarts (best residual " + fmt_sci(best.residual) + ")",
                         best);
}

SolveOutcome solve_lifted(const TargetVector& target, const HomotopyConfig& config) {
    require_complex_target(target, "solve_lifted");
    const unsigned m = target.m();
    const unsigned n = target.n;
    if (std::gcd(m, n) == 1) return solve_homotopy(target, config);
    unsigned M = m + 1;
    while (std::gcd(M, n) != 1) ++M;
    const CVec tvec = values_to_cvec(target.values);
    const double tol = config.tolerance * (1.0 + inf_norm(tvec));

    SolveOutcome best;
    best.method = SolveMethod::Lifted;
    best.extension_used = target.field;
    best.residual = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart <= config.max_restarts; ++restart) {
        std::mt19937_64 rng(config.seed ^ (kMix * (restart + 7)));
        const std::complex<double> gamma = restart == 0 ? 1.0 : random_gamma(rng);
        auto attempt = lifted_attempt(m, n, M, tvec, gamma, config);
        if (attempt) {
            SolveOutcome out;
            out.alpha = cvec_to_values(attempt->trimmed, target.field);
            out.residual = verify(out.alpha, target);
            out.method = SolveMethod::Lifted;
            out.extension_used = target.field;
            out.trace.push_back("lift: M = " + std::to_string(M));
            out.trace.push_back("dropped coefficient magnitude: " + fmt_sci(attempt->dropped));
            if (restart > 0) out.trace.push_back("restarts: " + std::to_string(restart));
            if (out.residual <= tol) return out;
            if (out.residual < best.residual) best = out;
        }
    }
    throw NumericFailure("lifted tracking exhausted " + std::to_string(config.max_restarts) +
                             " restarts (best residual " + fmt_sci(best.residual) + ")",
                         best);
}

SolveOutcome solve(const TargetVector& target, const HomotopyConfig& config) {
    const FieldPtr& K = target.field;
    if (K->finite()) {
        CharPReduction red = reduce_char_p(target);
        if (red.n_prime == 1) {
            SolveOutcome out;
            out.alpha = red.reduced.values;
            out.method = SolveMethod::CharPReduction;
            out.extension_used = K;
            out.trace.push_back("reduction: n = " + std::to_string(target.n) + " -> n' = 1 (s = " +
                                std::to_string(red.s) + ")");
            out.residual = verify(out.alpha, target);
            if (out.residual != 0.0) throw std::logic_error("n' = 1 copy failed to verify");
            return out;
        }
        if (red.n_prime == 2) {
            SolveOutcome inner = solve_n2(red.reduced, config.seed);
            SolveOutcome out = inner;
            if (red.s > 0) {
                out.method = SolveMethod::CharPReduction;
                out.trace.insert(out.trace.begin(),
                                 "reduction: n = " + std::to_string(target.n) + " -> n' = 2 (s = " +
                                     std::to_string(red.s) + ")");
            }
            out.residual = verify(out.alpha, target);
            if (out.residual != 0.0) throw std::logic_error("reduced n2 solution failed to verify");
            return out;
        }
        throw UnsupportedInstanceError(
            "exact solving over finite fields is limited to n' in {1, 2} after reduction; got n' = " +
            std::to_string(red.n_prime));
    }
    if (target.n == 2) return solve_n2(target, config.seed);
    if (std::gcd(target.m(), target.n) == 1) return solve_homotopy(target, config);
    return solve_lifted(target, config);
}

FiberEstimate estimate_fiber_count(unsigned m, unsigned n,
                                   const std::vector<FieldElement>& target, unsigned trials,
                                   std::uint64_t seed) {
    if (target.size() != static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("estimate_fiber_count: target must have length m+1");
    const FieldPtr& F = target.front().field();
    if (!F || F->kind() != FieldKind::ComplexApprox)
        throw std::invalid_argument("estimate_fiber_count: ComplexApprox target required");
    TargetVector tv(n, target);
    const CVec tvec = values_to_cvec(target);
    const double scale = 1.0 + inf_norm(tvec);
    const double verify_tol = 1e-8 * scale;
    const bool coprime = std::gcd(m, n) == 1;
    const ComplexSystem sys{m, n};

    FiberEstimate est;
    est.trials_used = trials;
    unsigned successes = 0;

    HomotopyConfig path_cfg;
    path_cfg.steps = 48;
    path_cfg.newton_iters = 8;
    path_cfg.tolerance = 1e-10;
    path_cfg.max_restarts = 3;

    unsigned M = m + 1;
    while (std::gcd(M, n) != 1) ++M;

    auto dedup_insert = [&](const CVec& alpha) {
        const double tol = 1e-6 * (1.0 + inf_norm(alpha));
        for (const auto& seen : est.solutions) {
            double dist = 0.0;
            for (std::size_t i = 0; i < alpha.size(); ++i)
                dist = std::max(dist, std::abs(alpha[i] - seen[i].complex_value()));
            if (dist <= tol) return;
        }
        est.solutions.push_back(cvec_to_values(alpha, F));
    };

    for (unsigned trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(seed * kMix + trial * 0xda942042e4dd58b5ULL + 1);
        std::optional<CVec> alpha;
        if (trial % 2 == 0) {
            // anchor rescaled through the homogeneity action: gamma is a
            // random n-th root of unity times a random modulus
            const double mag = 0.5 + 1.2 * (static_cast<double>(rng() >> 11) * 0x1p-53);
            const std::complex<double> gamma =
                std::polar(mag, 2.0 * M_PI * static_cast<double>(rng() % n) / n);
            if (coprime) {
                alpha = homotopy_attempt(sys, tvec, gamma, path_cfg);
            } else {
                auto lifted = lifted_attempt(m, n, M, tvec, gamma, path_cfg);
                if (lifted) alpha = lifted->trimmed;
            }
        } else {
            const double radius = 1.0 + std::pow(scale, 1.0 / n);
            CVec start(m + 1);
            for (auto& x : start) {
                const double re = 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0;
                const double im = 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0;
                x = std::complex<double>(radius * re, radius * im);
            }
            if (newton_iterate(sys, start, tvec, 80, 1e-10 * scale)) alpha = std::move(start);
        }
        if (!alpha) continue;
        if (sys.residual(*alpha, tvec) > verify_tol) continue;
        ++successes;
        dedup_insert(*alpha);
    }
    est.log.push_back("trials: " + std::to_string(trials) + ", converged: " +
                      std::to_string(successes) + ", distinct: " +
                      std::to_string(est.solutions.size()));
    return est;
}

std::string to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::N2Constructive: return "n2-constructive";
        case SolveMethod::Homotopy: return "homotopy";
        case SolveMethod::NewtonRestart: return "newton-restart";
        case SolveMethod::CharPReduction: return "charp-reduction";
        case SolveMethod::Lifted: return "lifted";
    }
    return "unknown";
}

}  // namespace stridepow
