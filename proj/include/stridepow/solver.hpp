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

#ifndef STRIDEPOW_SOLVER_HPP
#define STRIDEPOW_SOLVER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stridepow/field.hpp"
#include "stridepow/phi.hpp"
#include "stridepow/poly.hpp"

namespace stridepow {

/**
 * Solvers for the prescribed-coefficient problem: given n and targets
 * a_0..a_m, produce f of degree <= m whose n-th power has degree-jn
 * coefficient a_j for every j.
 *
 * Finite fields get the exact constructive paths (characteristic
 * reduction, then n' = 1 copy or the n' = 2 square-root construction,
 * extending the field as needed). The complex family gets the n = 2
 * construction plus homotopy continuation anchored at (1, 0, ..., 0, 1)
 * for general n, with the lift through a larger instance when
 * gcd(m, n) > 1.
 */

struct TargetVector {
    unsigned n = 1;
    std::vector<FieldElement> values;  // a_0 .. a_m
    FieldPtr field;

    TargetVector(unsigned n_, std::vector<FieldElement> values_);
    unsigned m() const { return static_cast<unsigned>(values.size()) - 1; }
};

enum class SolveMethod { N2Constructive, Homotopy, NewtonRestart, CharPReduction, Lifted };
std::string to_string(SolveMethod method);

struct SolveOutcome {
    std::vector<FieldElement> alpha;  // coefficients of f, length m+1
    double residual = 0.0;            // complex: max deviation; finite: mismatch count
    SolveMethod method = SolveMethod::N2Constructive;
    FieldPtr extension_used;
    std::vector<std::string> trace;
};

struct HomotopyConfig {
    int steps = 64;
    int newton_iters = 8;
    double tolerance = 1e-10;
    int max_restarts = 50;
    std::uint64_t seed = 0;
};

/// The instance falls outside the exactly-solvable range (hypothesis
/// violation or an unsupported exact case).
struct UnsupportedInstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric path ran out of restarts; best attempt attached.
struct NumericFailure : std::runtime_error {
    NumericFailure(const std::string& what, SolveOutcome best_)
        : std::runtime_error(what), best(std::move(best_)) {}
    SolveOutcome best;
};

/// max_j |phi(alpha)_j - a_j| over complex; the number of mismatching
/// coordinates over a finite field (0 = exact solution). alpha may live in
/// an extension of the target field.
double verify(const std::vector<FieldElement>& alpha, const TargetVector& target);

/// Intermediates of one n = 2 construction, for auditing the algebra:
/// h_plus holds the coefficients c_i of prod(x + sqrt(beta_i)), twisted
/// holds c'_i, g holds the even-spread target a~_0 + a~_1 x^2 + ... + x^2m'.
struct N2Internals {
    unsigned m_prime = 0;
    FieldPtr arena;
    std::vector<FieldElement> h_plus;
    std::vector<FieldElement> twisted;
    std::vector<FieldElement> g;
    FieldElement sqrt_leading;
    FieldElement sqrt_minus_one;  // valid only when m_prime >= 1
};

/// The constructive n = 2 solver; exact over finite fields of odd
/// characteristic (growing the field as needed), numeric over complex.
SolveOutcome solve_n2(const TargetVector& target, std::uint64_t seed = 0,
                      N2Internals* internals = nullptr);

/// All solutions reachable from the construction's independent sign
/// choices of sqrt(a_m'), sqrt(beta_1), ..., sqrt(beta_m'); deduplicated,
/// every outcome verified. 2^(m'+1) distinct when the trimmed monic target
/// polynomial has no multiple root.
std::vector<SolveOutcome> enumerate_n2_solutions(const TargetVector& target,
                                                 std::uint64_t seed = 0);

struct CharPReduction {
    unsigned s = 0;
    unsigned n_prime = 0;
    TargetVector reduced;
};

/// Writes n = p^s n' and replaces each a_j by its p^s-th root, so a
/// solution of the (n', b) instance solves the (n, a) instance. Throws
/// UnsupportedInstanceError when n' >= p.
CharPReduction reduce_char_p(const TargetVector& target);

/// Path tracking from the anchor (1, 0, ..., 0, 1) along the straight
/// target segment, Newton-corrected; restarts rescale the anchor through
/// the degree-n homogeneity action. Requires gcd(m, n) = 1.
SolveOutcome solve_homotopy(const TargetVector& target, const HomotopyConfig& config = {});

/// For gcd(m, n) > 1: solves the smallest lifted instance with
/// gcd(M, n) = 1 and target (a_0, ..., a_m, 0, ..., 0), checks that the
/// padded coefficients vanish (|alpha_j| <= 1e-6 * max|alpha|), and drops
/// them.
SolveOutcome solve_lifted(const TargetVector& target, const HomotopyConfig& config = {});

/// Dispatcher over all field families and exponents.
SolveOutcome solve(const TargetVector& target, const HomotopyConfig& config = {});

struct FiberEstimate {
    std::vector<std::vector<FieldElement>> solutions;  // deduplicated, verified
    unsigned trials_used = 0;
    std::vector<std::string> log;
};

/// Experiment: repeated homotopy solves from homogeneity-scaled anchors
/// plus Newton from random starts, deduplicated at 1e-6 relative. Reports
/// evidence about the fiber size, not a certified count.
FiberEstimate estimate_fiber_count(unsigned m, unsigned n,
                                   const std::vector<FieldElement>& target, unsigned trials,
                                   std::uint64_t seed);

}  // namespace stridepow

#endif
