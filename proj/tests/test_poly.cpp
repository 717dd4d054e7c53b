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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "stridepow/poly.hpp"
#include "support/testutil.hpp"

using namespace stridepow;
using testutil::random_complex;
using testutil::random_element;

namespace {

DensePoly make_poly(const FieldPtr& F, std::vector<std::int64_t> ints) {
    std::vector<FieldElement> c;
    c.reserve(ints.size());
    for (auto v : ints) c.push_back(F->from_int(v));
    return DensePoly(F, std::move(c));
}

DensePoly random_poly(const FieldPtr& F, int deg, std::mt19937_64& rng) {
    std::vector<FieldElement> c;
    for (int i = 0; i < deg; ++i) c.push_back(random_element(F, rng));
    c.push_back(testutil::random_nonzero(F, rng));
    return DensePoly(F, std::move(c));
}

}  // namespace

TEST_CASE("multiplication") {
    auto F5 = Field::prime(5);
    auto prod = make_poly(F5, {1, 1}) * make_poly(F5, {1, -1});
    CHECK(prod == make_poly(F5, {1, 0, 4}));

    CHECK((make_poly(F5, {3, 1, 4}) * DensePoly(F5)).is_zero());

    auto sq = make_poly(F5, {1, 0, 1}) * make_poly(F5, {1, 0, 1});
    CHECK(sq == make_poly(F5, {1, 0, 2, 0, 1}));
}

TEST_CASE("pow") {
    auto C = Field::complex_approx();
    CHECK(pow(make_poly(C, {1, 1}), 2) == make_poly(C, {1, 2, 1}));

    auto F7 = Field::prime(7);
    auto f = make_poly(F7, {2, 3, 1});
    CHECK(pow(f, 1) == f);
    // repeated-multiplication oracle
    std::mt19937_64 rng(3);
    for (const auto& F : {Field::prime(5), Field::prime(11)}) {
        for (int trial = 0; trial < 10; ++trial) {
            DensePoly g = random_poly(F, 1 + static_cast<int>(rng() % 4), rng);
            unsigned n = 1 + static_cast<unsigned>(rng() % 5);
            DensePoly expect(F, {F->one()});
            for (unsigned i = 0; i < n; ++i) expect = expect * g;
            CHECK(pow(g, n) == expect);
            CHECK(pow(g, n).degree() == static_cast<int>(n) * g.degree());
        }
    }
}

TEST_CASE("pow is additive in the exponent") {
    std::mt19937_64 rng(5);
    for (const auto& F : {Field::prime(3), Field::prime(13)}) {
        for (int trial = 0; trial < 10; ++trial) {
            DensePoly f = random_poly(F, 1 + static_cast<int>(rng() % 3), rng);
            unsigned a = 1 + static_cast<unsigned>(rng() % 4);
            unsigned b = 1 + static_cast<unsigned>(rng() % 4);
            CHECK(pow(f, a + b) == pow(f, a) * pow(f, b));
        }
    }
}

TEST_CASE("stride coefficients") {
    auto F7 = Field::prime(7);
    auto f = make_poly(F7, {1, 0, 2, 0, 1});  // 1 + 2x^2 + x^4
    auto s = stride_coeffs(f, 2, 2);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == F7->from_int(1));
    CHECK(s[1] == F7->from_int(2));
    CHECK(s[2] == F7->from_int(1));

    auto zeros = stride_coeffs(DensePoly(F7), 3, 4);
    for (const auto& z : zeros) CHECK(z.is_zero());

    auto s2 = stride_coeffs(make_poly(F7, {1, 1}), 2, 1);
    CHECK(s2[0] == F7->from_int(1));
    CHECK(s2[1].is_zero());  // degree-2 coefficient absent
}

TEST_CASE("divmod and gcd") {
    auto F7 = Field::prime(7);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        DensePoly a = random_poly(F7, 1 + static_cast<int>(rng() % 5), rng);
        DensePoly b = random_poly(F7, 1 + static_cast<int>(rng() % 3), rng);
        auto [q, r] = divmod(a, b);
        CHECK(q * b + r == a);
        CHECK(r.degree() < b.degree());
        DensePoly g = gcd(a * b, b);
        CHECK(divmod(b, g).second.is_zero());
    }
}

TEST_CASE("roots_complex basics") {
    auto C = Field::complex_approx();
    auto r1 = roots_complex(make_poly(C, {-1, 0, 1}));
    REQUIRE(r1.roots.size() == 2);
    CHECK(r1.roots[0].value == C->from_int(-1));
    CHECK(r1.roots[1].value == C->from_int(1));

    auto r2 = roots_complex(make_poly(C, {4, -4, 1}));  // (x-2)^2
    REQUIRE(r2.roots.size() == 1);
    CHECK(r2.roots[0].multiplicity == 2);
    CHECK(std::abs(r2.roots[0].value.complex_value() - 2.0) < 1e-6);

    auto r3 = roots_complex(make_poly(C, {-1, 0, 0, 1}));  // x^3 - 1
    REQUIRE(r3.roots.size() == 3);
    std::complex<double> prod = 1.0;
    for (const auto& e : r3.roots) prod *= e.value.complex_value();
    CHECK(std::abs(prod - 1.0) < 1e-8);  // Vieta: product = -(-1)
}

TEST_CASE("roots_complex recovers well-separated random roots") {
    auto C = Field::complex_approx();
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 7);
        std::vector<std::complex<double>> want;
        while (static_cast<int>(want.size()) < d) {
            auto z = random_complex(rng, 3.0);
            bool ok = true;
            for (auto w : want) ok = ok && std::abs(z - w) > 0.3;
            if (ok) want.push_back(z);
        }
        DensePoly f(C, {C->one()});
        for (auto z : want) f = f * DensePoly(C, {C->from_complex(-z), C->one()});
        auto rm = roots_complex(f);
        REQUIRE(rm.roots.size() == want.size());
        std::sort(want.begin(), want.end(), [](auto a, auto b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(rm.roots[i].multiplicity == 1);
            CHECK(std::abs(rm.roots[i].value.complex_value() - want[i]) < 1e-7);
        }
        // Vieta: sum of roots = -c_{d-1}/c_d
        std::complex<double> sum = 0.0;
        for (const auto& e : rm.roots) sum += e.value.complex_value();
        auto expect = -(f.coeff(d - 1) / f.coeff(d)).complex_value();
        CHECK(std::abs(sum - expect) < 1e-7);
    }
}

TEST_CASE("roots_finite examples") {
    std::mt19937_64 rng(33);
    auto F7 = Field::prime(7);
    auto r1 = roots_finite(make_poly(F7, {-1, 0, 1}), rng);
    REQUIRE(r1.roots.size() == 2);
    CHECK(same_field(r1.extension_used, F7));
    CHECK(r1.roots[0].value == embed_into(F7->from_int(1), r1.extension_used));
    CHECK(r1.roots[1].value == embed_into(F7->from_int(6), r1.extension_used));

    auto F3 = Field::prime(3);
    auto r2 = roots_finite(make_poly(F3, {1, 0, 1}), rng);  // x^2 + 1, roots in F_9
    REQUIRE(r2.roots.size() == 2);
    CHECK(r2.extension_used->size() == 9);
    for (const auto& e : r2.roots)
        CHECK(e.value * e.value == r2.extension_used->from_int(2));

    auto F5 = Field::prime(5);
    auto r3 = roots_finite(make_poly(F5, {0, -1, 0, 1}), rng);  // x^3 - x
    REQUIRE(r3.roots.size() == 3);
    CHECK(r3.roots[0].value == F5->from_int(0));
    CHECK(r3.roots[1].value == F5->from_int(1));
    CHECK(r3.roots[2].value == F5->from_int(4));
}

TEST_CASE("roots_finite reconstructs the polynomial") {
    std::mt19937_64 rng(55);
    for (std::uint64_t p : {3, 5, 7, 11, 13}) {
        auto F = Field::prime(p);
        for (int trial = 0; trial < 12; ++trial) {
            DensePoly f = random_poly(F, 1 + static_cast<int>(rng() % 6), rng);
            auto rm = roots_finite(f, rng);
            const FieldPtr& L = rm.extension_used;
            DensePoly rebuilt(L, {L->one()});
            for (const auto& e : rm.roots) {
                DensePoly lin(L, {-e.value, L->one()});
                for (unsigned i = 0; i < e.multiplicity; ++i) rebuilt = rebuilt * lin;
            }
            CHECK(rebuilt == embed_poly(scale(f, inv(f.leading())), L));
        }
    }
}

TEST_CASE("roots_finite handles repeated and p-th power factors") {
    std::mt19937_64 rng(77);
    auto F3 = Field::prime(3);
    // (x+1)^3 (x+2): derivative-zero path plus a simple factor
    auto f = pow(make_poly(F3, {1, 1}), 3) * make_poly(F3, {2, 1});
    auto rm = roots_finite(f, rng);
    REQUIRE(rm.roots.size() == 2);
    CHECK(rm.roots[0].value == F3->from_int(1));  // -2
    CHECK(rm.roots[0].multiplicity == 1);
    CHECK(rm.roots[1].value == F3->from_int(2));  // -1
    CHECK(rm.roots[1].multiplicity == 3);
}

TEST_CASE("formal_partial_of_power") {
    auto C = Field::complex_approx();
    std::vector<FieldElement> a11 = {C->one(), C->one()};
    CHECK(formal_partial_of_power(a11, 2, 1) == make_poly(C, {2, 2}));

    std::vector<FieldElement> a101 = {C->one(), C->zero(), C->one()};
    // 3(1+x^2)^2 x = 3x + 6x^3 + 3x^5
    CHECK(formal_partial_of_power(a101, 3, 2) == make_poly(C, {0, 3, 0, 6, 0, 3}));

    auto F7 = Field::prime(7);
    std::mt19937_64 rng(4);
    for (unsigned j = 1; j <= 3; ++j) {
        std::vector<FieldElement> alpha = {random_element(F7, rng), random_element(F7, rng),
                                           random_element(F7, rng)};
        DensePoly expect = shift_up(DensePoly(F7, {F7->one()}), j - 1);
        CHECK(formal_partial_of_power(alpha, 1, j) == expect);
    }
}

TEST_CASE("formal_partial_of_power matches central finite differences") {
    auto C = Field::complex_approx();
    std::mt19937_64 rng(101);
    const double h = 1e-5;
    for (int trial = 0; trial < 12; ++trial) {
        const unsigned m = 1 + static_cast<unsigned>(rng() % 4);
        const unsigned n = 1 + static_cast<unsigned>(rng() % 4);
        std::vector<FieldElement> alpha;
        for (unsigned i = 0; i <= m; ++i) alpha.push_back(C->from_complex(random_complex(rng)));
        for (unsigned j = 1; j <= m + 1; ++j) {
            auto exact = stride_coeffs(formal_partial_of_power(alpha, n, j), n, m);
            auto plus = alpha, minus = alpha;
            plus[j - 1] = plus[j - 1] + C->from_complex({h, 0});
            minus[j - 1] = minus[j - 1] - C->from_complex({h, 0});
            auto sp = stride_coeffs(pow(DensePoly(C, plus), n), n, m);
            auto sm = stride_coeffs(pow(DensePoly(C, minus), n), n, m);
            for (unsigned i = 0; i <= m; ++i) {
                auto fd = (sp[i].complex_value() - sm[i].complex_value()) / (2 * h);
                CHECK(std::abs(fd - exact[i].complex_value()) < 1e-6);
            }
        }
    }
}

TEST_CASE("poly text form") {
    auto F5 = Field::prime(5);
    CHECK(make_poly(F5, {1, 0, 4}).to_text() == "1,0,4");
    CHECK(DensePoly(F5).to_text() == "0");
}
