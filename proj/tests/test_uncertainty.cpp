#include "doctest.h"

#include "reference_formulas.hpp"

#include "effcas/errors.hpp"
#include "effcas/oracle.hpp"
#include "effcas/uncertainty.hpp"

#include <random>

using namespace effcas;
using reference::h2;
using reference::q;
using reference::xs;

namespace {

// drop degree-1 basis elements, whose expectation vanishes
OperatorPolynomial functional(const OperatorPolynomial& p) {
    TermMap t;
    for (const auto& [idx, c] : p.terms())
        if (idx.degree() != 1) t[idx] = c;
    return OperatorPolynomial(p.engine(), t);
}

OperatorPolynomial e(const EnginePtr& eng, std::initializer_list<int> word, const Coefficient& c = Coefficient(1)) {
    return OperatorPolynomial::basis(eng, MultiIndex::from_word(eng->dim(), word), c);
}

// states satisfying x^j Delta(x_j x_k) = 0 exactly: Sigma built on the plane orthogonal to x^#
MomentState leading_surface_state(const LieAlgebra& alg, std::mt19937& rng, double hbar) {
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.5, 2.0);
    std::vector<double> x{u(rng), u(rng), u(rng)};
    const auto k = *alg.killing_upper();
    Eigen::Vector3d up;
    for (int i = 0; i < 3; ++i) {
        up[i] = 0.0;
        for (int j = 0; j < 3; ++j) up[i] += k[i][j].get_d() * x[j];
    }
    up.normalize();
    Eigen::Vector3d a = up.unitOrthogonal(), b = up.cross(a);
    const double p = pos(rng), r = pos(rng), c = 0.5 * std::sqrt(p * r) * u(rng) / 3.0;
    Eigen::Matrix3d S = p * a * a.transpose() + r * b * b.transpose() + c * (a * b.transpose() + b * a.transpose());
    MomentState s(x, 2, hbar);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) s.set(MultiIndex::unit(3, i).plus_unit(j), S(i, j));
    return s;
}

} // namespace

TEST_CASE("second-order relation") {
    const auto su = LieAlgebra::su2();
    MomentState s({0.0, 0.0, 2.0}, 2, 0.5);
    // Delta(x1^2) = Delta(x2^2) = hbar |x3| / 2
    s.set(MultiIndex{2, 0, 0}, 0.5 * 2.0 / 2);
    s.set(MultiIndex{0, 2, 0}, 0.5 * 2.0 / 2);
    auto r = second_order_relation(su, s, 0, 1);
    CHECK(r.saturated);
    CHECK(r.residual == doctest::Approx(0.0));
    CHECK_THROWS_AS((second_order_relation(su, s, 0, 3)), std::out_of_range);

    // sl2r-cosmo pairs give the three published bounds
    const auto sl = LieAlgebra::sl2r_cosmo();
    MomentState t({3.0, -1.2, 0.7}, 2, 0.3);
    CHECK(second_order_relation(sl, t, 0, 1).rhs == doctest::Approx(0.25 * 0.09 * 0.7 * 0.7));
    CHECK(second_order_relation(sl, t, 0, 2).rhs == doctest::Approx(0.25 * 0.09 * 1.2 * 1.2));
    CHECK(second_order_relation(sl, t, 1, 2).rhs == doctest::Approx(0.25 * 0.09 * 3.0 * 3.0));
}

TEST_CASE("schwarz relation for linear pairs matches the second-order form") {
    for (const auto& alg : {LieAlgebra::su2(), LieAlgebra::sl2r_cosmo()}) {
        auto eng = make_engine(alg);
        MomentState s({0.4, -1.1, 2.3}, 2, 0.7);
        s.set(MultiIndex{2, 0, 0}, 1.3);
        s.set(MultiIndex{0, 2, 0}, 0.9);
        s.set(MultiIndex{0, 0, 2}, 2.1);
        s.set(MultiIndex{1, 1, 0}, 0.2);
        s.set(MultiIndex{0, 1, 1}, -0.3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                auto a = schwarz_relation(eng, s, MultiIndex::unit(3, i), MultiIndex::unit(3, j));
                auto b = second_order_relation(alg, s, i, j);
                CHECK(a.lhs == doctest::Approx(b.lhs));
                CHECK(a.rhs == doctest::Approx(b.rhs));
            }
    }
}

TEST_CASE("norm and overlap expansions of the degree-(1,2) relation") {
    for (const auto& alg : {LieAlgebra::su2(), LieAlgebra::sl2r_cosmo()}) {
        auto eng = make_engine(alg);
        auto eps = [&](int a, int b, int c) { return q(alg.eps(a, b, c)); };
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                // ||w_{x_j x_k}||^2
                auto w = functional(inner_product_functional(eng, MultiIndex::from_word(3, {j, k}),
                                                             MultiIndex::from_word(3, {j, k})));
                // matrix-oracle-backed form; the 1/6 terms enter with opposite sign to the
                // printed expansion, the Delta(x_l x_m) weight is 1/4 and a classical
                // hbar^2/4 (eps_jk^m x_m)^2 term appears
                OperatorPolynomial ref = e(eng, {j, j, k, k});
                OperatorPolynomial printed = e(eng, {j, j, k, k});
                Coefficient ex(0);
                for (int l = 0; l < 3; ++l) {
                    ex += eps(j, k, l) * xs(l);
                    for (int m = 0; m < 3; ++m) {
                        ref += e(eng, {k, m}, Coefficient::rational(1, 6) * h2() * eps(j, k, l) * eps(j, l, m));
                        ref -= e(eng, {j, m}, Coefficient::rational(1, 6) * h2() * eps(j, k, l) * eps(k, l, m));
                        ref += e(eng, {l, m}, Coefficient::rational(1, 4) * h2() * eps(j, k, l) * eps(j, k, m));
                        printed -= e(eng, {k, m}, Coefficient::rational(1, 6) * h2() * eps(j, k, l) * eps(j, l, m));
                        printed += e(eng, {j, m}, Coefficient::rational(1, 6) * h2() * eps(j, k, l) * eps(k, l, m));
                        printed -= e(eng, {l, m}, Coefficient::rational(3, 4) * h2() * eps(j, k, l) * eps(j, k, m));
                    }
                }
                ref += OperatorPolynomial::constant(eng, Coefficient::rational(1, 4) * h2() * ex * ex);
                CHECK(w == ref);
                if (j != k) CHECK_FALSE(w == printed);

                for (int i = 0; i < 3; ++i) {
                    // <v_{x_i}, w_{x_j x_k}>: real part and half-hbar imaginary part
                    auto vw = functional(
                        inner_product_functional(eng, MultiIndex::unit(3, i), MultiIndex::from_word(3, {j, k})));
                    OperatorPolynomial r = e(eng, {i, j, k});
                    for (int l = 0; l < 3; ++l) {
                        for (int m = 0; m < 3; ++m)
                            r -= OperatorPolynomial::constant(
                                eng, Coefficient::rational(1, 12) * h2() *
                                         (eps(i, k, l) * eps(l, j, m) + eps(i, j, l) * eps(l, k, m)) * xs(m));
                        const Coefficient ih = Coefficient::rational(1, 2) * Coefficient::i_unit() * Coefficient::hbar();
                        r += e(eng, {k, l}, ih * eps(i, j, l));
                        r += e(eng, {j, l}, ih * eps(i, k, l));
                    }
                    CHECK(vw == r);
                }
            }
    }
}

TEST_CASE("leading third-order form") {
    MomentState s({1.0, 0.0, 0.0}, 4);
    s.set(MultiIndex{2, 0, 0}, 1.5);
    s.set(MultiIndex{0, 2, 2}, 0.8);
    s.set(MultiIndex{1, 1, 1}, 0.4);
    const double l = leading_schwarz_lhs(s, MultiIndex{1, 0, 0}, MultiIndex{0, 1, 1});
    CHECK(l == doctest::Approx(1.5 * 0.8 - 0.16));
}

TEST_CASE("reduction of the three relations") {
    std::mt19937 rng(21);
    for (const auto& alg : {LieAlgebra::su2(), LieAlgebra::sl2r_cosmo()}) {
        auto eng = make_engine(alg);
        for (int t = 0; t < 10; ++t) {
            auto s = leading_surface_state(alg, rng, 0.3);
            // leading constraints only (idx of degree 1, truncated at order 2)
            std::vector<ConstraintExpression> tower;
            auto spec = CasimirSpec::quadratic(eng, Coefficient(0));
            for (int k = 0; k < 3; ++k) tower.push_back(leading_part(effective_constraint(spec, MultiIndex::unit(3, k))));
            auto rep = reduction_check(alg, s, tower);
            CHECK(rep.ok);
            CHECK_FALSE(rep.degenerate);
            CHECK(relation_gradient_rank(alg, s) == 1);

            // a violation of size delta shows up linearly
            auto bad = s;
            const MultiIndex i11{2, 0, 0};
            std::vector<double> d;
            for (double delta : {1e-4, 2e-4, 4e-4}) {
                bad.set(i11, s.moment(i11) + delta);
                d.push_back(reduction_check(alg, bad, tower, 1e-9, 1.0).d12_lhs);
            }
            CHECK(d[1] / d[0] == doctest::Approx(2.0).epsilon(1e-3));
            CHECK(d[2] / d[0] == doctest::Approx(4.0).epsilon(1e-3));
            CHECK_THROWS_AS((reduction_check(alg, bad, tower)), DomainError);
        }
    }
    // x^1 = 0 is flagged, and the multiplied-through form needs no division
    MomentState z({0.0, 1.0, 0.5}, 2);
    z.set(MultiIndex{2, 0, 0}, 1.0);
    auto spec = CasimirSpec::quadratic(make_engine(LieAlgebra::su2()), Coefficient(0));
    std::vector<ConstraintExpression> none;
    CHECK(reduction_check(LieAlgebra::su2(), z, none, 1e-9, 1.0).degenerate);
}

TEST_CASE("reduction on oracle spin-1 states") {
    const auto alg = LieAlgebra::su2();
    auto eng = make_engine(alg);
    auto rep = oracle::build_su2(1.0, 0.5);
    auto spec = CasimirSpec::quadratic(eng, Coefficient(GaussRational(Rational(1, 2))));
    std::vector<ConstraintExpression> tower;
    for (int k = 0; k < 3; ++k) tower.push_back(leading_part(effective_constraint(spec, MultiIndex::unit(3, k))));
    // highest-weight states satisfy the leading conditions exactly
    std::mt19937 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        Eigen::Vector3d axis(n(rng), n(rng), n(rng));
        auto s = oracle::moments_of_vector(rep, oracle::su2_coherent(rep, axis.normalized()), 3);
        auto r = reduction_check(alg, s, tower, 1e-10, 1e-10);
        CHECK(r.ok);
    }
}
