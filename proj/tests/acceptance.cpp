// Acceptance checks 1-8. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include "reference_formulas.hpp"

#include "effcas/constraints.hpp"
#include "effcas/errors.hpp"
#include "effcas/oracle.hpp"
#include "effcas/ordering_identities.hpp"
#include "effcas/sl2_cosmology.hpp"
#include "effcas/uncertainty.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace effcas;

namespace {

// tolerances
constexpr double kIdentityNumeric = 1e-11;
constexpr double kTowerRelative = 1e-10;
constexpr double kDynamicsRelative = 1e-8;
constexpr double kConserved = 1e-10;
constexpr double kUncertDrift = 1e-8;
constexpr double kAsymmetryEquality = 1e-10;
constexpr double kRootProduct = 1e-12;
constexpr double kPsiSat = 1e-9;
constexpr double kSaturation = 1e-9;
constexpr double kReduction = 1e-9;

// runtime budgets in seconds
constexpr double kBudget[9] = {0, 10, 1, 30, 5, 30, 30, 120, 10};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CasimirSpec sl2_spec() {
    return CasimirSpec::quadratic(make_engine(LieAlgebra::sl2r_cosmo()), reference::q(Rational(1, 4)) * reference::h2());
}

CasimirSpec su2_spec(double c) {
    return CasimirSpec::quadratic(make_engine(LieAlgebra::su2()), Coefficient(GaussRational(Rational(c))));
}

long long enumerate(int M, int N) {
    long long count = 0;
    std::vector<int> t(static_cast<std::size_t>(M), 0);
    for (;;) {
        int s = 0;
        for (int v : t) s += v;
        if (s == N) ++count;
        int k = 0;
        while (k < M && ++t[static_cast<std::size_t>(k)] > N) t[static_cast<std::size_t>(k++)] = 0;
        if (k == M) break;
    }
    return count;
}

long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double rel_diff(const sl2::HarmonicState& a, const sl2::HarmonicState& b) {
    const auto x = a.as_array(), y = b.as_array();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num = std::max(num, std::abs(x[i] - y[i]));
        den = std::max(den, std::abs(y[i]));
    }
    return num / den;
}

void criterion1(Outcome& o) {
    PolynomialRing ring;
    int checked = 0;
    for (const auto& alg : {LieAlgebra::su2(), LieAlgebra::sl2r_cosmo()}) {
        auto eng = make_engine(alg);
        std::vector<OperatorPolynomial> g;
        for (int k = 0; k < 3; ++k) g.push_back(OperatorPolynomial::delta_generator(eng, k));
        bool zero = true;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    zero = zero && three_operator_residual(ring, g[a], g[b], g[c]).is_zero();
                    ++checked;
                    for (int d = 0; d < 3; ++d) {
                        zero = zero && four_operator_residual(ring, g[a], g[b], g[c], g[d]).is_zero();
                        ++checked;
                    }
                }
        o.require(zero, "symbolic residual on " + alg.name());
    }
    const double r3 = oracle::check_identity(oracle::Identity::ThreeOperator, 100);
    const double r4 = oracle::check_identity(oracle::Identity::FourOperator, 100);
    o.detail << checked << " symbolic tuples zero; matrix residuals 3-op " << fmt(r3) << ", 4-op " << fmt(r4)
             << " over 100 trials";
    o.require(r3 <= kIdentityNumeric && r4 <= kIdentityNumeric, "matrix residual");
}

void criterion2(Outcome& o) {
    int cases = 0;
    for (int M = 2; M <= 5; ++M)
        for (int N = 2; N <= 8; ++N) {
            o.require(count_moments(M, N) == enumerate(M, N), "count_moments");
            o.require(count_constraint_conditions(M, N) == enumerate(M, N - 1), "count_constraint_conditions");
            o.require(count_constraint_conditions(M, N) == binomial(N + M - 2, M - 1), "binomial");
            ++cases;
        }
    // tower increments on abelian algebras of each dimension with identity metric
    int towers = 0;
    for (int M = 2; M <= 5; ++M) {
        RationalMatrix k(static_cast<std::size_t>(M), std::vector<Rational>(static_cast<std::size_t>(M), Rational(0)));
        for (int i = 0; i < M; ++i) k[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rational(1);
        LieAlgebra alg(M, std::vector<Rational>(static_cast<std::size_t>(M * M * M), Rational(0)), k);
        auto spec = CasimirSpec::quadratic(make_engine(alg, 10), Coefficient(1));
                auto prev = constraint_tower(spec, 2);
        for (int N = 3; N <= 8; ++N) {
            auto tower = constraint_tower(spec, N);
            long long gained = 0;
            for (const auto& c : tower)
                if (c.label.degree() == N - 1 && !c.trivial()) ++gained;
            o.require(static_cast<long long>(tower.size() - prev.size()) == binomial(N + M - 2, M - 1) &&
                          gained == binomial(N + M - 2, M - 1),
                      "tower increment M=" + std::to_string(M) + " N=" + std::to_string(N));
            prev = std::move(tower);
            ++towers;
        }
    }
    o.detail << cases << " (M,N) counts match enumeration; " << towers << " tower increments match C(N+M-2,M-1)";
}

void criterion3(Outcome& o) {
    double worst = 0.0;
    int states = 0, constraints = 0;
    auto su = make_engine(LieAlgebra::su2());
    std::mt19937 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double j : {0.5, 1.0, 1.5, 2.0}) {
        const double hbar = 0.8;
        auto rep = oracle::build_su2(j, hbar);
        auto tower = constraint_tower(su2_spec(hbar * hbar * j * (j + 1)), 4, false);
        std::vector<oracle::Vector> psis;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) psis.push_back(oracle::random_vector(rep.size(), seed));
        for (int t = 0; t < 2; ++t)
            psis.push_back(oracle::su2_coherent(rep, Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized()));
        for (const auto& psi : psis) {
            auto s = oracle::moments_of_vector(rep, psi, 5);
            for (const auto& c : tower) {
                worst = std::max(worst, std::abs(c.evaluate(s)) / std::max(c.scale(s), 1e-300));
                ++constraints;
            }
            ++states;
        }
    }
    auto tower = constraint_tower(sl2_spec(), 4, false);
    auto sl2_state = [&](const oracle::MatrixRep& rep, const oracle::Vector& psi) {
        auto s = oracle::moments_of_vector(rep, psi, 5);
        for (const auto& c : tower) {
            worst = std::max(worst, std::abs(c.evaluate(s)) / std::max(c.scale(s), 1e-300));
            ++constraints;
        }
        ++states;
    };
    for (double n0 : {30.0, 80.0, 200.0, 400.0, 1500.0}) {
        const double sigma = std::sqrt(n0);
        auto [lo, hi] = oracle::gaussian_window(n0, sigma, 5);
        auto rep = oracle::build_sl2_ladder(lo, hi);
        sl2_state(rep, oracle::gaussian_profile(rep, n0, sigma, 0.9));
        sl2_state(rep, oracle::gaussian_pair(rep, n0, sigma, 0.9, 1.4, {0.5, 0.3}));
    }
    o.detail << states << " states, " << constraints << " evaluations, worst relative " << fmt(worst)
             << " (untruncated members, |i| <= 3)";
    o.require(states >= 20, "corpus size");
    o.require(worst <= kTowerRelative, "relative residual");
}

void criterion4(Outcome& o) {
    int forms = 0;
    auto check = [&](bool ok, const std::string& what) {
        o.require(ok, what);
        ++forms;
    };
    auto su = su2_spec(2.0);
    auto sl = sl2_spec();
    check(effective_constraint(su, MultiIndex{0, 0, 0}).canonical() ==
              reference::cas_eff(LieAlgebra::su2(), Coefficient(2)),
          "CasEff su2");
    check(effective_constraint(sl, MultiIndex{0, 0, 0}).canonical() ==
              reference::cas_eff(LieAlgebra::sl2r_cosmo(), reference::q(Rational(1, 4)) * reference::h2()),
          "CasEff sl2");
    for (const auto& spec : {su, sl}) {
        const auto& alg = spec.engine()->algebra();
        for (int k = 0; k < 3; ++k)
            check(leading_part(effective_constraint(spec, MultiIndex::unit(3, k))).canonical() ==
                      reference::third_order_leading(alg, k),
                  "third-order leading part");
    }
    const auto alg = LieAlgebra::su2();
    for (int k = 0; k < 3; ++k)
        for (int l = k; l < 3; ++l) {
            auto c = effective_constraint(su, MultiIndex::unit(3, k).plus_unit(l), true).canonical();
            check(c == reference::fourth_order(alg, k, l), "fourth-order general");
            check(c == reference::fourth_order_simplified(3, k, l, Rational(5, 6)), "fourth-order simplified");
        }
    for (int w = 0; w < 3; ++w)
        check(effective_constraint(sl, MultiIndex::unit(3, w)).canonical() == reference::sl2_third(w, Rational(1, 3)),
              "sl2 third-order reality");
    o.detail << forms << " exact comparisons; references use +5/6 in the contracted fourth-order term and 1/3 in"
             << " the J+- third-order conditions";
}

std::vector<sl2::SolutionConstants> constant_sets(std::uint64_t seed, int count) {
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<sl2::SolutionConstants> out;
    while (static_cast<int>(out.size()) < count) {
        const double hbar = u(rng) < 0.5 ? 1.0 : 0.5;
        const double A = 20.0 + 80.0 * u(rng);
        const double H = (u(rng) < 0.5 ? -1.0 : 1.0) * A * (0.1 + 0.6 * u(rng));
        const double dH2 = 2.0 + 48.0 * u(rng);
        const double lambda0 = u(rng) - 0.5;
        try {
            out.push_back(sl2::SolutionConstants::saturated(A, H, dH2, lambda0, hbar, u(rng) < 0.3));
        } catch (const DomainError&) {
        }
    }
    return out;
}

void criterion5(Outcome& o) {
    double worst = 0.0, conserved = 0.0, raw = 0.0, drift = 0.0;
    const auto sets = constant_sets(31, 12);
    for (const auto& c : sets) {
        const auto start = sl2::closed_form(c, c.lambda0);
        const double u0 = sl2::uncert1_residual(start);
        for (double end : {5.0, -5.0}) {
            const auto tr = sl2::evolve(start, c.lambda0, end, 1e-3, {1e-8, 25});
            for (std::size_t k = 0; k < tr.states.size(); ++k) {
                const auto& s = tr.states[k];
                worst = std::max(worst, rel_diff(s, sl2::closed_form(c, tr.lambda[k])));
                // c1 and (dH)^2 are differences of terms of size dJJ; measure against those terms
                conserved = std::max({conserved, std::abs(s.J.imag() - c.H) / std::abs(c.H),
                                      std::abs(s.dJJ - s.dV2 - c.c1) / s.dJJ,
                                      std::abs(0.5 * (s.dJJ - s.dJ2.real()) - c.dH2()) / s.dJJ});
                raw = std::max({raw, std::abs(s.dJJ - s.dV2 - c.c1) / std::abs(c.c1),
                                std::abs(0.5 * (s.dJJ - s.dJ2.real()) - c.dH2()) / c.dH2()});
                drift = std::max(drift, std::abs(sl2::uncert1_residual(s) - u0) / (s.dV2 * s.dJp2()));
            }
        }
    }
    o.detail << sets.size() << " constant sets over [-5,5] from the bounce: max relative deviation " << fmt(worst)
             << ", conserved drift " << fmt(conserved) << " relative to dJJ (" << fmt(raw)
             << " relative to c1, (dH)^2 themselves), uncert1 drift " << fmt(drift)
             << " (relative to (dV)^2 (dJ+)^2)";
    o.require(worst <= kDynamicsRelative, "closed form");
    o.require(conserved <= kConserved, "conserved quantities");
    o.require(drift <= kUncertDrift, "uncert1 drift");
}

void criterion6(Outcome& o) {
    double worst_eq = 0.0;
    const auto sets = constant_sets(41, 30);
    for (const auto& c : sets) {
        const auto r = sl2::asymmetry(c, true, kAsymmetryEquality);
        worst_eq = std::max(worst_eq, std::abs(r.delta_squared - r.bound_squared) /
                                          std::max(std::abs(r.bound_squared), 1e-300));
        o.require(r.holds, "saturated equality");
    }

    // bounce-centred two-Gaussian superpositions on the ladder
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int strict = 0, explained = 0, total = 0;
    double worst_ratio = 0.0;
    for (int t = 0; t < 60; ++t) {
        const double n0 = 5e3 * std::pow(10.0, u(rng));
        const double sigma = 30.0 + 90.0 * u(rng);
        const double p = std::numbers::pi / 2 + 0.6 * (u(rng) - 0.5);
        const double dp = (1.0 + 2.0 * u(rng)) / sigma;
        const auto b = std::polar(0.3 + 0.7 * u(rng), 2 * std::numbers::pi * u(rng));
        auto [lo, hi] = oracle::gaussian_window(n0, sigma, 2);
        auto rep = oracle::build_sl2_ladder(lo, hi);
        auto s = oracle::moments_of_vector(rep, oracle::gaussian_pair(rep, n0, sigma, p, p + dp, b), 2);
        auto hs = sl2::HarmonicState::from_moments(s);
        sl2::SolutionConstants c;
        try {
            c = sl2::fit_constants(hs, 0.0);
        } catch (const DomainError&) {
            continue;
        }
        ++total;
        const auto r = sl2::asymmetry(c, false);
        if (r.holds) {
            ++strict;
            continue;
        }
        worst_ratio = std::max(worst_ratio, r.delta_squared / r.bound_squared);
        const double ha = c.H * c.H / (c.A * c.A);
        const double s_fit = c.c3 + c.c4, s_lead = ha * (c.c1 - c.c2) + 0.5 * (c.c1 + c.c2);
        if (r.delta_squared - r.bound_squared <= std::abs(s_fit * s_fit - s_lead * s_lead)) ++explained;
    }
    const int violations = total - strict;
    o.detail << sets.size() << " saturated sets, worst relative gap " << fmt(worst_eq) << "; corpus " << total
             << " states: " << strict << " strict, " << violations << " violations";
    if (violations > 0)
        o.detail << " (worst ratio " << fmt(worst_ratio) << ", " << explained
                 << " within the neglected third-order term)";
    o.require(worst_eq <= kAsymmetryEquality, "saturated gap");
    o.require(total >= 50 && strict >= 50, "strict count");
    o.require(explained == violations, "unexplained violation");
}

void criterion7(Outcome& o) {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int mismatches = 0, real_cases = 0;
    for (int t = 0; t < 10000; ++t) {
        sl2::cplx alpha;
        if (t % 5 == 0) {
            alpha = {6.0 * u(rng) - 3.0, 0.0};
            ++real_cases;
        } else {
            const double mod = std::pow(10.0, 6.0 * u(rng) - 3.0);
            const double phase = 2 * std::numbers::pi * u(rng);
            alpha = std::polar(mod, phase);
            if (std::abs(alpha.imag()) < 1e-3) alpha.imag(alpha.imag() < 0 ? -1e-3 : 1e-3);
        }
        const auto e = sl2::coherent_existence(alpha);
        worst = std::max(worst, std::abs(e.k_plus * e.k_minus - 1.0));
        // independent verdict: no normalizable solution iff both roots lie on the unit circle
        const double a = std::abs(alpha + std::sqrt(alpha * alpha - 1.0));
        const double b = std::abs(alpha - std::sqrt(alpha * alpha - 1.0));
        const bool on_circle = std::abs(a - 1.0) < 1e-9 && std::abs(b - 1.0) < 1e-9;
        if (e.exists == on_circle) ++mismatches;
    }
    o.require(worst <= kRootProduct, "k+ k- product");
    o.require(mismatches == 0, "existence verdict");

    const sl2::SaturationTarget targets[] = {{200, 30, 150, 40, -5, 1.0}, {50, 10, 30, 20, 3, 1.0},
                                             {100, 0, 80, 10, 0, 0.5},   {1000, 0, 1000, 60, 0, 1.0},
                                             {400, 20, 300, 25, 8, 1.0}, {300, -40, 250, 30, -6, 0.5}};
    int converged = 0;
    double worst_sat = 0.0, worst_psi = 0.0;
    for (const auto& t : targets) {
        try {
            const auto s = sl2::solve_saturating_state(t);
            if (std::abs(s.alpha.imag()) < 1e-6 * std::abs(s.alpha)) continue;
            worst_psi = std::max(worst_psi, s.psi_sat_residual);
            const double sat = std::abs(s.saturation.residual) / s.saturation.scale;
            worst_sat = std::max(worst_sat, sat);
            if (s.psi_sat_residual <= kPsiSat && sat <= kSaturation) ++converged;
        } catch (const std::exception& e) {
            o.detail << " [solve V=" << t.V << ": " << e.what() << "]";
        }
    }
    o.detail << "10^4 alpha (" << real_cases << " real): max |k+ k- - 1| " << fmt(worst) << ", " << mismatches
             << " verdict mismatches; " << converged << "/" << std::size(targets)
             << " complex-alpha solves, psiSat " << fmt(worst_psi) << ", saturation " << fmt(worst_sat) << "*scale";
    o.require(converged >= 5, "saturating solves");
}

// second-order states satisfying the leading conditions x^j Delta(x_j x_k) = 0 exactly
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

void criterion8(Outcome& o) {
    std::mt19937 rng(23);
    int states = 0, ok = 0, max_rank = 0;
    double worst = 0.0;
    for (const auto& alg : {LieAlgebra::sl2r_cosmo(), LieAlgebra::su2()}) {
        auto spec = CasimirSpec::quadratic(make_engine(alg), Coefficient(0));
        std::vector<ConstraintExpression> tower;
        for (int k = 0; k < 3; ++k) tower.push_back(leading_part(effective_constraint(spec, MultiIndex::unit(3, k))));
        for (int t = 0; t < 15; ++t) {
            auto s = leading_surface_state(alg, rng, 0.3);
            const auto r = reduction_check(alg, s, tower, kReduction);
            worst = std::max({worst, std::abs(r.d12_lhs - r.d12_rhs) / r.scale, std::abs(r.d13_lhs - r.d13_rhs) / r.scale});
            if (r.ok && !r.degenerate) ++ok;
            ++states;
            if (alg.name() == LieAlgebra::sl2r_cosmo().name())
                max_rank = std::max(max_rank, relation_gradient_rank(alg, s));
        }
    }
    o.detail << ok << "/" << states << " states reduce, worst residual " << fmt(worst)
             << "*scale; sl2 relation-gradient rank <= " << max_rank;
    o.require(ok == states && states >= 20, "reduction");
    o.require(max_rank <= 1, "gradient rank");
}

} // namespace

int main() {
    const std::function<void(Outcome&)> checks[] = {criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8};
    const char* names[] = {"ordering identities", "counting",  "tower ground truth", "symbolic formulas",
                           "dynamics",            "asymmetry", "coherent states",    "uncertainty reduction"};
    int failed = 0;
    for (int i = 0; i < 8; ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            checks[i](o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs <= kBudget[i + 1], "runtime budget " + fmt(kBudget[i + 1]) + " s");
        std::printf("criterion %d %-22s %s  %.2fs  %s\n", i + 1, names[i], o.pass ? "PASS" : "FAIL", secs,
                    o.detail.str().c_str());
        if (!o.pass) ++failed;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
