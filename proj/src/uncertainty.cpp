#include "effcas/uncertainty.hpp"

#include "effcas/errors.hpp"

#include <cmath>

namespace effcas {

namespace {

MultiIndex pair_index(int M, int a, int b) { return MultiIndex::unit(M, a).plus_unit(b); }

double sig(const MomentState& s, int a, int b) { return s.moment(pair_index(s.dim(), a, b)); }

std::vector<double> raised(const LieAlgebra& alg, const std::vector<double>& x) {
    const auto k = alg.killing_upper();
    if (!k) throw DomainError("algebra has no invertible Killing form");
    std::vector<double> up(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) up[i] += (*k)[i][j].get_d() * x[j];
    return up;
}

double pair_lhs(const MomentState& s, int i, int j) { return sig(s, i, i) * sig(s, j, j) - sig(s, i, j) * sig(s, i, j); }

double pair_rhs(const LieAlgebra& alg, const MomentState& s, int i, int j) {
    double e = 0.0;
    for (int k = 0; k < alg.dim(); ++k) e += alg.eps(i, j, k).get_d() * s.x()[static_cast<std::size_t>(k)];
    return 0.25 * s.hbar() * s.hbar() * e * e;
}

} // namespace

SchwarzResidual make_residual(double lhs, double rhs, double hbar, double tolerance) {
    SchwarzResidual r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = lhs - rhs;
    r.scale = std::max({std::abs(lhs), std::abs(rhs), hbar * hbar});
    r.saturated = std::abs(r.residual) <= tolerance * r.scale;
    return r;
}

SchwarzResidual second_order_relation(const LieAlgebra& algebra, const MomentState& state, int i, int j,
                                      double tolerance) {
    if (i < 0 || j < 0 || i >= state.dim() || j >= state.dim()) throw std::out_of_range("generator index");
    return make_residual(pair_lhs(state, i, j), pair_rhs(algebra, state, i, j), state.hbar(), tolerance);
}

OperatorPolynomial inner_product_functional(const EnginePtr& engine, const MultiIndex& a, const MultiIndex& b) {
    return multiply(OperatorPolynomial::basis(engine, a), OperatorPolynomial::basis(engine, b));
}

SchwarzResidual schwarz_relation(const EnginePtr& engine, const MomentState& state, const MultiIndex& pol1,
                                 const MultiIndex& pol2, double tolerance) {
    const double vv = inner_product_functional(engine, pol1, pol1).expectation(state).real();
    const double ww = inner_product_functional(engine, pol2, pol2).expectation(state).real();
    const auto vw = inner_product_functional(engine, pol1, pol2).expectation(state);
    return make_residual(vv * ww - vw.real() * vw.real(), vw.imag() * vw.imag(), state.hbar(), tolerance);
}

double leading_schwarz_lhs(const MomentState& state, const MultiIndex& a, const MultiIndex& b) {
    const double m = state.moment(a + b);
    return state.moment(a + a) * state.moment(b + b) - m * m;
}

ReductionReport reduction_check(const LieAlgebra& algebra, const MomentState& state,
                                const std::vector<ConstraintExpression>& tower, double tolerance,
                                double tower_tolerance) {
    if (algebra.dim() != 3 || state.dim() != 3) throw std::invalid_argument("reduction check needs a 3-dimensional algebra");
    ReductionReport r;
    const double floor = state.hbar() * state.hbar();
    for (const auto& c : tower)
        r.tower_residual = std::max(r.tower_residual, std::abs(c.evaluate(state)) / std::max(c.scale(state), floor));
    if (r.tower_residual > tower_tolerance)
        throw DomainError("state violates the constraint tower (relative residual " + std::to_string(r.tower_residual) + ")");

    const auto up = raised(algebra, state.x());
    const double a1 = up[0] * up[0], a2 = up[1] * up[1], a3 = up[2] * up[2];
    const double L12 = pair_lhs(state, 0, 1), L13 = pair_lhs(state, 0, 2), L23 = pair_lhs(state, 1, 2);
    const double R12 = pair_rhs(algebra, state, 0, 1), R13 = pair_rhs(algebra, state, 0, 2),
                 R23 = pair_rhs(algebra, state, 1, 2);
    r.d12_lhs = a1 * L12 - a3 * L23;
    r.d12_rhs = a1 * R12 - a3 * R23;
    r.d13_lhs = a1 * L13 - a2 * L23;
    r.d13_rhs = a1 * R13 - a2 * R23;
    r.scale = std::max({std::abs(a1 * L12), std::abs(a3 * L23), std::abs(a1 * L13), std::abs(a2 * L23),
                        std::abs(a1 * R12), std::abs(a3 * R23), floor * floor});
    const double xnorm = a1 + a2 + a3;
    r.degenerate = a1 <= 1e-24 * std::max(xnorm, 1e-300);
    r.ok = std::max({std::abs(r.d12_lhs), std::abs(r.d12_rhs), std::abs(r.d13_lhs), std::abs(r.d13_rhs)}) <=
           tolerance * r.scale;
    return r;
}

int relation_gradient_rank(const LieAlgebra& algebra, const MomentState& state, double rel_threshold) {
    const int M = state.dim();
    const auto idx = indices_of_degree(M, 2);
    const auto n = static_cast<Eigen::Index>(idx.size());
    auto pos = [&](int a, int b) {
        const MultiIndex t = pair_index(M, a, b);
        for (Eigen::Index k = 0; k < n; ++k)
            if (idx[static_cast<std::size_t>(k)] == t) return k;
        return Eigen::Index(-1);
    };
    const auto up = raised(algebra, state.x());

    // leading constraints x^j Delta(x_j x_k) = 0
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, n);
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < M; ++j) A(k, pos(j, k)) += up[static_cast<std::size_t>(j)];

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) pairs.emplace_back(i, j);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), n);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const auto row = static_cast<Eigen::Index>(p);
        G(row, pos(i, i)) += sig(state, j, j);
        G(row, pos(j, j)) += sig(state, i, i);
        G(row, pos(i, j)) += -2.0 * sig(state, i, j);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svdA(A, Eigen::ComputeFullV);
    const auto& sa = svdA.singularValues();
    Eigen::Index rankA = 0;
    for (Eigen::Index k = 0; k < sa.size(); ++k)
        if (sa[k] > 1e-12 * std::max(sa[0], 1e-300)) ++rankA;
    const Eigen::MatrixXd tangent = svdA.matrixV().rightCols(n - rankA);
    const Eigen::MatrixXd P = G * tangent;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > rel_threshold * sv[0]) ++r;
    return r;
}

} // namespace effcas
