#pragma once

#include "effcas/constraints.hpp"

namespace effcas {

/// Schwarz inequality ||v||^2 ||w||^2 >= |<v,w>|^2 split as lhs >= rhs with
/// lhs = ||v||^2 ||w||^2 - (Re <v,w>)^2 and rhs = (Im <v,w>)^2.
struct SchwarzResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double scale = 0.0;
    bool saturated = false;
};

SchwarzResidual make_residual(double lhs, double rhs, double hbar, double tolerance);

/// Delta(x_i^2) Delta(x_j^2) - Delta(x_i x_j)^2 >= hbar^2/4 (eps_ij^k x_k)^2.
SchwarzResidual second_order_relation(const LieAlgebra& algebra, const MomentState& state, int i, int j,
                                      double tolerance = 1e-10);

/// Exact relation for v = e_pol1 psi, w = e_pol2 psi, expanded by the engine.
SchwarzResidual schwarz_relation(const EnginePtr& engine, const MomentState& state, const MultiIndex& pol1,
                                 const MultiIndex& pol2, double tolerance = 1e-10);

/// Moment functionals entering schwarz_relation: <e_a e_b> as a polynomial.
OperatorPolynomial inner_product_functional(const EnginePtr& engine, const MultiIndex& a, const MultiIndex& b);

/// Lowest-order form Delta(x^{2a}) Delta(x^{2b}) - Delta(x^{a+b})^2.
double leading_schwarz_lhs(const MomentState& state, const MultiIndex& a, const MultiIndex& b);

struct ReductionReport {
    /// (x^1)^2 L12 - (x^3)^2 L23 and (x^1)^2 L13 - (x^2)^2 L23, with L the
    /// left-hand sides; the *_rhs entries are the same combinations of the bounds.
    double d12_lhs = 0.0, d12_rhs = 0.0;
    double d13_lhs = 0.0, d13_rhs = 0.0;
    double scale = 0.0;
    double tower_residual = 0.0;
    bool degenerate = false;
    bool ok = false;
};

/// Leading-order reduction of the three second-order relations of a
/// 3-dimensional algebra to one, using multiplied-through forms. Throws
/// DomainError if the state violates the tower by more than tower_tolerance.
ReductionReport reduction_check(const LieAlgebra& algebra, const MomentState& state,
                                const std::vector<ConstraintExpression>& tower, double tolerance = 1e-9,
                                double tower_tolerance = 1e-8);

/// Rank of the gradients of the three pair relations (second-order moments,
/// x fixed) restricted to the tangent space of the leading constraints.
int relation_gradient_rank(const LieAlgebra& algebra, const MomentState& state, double rel_threshold = 1e-8);

} // namespace effcas
