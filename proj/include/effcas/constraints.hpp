#pragma once

#include "effcas/operator_polynomial.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace effcas {

/// Casimir operator in uncentered generators together with its value c;
/// the constraint operator is casimir - c.
struct CasimirSpec {
    OperatorPolynomial casimir;
    Coefficient value;

    /// k^ij x_i x_j - c with the algebra's upper Killing metric.
    static CasimirSpec quadratic(const EnginePtr& engine, const Coefficient& value);

    const EnginePtr& engine() const { return casimir.engine(); }
    /// casimir - c in the centered basis.
    OperatorPolynomial constraint_operator() const;
    /// Classical constraint polynomial C(x) (hbar-free part of the identity coefficient).
    Coefficient classical() const;
};

/// One term coeff * Delta(moment) [* Delta(moment2)]. coeff is a polynomial
/// in x and carries hbar^hbar_power.
struct ConstraintTerm {
    MultiIndex moment;
    std::optional<MultiIndex> moment2;
    Coefficient coeff;
    int hbar_power = 0;
    bool classical_factor = false;
    int order = 0;
};

struct ConstraintExpression {
    MultiIndex label;
    std::vector<ConstraintTerm> terms;

    bool trivial() const { return terms.empty(); }
    int max_order() const;
    /// Highest moment degree referenced.
    int max_moment_degree() const;
    double evaluate(const MomentState& state) const;
    /// Derivative with respect to each moment of degree lo..hi (MultiIndex order).
    Eigen::VectorXd gradient(const MomentState& state, int lo, int hi) const;
    /// Magnitude used for relative tolerances: sum of |term values|.
    double scale(const MomentState& state) const;
    /// Terms merged by (moment, moment2), flags dropped; for identity checks.
    std::map<std::pair<MultiIndex, MultiIndex>, Coefficient> canonical() const;
    nlohmann::json to_json() const;
    /// Inverse of to_json. Throws ParseError on malformed input.
    static ConstraintExpression from_json(const nlohmann::json& j);
};

/// <e_idx (C - c)>. With on_shell, subtracts <C - c> Delta(x^idx) for idx != 0.
ConstraintExpression effective_constraint(const CasimirSpec& spec, const MultiIndex& idx, bool on_shell = false);

/// Lowest-order hbar-free terms: the gradient part sum_k dC/dx_k Delta(x^{idx+e_k}),
/// or the degree-2 part for idx = 0.
ConstraintExpression leading_part(const ConstraintExpression& c);

/// Drops terms of semiclassical order above N.
ConstraintExpression truncate(const ConstraintExpression& c, int N);

/// Constraints with |idx| <= N-1, truncated at N unless truncated = false.
std::vector<ConstraintExpression> constraint_tower(const CasimirSpec& spec, int N, bool truncated = true,
                                                   bool on_shell = false);

Eigen::VectorXd impose(const std::vector<ConstraintExpression>& tower, const MomentState& state);

struct ProjectOptions {
    double damping = 1e-3;
    int max_iterations = 200;
    double tolerance = 1e-10;
};

struct ProjectResult {
    MomentState state;
    int iterations = 0;
    double residual = 0.0;
};

/// Damped least squares on the moments (x fixed) until every residual is
/// below tolerance * scale. Throws ConvergenceError otherwise.
ProjectResult project(const std::vector<ConstraintExpression>& tower, const MomentState& state,
                      const ProjectOptions& options = {});

/// Numeric rank of the moment gradients of the tower; singular values above
/// rel_threshold * largest count.
int jacobian_rank(const std::vector<ConstraintExpression>& tower, const MomentState& state,
                  double rel_threshold = 1e-8);

} // namespace effcas
