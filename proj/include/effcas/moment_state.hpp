#pragma once

#include "effcas/multi_index.hpp"

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace effcas {

/// Expectation values x_i and Weyl-ordered moments of degree 2..N.
/// Degree-0 and degree-1 moments are implicit (1 and 0); absent keys are 0.
class MomentState {
public:
    MomentState(std::vector<double> x, int order, double hbar = 1.0);

    int dim() const { return static_cast<int>(x_.size()); }
    int order() const { return order_; }
    double hbar() const { return hbar_; }
    const std::vector<double>& x() const { return x_; }
    const std::map<MultiIndex, double>& moments() const { return moments_; }

    /// Stores a moment; throws for degree < 2 or > order.
    void set(const MultiIndex& idx, double value);
    double moment(const MultiIndex& idx) const;
    bool has(const MultiIndex& idx) const;

    /// Second-order moment matrix Sigma_ij = Delta(x_i x_j).
    Eigen::MatrixXd sigma() const;

    /// Moments of degree lo..hi flattened in MultiIndex order.
    Eigen::VectorXd moment_vector(int lo, int hi) const;
    void set_moment_vector(int lo, int hi, const Eigen::VectorXd& v);

    /// Copy with order lowered (dropping higher moments).
    MomentState truncated(int order) const;

private:
    std::vector<double> x_;
    std::map<MultiIndex, double> moments_;
    int order_;
    double hbar_;
};

} // namespace effcas
