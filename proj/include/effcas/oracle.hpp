#pragma once

#include "effcas/moment_state.hpp"
#include "effcas/operator_polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace effcas::oracle {

using SparseMatrix = Eigen::SparseMatrix<std::complex<double>>;
using Vector = Eigen::VectorXcd;

/// Concrete matrices for the generators. For ladder reps the window edges
/// that do not coincide with an invariant subspace boundary are truncated.
struct MatrixRep {
    std::string model;
    std::vector<SparseMatrix> generators;
    double hbar = 1.0;
    int n_min = 0;
    /// Basis rows within edge_rows of a truncated edge are considered unreliable.
    bool truncated_low = false;
    bool truncated_high = false;

    int size() const { return static_cast<int>(generators.empty() ? 0 : generators[0].rows()); }
    int dim() const { return static_cast<int>(generators.size()); }
};

/// Spin-j matrices x_k = hbar S_k, [x_i, x_j] = i hbar eps_ijk x_k.
MatrixRep build_su2(double j, double hbar = 1.0);

/// Discrete-series ladder on n_min..n_max: V|n> = hbar n|n>, J|n> = hbar (n+1)|n+1>.
/// Generators are (V + hbar/2, J+, J-) to match the sl2r-cosmo algebra.
MatrixRep build_sl2_ladder(int n_min, int n_max, double hbar = 1.0);

/// Unshifted V, J and J^dagger of a ladder rep.
struct LadderOperators {
    SparseMatrix V, J, Jdag;
};
LadderOperators ladder_operators(const MatrixRep& rep);

/// Probability mass within `rows` rows of each truncated edge.
double tail_mass(const MatrixRep& rep, const Vector& psi, int rows);

/// <psi| Dx_{w1} ... Dx_{wn} |psi> with centered generators.
std::complex<double> word_expectation(const MatrixRep& rep, const Vector& psi, const std::vector<int>& word);

/// Expectation values and Weyl-ordered moments to order N by averaging
/// every ordering. Throws DomainError on tail-mass or imaginary-part violations.
MomentState moments_of_vector(const MatrixRep& rep, const Vector& psi, int N, double tail_threshold = 1e-10);

/// <psi|p|psi> with p's basis elements realized as symmetrized matrix products.
std::complex<double> matrix_expectation(const MatrixRep& rep, const Vector& psi, const OperatorPolynomial& p);

enum class Identity { ThreeOperator, FourOperator, Cubic };

/// Largest operator-norm residual of an ordering identity over random
/// complex dim x dim matrices with entries uniform in the unit disc.
double check_identity(Identity which, int trials, std::uint64_t seed = 12345, int dim = 5);

/// Residual of the identity on algebra matrices (all ordered generator tuples).
double check_identity_on_rep(Identity which, const MatrixRep& rep);

// Test-state corpus.

/// Highest-weight vector along the unit direction n.
Vector su2_coherent(const MatrixRep& rep, const Eigen::Vector3d& n);
/// Normalized random vector, entries uniform in the unit disc.
Vector random_vector(int size, std::uint64_t seed);

/// psi_n proportional to exp(-(n-n0)^2/(4 sigma^2) + i p n) on the rep's window.
Vector gaussian_profile(const MatrixRep& rep, double n0, double sigma, double p);
/// Normalized a*g1 + b*g2 of two Gaussian profiles.
Vector gaussian_pair(const MatrixRep& rep, double n0, double sigma, double p1, double p2, std::complex<double> b);

/// Window [max(0, n0 - w), n0 + w] with w covering `widths` Gaussian widths plus margin.
std::pair<int, int> gaussian_window(double n0, double sigma, int N, double widths = 12.0);

} // namespace effcas::oracle
