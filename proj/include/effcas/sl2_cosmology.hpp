#pragma once

#include "effcas/moment_state.hpp"
#include "effcas/oracle.hpp"
#include "effcas/uncertainty.hpp"

#include <array>
#include <complex>
#include <vector>

namespace effcas::sl2 {

using cplx = std::complex<double>;

/// Second-order state of the (V, J, J^dagger) model in complex variables.
/// J^* moments are conjugates of the stored ones.
struct HarmonicState {
    double V = 0.0;
    cplx J;
    double dV2 = 0.0;
    cplx dJ2;
    cplx dVJ;
    double dJJ = 0.0;
    double hbar = 1.0;

    double Jp() const { return J.real(); }
    double Jm() const { return J.imag(); }
    double dJp2() const { return 0.5 * (dJ2.real() + dJJ); }
    double dJm2() const { return 0.5 * (dJJ - dJ2.real()); }
    double dJpJm() const { return 0.5 * dJ2.imag(); }
    double dVJp() const { return dVJ.real(); }
    double dVJm() const { return dVJ.imag(); }

    /// From a MomentState over sl2r-cosmo, whose first coordinate is V + hbar/2.
    static HarmonicState from_moments(const MomentState& s);
    /// Order-2 MomentState in the (V + hbar/2, J+, J-) basis.
    MomentState to_moments() const;

    std::array<double, 9> as_array() const;
    static HarmonicState from_array(const std::array<double, 9>& a, double hbar);
};

/// |J|^2 - (V+hbar/2)^2 - (dV2 - dJJ + hbar^2/4).
double reality_residual(const HarmonicState& s);

/// The three leading-order relations (V+hbar/2)(dV)^2 - Re(J^* dVJ) and the
/// real and imaginary parts of the dVJ relation.
std::array<double, 3> reduced_reality_residual(const HarmonicState& s);

/// order 2: {second-order residual}. order 3: {V, J+, J- third-order
/// conditions, then the three reduced relations}. The state is in the
/// sl2r-cosmo basis. Each residual is divided by its term-magnitude scale.
std::vector<double> reality_residual(const MomentState& s, int order);

/// (dV)^2 (dJ+)^2 - dVJ+^2 - hbar^2 J-^2 / 4.
double uncert1_residual(const HarmonicState& s);

/// d/dlambda of every stored field under H = J-.
HarmonicState ehrenfest_rhs(const HarmonicState& s);

struct Trajectory {
    std::vector<double> lambda;
    std::vector<HarmonicState> states;
    double error_estimate = 0.0;
};

struct EvolveOptions {
    double tolerance = 1e-8;
    int sample_every = 1;
};

/// Fixed-step RK4 with a half-step Richardson estimate. Throws
/// ConvergenceError if the estimated relative error exceeds the tolerance.
Trajectory evolve(const HarmonicState& initial, double lambda_begin, double lambda_end, double step,
                  const EvolveOptions& options = {});

struct SolutionConstants {
    double A = 1.0;
    double lambda0 = 0.0;
    double H = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0;
    double hbar = 1.0;

    double dH2() const { return 0.5 * (c1 - c2); }

    /// Constants of a state saturating the (V, J+) relation, with c1 from the
    /// exact second-order reality condition. c3 >= c4 unless swap is set.
    /// Throws DomainError when no real solution exists.
    static SolutionConstants saturated(double A, double H, double dH2, double lambda0, double hbar,
                                       bool swap = false);
};

/// Moments expanded around the bounce, tau = lambda - lambda0.
HarmonicState closed_form(const SolutionConstants& c, double lambda);

/// Inverse of closed_form at the given lambda. Throws DomainError if the
/// expectation values admit no bounce (|Re J| >= V + hbar/2) or if the
/// inferred (dH)^2 is negative.
SolutionConstants fit_constants(const HarmonicState& s, double lambda = 0.0);

struct AsymmetryReport {
    double delta = 0.0;
    double delta_squared = 0.0;
    double bound_squared = 0.0;
    double bound = 0.0;
    double relative_change = 0.0;
    bool real_bound = true;
    bool holds = false;
};

/// bound^2 = (H/A)^4 (c1-c2)^2 + (H/A)^2 (c1^2 - c2^2) - H^2 hbar^2. With
/// c1 = A^2 - H^2 this is 4 H^2 ((1 - H^2/A^2) dH^2 - hbar^2/4 + (H^2/A^2 - 1) dH^4/A^2).
/// saturated: equality to tolerance; otherwise delta^2 <= bound^2 (1 + tolerance).
AsymmetryReport asymmetry(const SolutionConstants& c, bool saturated, double tolerance = 1e-10);

/// The dH form of the bound with c1 = A^2 - H^2 substituted.
double asymmetry_bound_squared(double A, double H, double dH2, double hbar);

struct CoherentExistence {
    bool exists = false;
    cplx k_plus, k_minus;
};

CoherentExistence coherent_existence(cplx alpha);

/// alpha = (dVJ+ + i hbar J- / 2) / (dV)^2.
cplx saturation_alpha(const HarmonicState& s);

struct SaturationTarget {
    double V = 0.0, Jp = 0.0, Jm = 0.0, dV2 = 1.0, dVJp = 0.0;
    double hbar = 1.0;
};

struct SaturationOptions {
    int n_max = -1;  // default: V/hbar + max(400, 20 dV/hbar)
    int max_iterations = 50;
    double damping = 0.5;
    double alpha_tolerance = 1e-12;
    double tail_threshold = 1e-8;
};

struct SaturatedSolution {
    oracle::Vector psi;  // coefficients of |0>..|n_max>
    int n_max = 0;
    int level = 0;
    cplx alpha, beta;
    int iterations = 0;
    HarmonicState achieved;
    double psi_sat_residual = 0.0;
    double tail = 0.0;
    SchwarzResidual saturation;
};

/// Self-consistent solution of the saturation difference equation on the
/// discrete series n >= 0. beta is placed on the nearest exact level of the
/// recursion, so the achieved expectation values differ from the target.
/// Throws DomainError when alpha is real with |alpha| <= 1 or the tail is too
/// heavy, ConvergenceError when the alpha iteration stalls.
SaturatedSolution solve_saturating_state(const SaturationTarget& target, const SaturationOptions& options = {});

/// ||(J+ - alpha V + beta) psi|| with alpha, beta taken from psi's own moments.
double psi_sat_residual(const oracle::MatrixRep& rep, const oracle::Vector& psi);

} // namespace effcas::sl2
