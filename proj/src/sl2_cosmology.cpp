#include "effcas/sl2_cosmology.hpp"

#include "effcas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace effcas::sl2 {

namespace {

constexpr double kRescale = 1e100;

double scaled(double value, std::initializer_list<double> terms, double floor) {
    double s = floor;
    for (double t : terms) s += std::abs(t);
    return value / s;
}

double max_abs(const std::array<double, 9>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

std::array<double, 9> axpy(const std::array<double, 9>& y, double h, const std::array<double, 9>& k) {
    std::array<double, 9> r{};
    for (std::size_t i = 0; i < 9; ++i) r[i] = y[i] + h * k[i];
    return r;
}

std::array<double, 9> rhs(const std::array<double, 9>& y, double hbar) {
    return ehrenfest_rhs(HarmonicState::from_array(y, hbar)).as_array();
}

std::array<double, 9> rk4_step(const std::array<double, 9>& y, double h, double hbar) {
    const auto k1 = rhs(y, hbar);
    const auto k2 = rhs(axpy(y, 0.5 * h, k1), hbar);
    const auto k3 = rhs(axpy(y, 0.5 * h, k2), hbar);
    const auto k4 = rhs(axpy(y, h, k3), hbar);
    std::array<double, 9> r{};
    for (std::size_t i = 0; i < 9; ++i) r[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
}

// Two-sided solution of 1/2 (n psi_{n-1} + (n+1) psi_{n+1}) - alpha n psi_n + b psi_n = 0,
// upward from n = 0 and downward from n_max, joined at nc.
oracle::Vector recursion(cplx alpha, cplx b, int n_max, int nc) {
    std::vector<cplx> up(static_cast<std::size_t>(nc) + 2), dn(static_cast<std::size_t>(n_max) + 2);
    up[0] = 1.0;
    up[1] = -2.0 * b;
    for (int n = 1; n < nc; ++n) {
        const auto k = static_cast<std::size_t>(n);
        up[k + 1] = (2.0 * (alpha * double(n) - b) * up[k] - double(n) * up[k - 1]) / double(n + 1);
        if (std::abs(up[k + 1]) > kRescale)
            for (std::size_t m = 0; m <= k + 1; ++m) up[m] /= kRescale;
    }
    dn[static_cast<std::size_t>(n_max)] = 1e-300;
    for (int n = n_max; n > nc; --n) {
        const auto k = static_cast<std::size_t>(n);
        dn[k - 1] = (2.0 * (alpha * double(n) - b) * dn[k] - double(n + 1) * dn[k + 1]) / double(n);
        if (std::abs(dn[k - 1]) > kRescale)
            for (std::size_t m = k - 1; m <= static_cast<std::size_t>(n_max); ++m) dn[m] /= kRescale;
    }
    oracle::Vector psi(n_max + 1);
    const cplx s = up[static_cast<std::size_t>(nc)] / dn[static_cast<std::size_t>(nc)];
    for (int n = 0; n <= n_max; ++n)
        psi[n] = n <= nc ? up[static_cast<std::size_t>(n)] : s * dn[static_cast<std::size_t>(n)];
    return psi / psi.norm();
}

cplx branch_s(cplx alpha, int sign) { return double(sign) * alpha * std::sqrt(1.0 - 1.0 / (alpha * alpha)); }

} // namespace

HarmonicState HarmonicState::from_moments(const MomentState& s) {
    if (s.dim() != 3) throw std::invalid_argument("harmonic state needs a 3-generator moment state");
    HarmonicState h;
    h.hbar = s.hbar();
    h.V = s.x()[0] - 0.5 * s.hbar();
    h.J = cplx(s.x()[1], s.x()[2]);
    h.dV2 = s.moment(MultiIndex{2, 0, 0});
    h.dJ2 = cplx(s.moment(MultiIndex{0, 2, 0}) - s.moment(MultiIndex{0, 0, 2}), 2.0 * s.moment(MultiIndex{0, 1, 1}));
    h.dVJ = cplx(s.moment(MultiIndex{1, 1, 0}), s.moment(MultiIndex{1, 0, 1}));
    h.dJJ = s.moment(MultiIndex{0, 2, 0}) + s.moment(MultiIndex{0, 0, 2});
    return h;
}

MomentState HarmonicState::to_moments() const {
    MomentState s({V + 0.5 * hbar, J.real(), J.imag()}, 2, hbar);
    s.set(MultiIndex{2, 0, 0}, dV2);
    s.set(MultiIndex{0, 2, 0}, dJp2());
    s.set(MultiIndex{0, 0, 2}, dJm2());
    s.set(MultiIndex{0, 1, 1}, dJpJm());
    s.set(MultiIndex{1, 1, 0}, dVJp());
    s.set(MultiIndex{1, 0, 1}, dVJm());
    return s;
}

std::array<double, 9> HarmonicState::as_array() const {
    return {V, J.real(), J.imag(), dV2, dJ2.real(), dJ2.imag(), dVJ.real(), dVJ.imag(), dJJ};
}

HarmonicState HarmonicState::from_array(const std::array<double, 9>& a, double hbar) {
    HarmonicState h;
    h.V = a[0];
    h.J = cplx(a[1], a[2]);
    h.dV2 = a[3];
    h.dJ2 = cplx(a[4], a[5]);
    h.dVJ = cplx(a[6], a[7]);
    h.dJJ = a[8];
    h.hbar = hbar;
    return h;
}

double reality_residual(const HarmonicState& s) {
    const double Vt = s.V + 0.5 * s.hbar;
    return std::norm(s.J) - Vt * Vt - (s.dV2 - s.dJJ + 0.25 * s.hbar * s.hbar);
}

std::array<double, 3> reduced_reality_residual(const HarmonicState& s) {
    const double Vt = s.V + 0.5 * s.hbar;
    const double rJ = s.J.real(), iJ = s.J.imag();
    return {Vt * s.dV2 - (rJ * s.dVJ.real() + iJ * s.dVJ.imag()),
            Vt * s.dVJ.real() - 0.5 * (rJ * s.dJ2.real() + iJ * s.dJ2.imag() + rJ * s.dJJ),
            Vt * s.dVJ.imag() - 0.5 * (rJ * s.dJ2.imag() - iJ * s.dJ2.real() + iJ * s.dJJ)};
}

std::vector<double> reality_residual(const MomentState& s, int order) {
    if (s.dim() != 3) throw std::invalid_argument("reality residual needs a 3-generator moment state");
    if (order != 2 && order != 3) throw std::invalid_argument("reality residual order must be 2 or 3");
    if (s.order() < order) throw OrderOverflow("state lacks the moments of order " + std::to_string(order));
    const double Vt = s.x()[0], Jp = s.x()[1], Jm = s.x()[2], h2 = s.hbar() * s.hbar();
    auto m = [&](int a, int b, int c) { return s.moment(MultiIndex{a, b, c}); };
    const auto hs = HarmonicState::from_moments(s);
    {
        const double t[] = {Jp * Jp, Jm * Jm, Vt * Vt, m(2, 0, 0), m(0, 2, 0), m(0, 0, 2)};
        const double r = reality_residual(hs);
        if (order == 2) return {scaled(r, {t[0], t[1], t[2], t[3], t[4], t[5]}, h2)};
    }
    std::vector<double> out;
    {
        const double a = m(1, 2, 0), b = m(1, 0, 2), c = -m(3, 0, 0), d = 2 * Jp * m(1, 1, 0), e = 2 * Jm * m(1, 0, 1),
                     f = -2 * Vt * m(2, 0, 0), g = -h2 / 3.0 * Vt;
        out.push_back(scaled(a + b + c + d + e + f + g, {a, b, c, d, e, f, g}, h2));
    }
    {
        const double a = m(0, 3, 0), b = m(0, 1, 2), c = -m(2, 1, 0), d = 2 * Jp * m(0, 2, 0), e = 2 * Jm * m(0, 1, 1),
                     f = -2 * Vt * m(1, 1, 0), g = -h2 / 3.0 * Jp;
        out.push_back(scaled(a + b + c + d + e + f + g, {a, b, c, d, e, f, g}, h2));
    }
    {
        const double a = m(0, 0, 3), b = m(0, 2, 1), c = -m(2, 0, 1), d = 2 * Jm * m(0, 0, 2), e = 2 * Jp * m(0, 1, 1),
                     f = -2 * Vt * m(1, 0, 1), g = -h2 / 3.0 * Jm;
        out.push_back(scaled(a + b + c + d + e + f + g, {a, b, c, d, e, f, g}, h2));
    }
    const auto red = reduced_reality_residual(hs);
    const double rJ = hs.J.real(), iJ = hs.J.imag();
    out.push_back(scaled(red[0], {Vt * hs.dV2, rJ * hs.dVJ.real(), iJ * hs.dVJ.imag()}, h2));
    out.push_back(scaled(red[1], {Vt * hs.dVJ.real(), rJ * hs.dJ2.real(), iJ * hs.dJ2.imag(), rJ * hs.dJJ}, h2));
    out.push_back(scaled(red[2], {Vt * hs.dVJ.imag(), rJ * hs.dJ2.imag(), iJ * hs.dJ2.real(), iJ * hs.dJJ}, h2));
    return out;
}

double uncert1_residual(const HarmonicState& s) {
    return s.dV2 * s.dJp2() - s.dVJp() * s.dVJp() - 0.25 * s.hbar * s.hbar * s.Jm() * s.Jm();
}

HarmonicState ehrenfest_rhs(const HarmonicState& s) {
    HarmonicState d;
    d.hbar = s.hbar;
    d.V = -s.J.real();
    d.J = cplx(-(s.V + 0.5 * s.hbar), 0.0);
    d.dV2 = -2.0 * s.dVJ.real();
    d.dJ2 = -2.0 * s.dVJ;
    d.dVJ = -0.5 * s.dJ2 - 0.5 * s.dJJ - s.dV2;
    d.dJJ = -2.0 * s.dVJ.real();
    return d;
}

Trajectory evolve(const HarmonicState& initial, double lambda_begin, double lambda_end, double step,
                  const EvolveOptions& options) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (options.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    const double span = lambda_end - lambda_begin;
    const long n = std::max(1L, std::lround(std::abs(span) / step));
    const double h = span / double(n);
    const double hbar = initial.hbar;

    Trajectory t;
    auto coarse = initial.as_array(), fine = coarse;
    double worst = 0.0;
    t.lambda.push_back(lambda_begin);
    t.states.push_back(initial);
    for (long k = 1; k <= n; ++k) {
        coarse = rk4_step(coarse, h, hbar);
        fine = rk4_step(rk4_step(fine, 0.5 * h, hbar), 0.5 * h, hbar);
        std::array<double, 9> diff{};
        for (std::size_t i = 0; i < 9; ++i) diff[i] = (coarse[i] - fine[i]) / 15.0;
        worst = std::max(worst, max_abs(diff) / std::max(max_abs(fine), initial.hbar * initial.hbar));
        if (k % options.sample_every == 0 || k == n) {
            t.lambda.push_back(lambda_begin + double(k) * h);
            t.states.push_back(HarmonicState::from_array(fine, hbar));
        }
    }
    t.error_estimate = worst;
    if (worst > options.tolerance)
        throw ConvergenceError("estimated relative error " + std::to_string(worst) + " exceeds tolerance; try step " +
                               std::to_string(std::abs(h) * std::pow(options.tolerance / worst, 0.25) * 0.5));
    return t;
}

SolutionConstants SolutionConstants::saturated(double A, double H, double dH2, double lambda0, double hbar,
                                               bool swap) {
    if (!(A > 0.0)) throw std::invalid_argument("A must be positive");
    if (H == 0.0) throw DomainError("saturated constants need H != 0");
    if (dH2 < 0.0) throw DomainError("negative (dH)^2");
    SolutionConstants c;
    c.A = A;
    c.H = H;
    c.lambda0 = lambda0;
    c.hbar = hbar;
    c.c1 = A * A - H * H + 0.25 * hbar * hbar;
    c.c2 = c.c1 - 2.0 * dH2;
    const double s = c.c1 + c.c2;
    const double sum = H * H / (A * A) * (c.c1 - c.c2) + 0.5 * s;
    const double product = 0.25 * (H * H * hbar * hbar + 0.25 * s * s);
    const double d2 = sum * sum - 4.0 * product;
    if (d2 < 0.0) throw DomainError("no real saturated solution: (c3 - c4)^2 = " + std::to_string(d2));
    const double d = swap ? -std::sqrt(d2) : std::sqrt(d2);
    c.c3 = 0.5 * (sum + d);
    c.c4 = 0.5 * (sum - d);
    c.c5 = A / (2.0 * H) * (2.0 * c.c4 - 0.5 * s);
    c.c6 = A / (2.0 * H) * (2.0 * c.c3 - 0.5 * s);
    return c;
}

HarmonicState closed_form(const SolutionConstants& c, double lambda) {
    const double tau = lambda - c.lambda0;
    const double em = std::exp(-2.0 * tau), ep = std::exp(2.0 * tau), e1 = std::exp(tau), e_1 = std::exp(-tau);
    const double E = 0.5 * (c.c3 * em + c.c4 * ep);
    HarmonicState s;
    s.hbar = c.hbar;
    s.V = c.A * std::cosh(tau) - 0.5 * c.hbar;
    s.J = cplx(-c.A * std::sinh(tau), c.H);
    s.dV2 = E - 0.25 * (c.c1 + c.c2);
    s.dJ2 = cplx(E + 0.25 * (3.0 * c.c2 - c.c1), -(c.c5 * e1 - c.c6 * e_1));
    s.dVJ = cplx(0.5 * (c.c3 * em - c.c4 * ep), 0.5 * (c.c5 * e1 + c.c6 * e_1));
    s.dJJ = E + 0.25 * (3.0 * c.c1 - c.c2);
    return s;
}

SolutionConstants fit_constants(const HarmonicState& s, double lambda) {
    const double Vt = s.V + 0.5 * s.hbar, rJ = s.J.real();
    if (!(Vt > std::abs(rJ))) throw DomainError("expectation values admit no bounce (|Re J| >= V + hbar/2)");
    SolutionConstants c;
    c.hbar = s.hbar;
    c.A = std::sqrt(Vt * Vt - rJ * rJ);
    const double tau = std::atanh(-rJ / Vt);
    c.lambda0 = lambda - tau;
    c.H = s.J.imag();
    c.c1 = s.dJJ - s.dV2;
    c.c2 = s.dJ2.real() - s.dV2;
    if (c.c1 < c.c2) throw DomainError("inferred (dH)^2 is negative");
    const double E = s.dV2 + 0.25 * (c.c1 + c.c2), F = s.dVJ.real();
    c.c3 = (E + F) * std::exp(2.0 * tau);
    c.c4 = (E - F) * std::exp(-2.0 * tau);
    const double G = s.dJ2.imag(), K = s.dVJ.imag();
    c.c5 = (K - 0.5 * G) * std::exp(-tau);
    c.c6 = (K + 0.5 * G) * std::exp(tau);
    return c;
}

AsymmetryReport asymmetry(const SolutionConstants& c, bool saturated, double tolerance) {
    if (c.A == 0.0) throw std::invalid_argument("A must be nonzero");
    AsymmetryReport r;
    const double q = c.H * c.H / (c.A * c.A);
    r.delta = std::abs(c.c3 - c.c4);
    r.delta_squared = r.delta * r.delta;
    r.bound_squared = q * q * (c.c1 - c.c2) * (c.c1 - c.c2) + q * (c.c1 * c.c1 - c.c2 * c.c2) -
                      c.H * c.H * c.hbar * c.hbar;
    r.real_bound = r.bound_squared >= 0.0;
    r.bound = r.real_bound ? std::sqrt(r.bound_squared) : std::numeric_limits<double>::quiet_NaN();
    r.relative_change = c.c4 != 0.0 ? r.delta / c.c4 : std::numeric_limits<double>::infinity();
    const double scale = std::max({r.delta_squared, std::abs(r.bound_squared), std::numeric_limits<double>::min()});
    if (saturated)
        r.holds = r.real_bound && std::abs(r.delta_squared - r.bound_squared) <= tolerance * scale;
    else
        r.holds = r.delta_squared <= r.bound_squared + tolerance * scale;
    return r;
}

double asymmetry_bound_squared(double A, double H, double dH2, double hbar) {
    const double q = H * H / (A * A);
    return 4.0 * H * H * ((1.0 - q) * dH2 - 0.25 * hbar * hbar + (q - 1.0) * dH2 * dH2 / (A * A));
}

CoherentExistence coherent_existence(cplx alpha) {
    CoherentExistence e;
    const cplx r = std::sqrt(alpha * alpha - 1.0);
    const cplx p = alpha + r, m = alpha - r;
    // the larger root is accurate; the other follows from k+ k- = 1
    if (std::abs(p) >= std::abs(m)) {
        e.k_plus = p;
        e.k_minus = 1.0 / p;
    } else {
        e.k_minus = m;
        e.k_plus = 1.0 / m;
    }
    e.exists = !(alpha.imag() == 0.0 && std::abs(alpha.real()) <= 1.0);
    return e;
}

cplx saturation_alpha(const HarmonicState& s) {
    if (!(s.dV2 > 0.0)) throw DomainError("(dV)^2 must be positive");
    return cplx(s.dVJp(), 0.5 * s.hbar * s.Jm()) / s.dV2;
}

double psi_sat_residual(const oracle::MatrixRep& rep, const oracle::Vector& psi) {
    const auto hs = HarmonicState::from_moments(oracle::moments_of_vector(rep, psi, 2, 1.0));
    const cplx alpha = saturation_alpha(hs);
    const cplx beta = alpha * hs.V - hs.Jp();
    const auto op = oracle::ladder_operators(rep);
    const oracle::Vector Jp = 0.5 * (op.J * psi + op.Jdag * psi);
    const oracle::Vector r = Jp - alpha * (op.V * psi) + beta * psi;
    return r.norm();
}

SaturatedSolution solve_saturating_state(const SaturationTarget& target, const SaturationOptions& options) {
    const double hbar = target.hbar;
    HarmonicState t;
    t.hbar = hbar;
    t.V = target.V;
    t.J = cplx(target.Jp, target.Jm);
    t.dV2 = target.dV2;
    t.dVJ = cplx(target.dVJp, 0.0);
    cplx alpha = saturation_alpha(t);
    if (!coherent_existence(alpha).exists)
        throw DomainError("no normalizable solution: alpha is real with |alpha| <= 1");
    if (target.V < 0.0) throw DomainError("the discrete series needs V >= 0");

    const int nc = static_cast<int>(std::floor(target.V / hbar));
    const int n_max = options.n_max > 0
                          ? options.n_max
                          : nc + static_cast<int>(std::max(400.0, 20.0 * std::sqrt(target.dV2) / hbar));
    if (n_max <= nc + 1) throw std::invalid_argument("window too small");
    const auto rep = oracle::build_sl2_ladder(0, n_max, hbar);
    const cplx b_target = (alpha * target.V - target.Jp) / hbar;

    // pick the branch of s and the level m whose exact beta is nearest the target
    int sign = 1, level = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int sg : {1, -1}) {
        const cplx s = branch_s(alpha, sg);
        const double m = std::max(0.0, std::round(((b_target + 0.5 * alpha) / s).real() - 0.5));
        const cplx b = s * (m + 0.5) - 0.5 * alpha;
        double res = std::numeric_limits<double>::infinity();
        try {
            res = psi_sat_residual(rep, recursion(alpha, b, n_max, nc));
        } catch (const DomainError&) {
        }
        if (res < best) {
            best = res;
            sign = sg;
            level = static_cast<int>(m);
        }
    }

    SaturatedSolution out;
    out.n_max = n_max;
    out.level = level;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const cplx b = branch_s(alpha, sign) * (level + 0.5) - 0.5 * alpha;
        out.psi = recursion(alpha, b, n_max, nc);
        const cplx next = saturation_alpha(HarmonicState::from_moments(oracle::moments_of_vector(rep, out.psi, 2, 1.0)));
        out.iterations = it;
        out.alpha = alpha;
        out.beta = b * hbar;
        if (std::abs(next - alpha) < options.alpha_tolerance * std::max(1.0, std::abs(alpha))) break;
        if (it == options.max_iterations) throw ConvergenceError("alpha iteration did not converge");
        alpha += options.damping * (next - alpha);
    }

    out.tail = oracle::tail_mass(rep, out.psi, std::max(40, (n_max - nc) / 10));
    if (out.tail > options.tail_threshold)
        throw DomainError("tail mass " + std::to_string(out.tail) + " at the window edge; widen the window");
    const auto ms = oracle::moments_of_vector(rep, out.psi, 2, 1.0);
    out.achieved = HarmonicState::from_moments(ms);
    out.psi_sat_residual = psi_sat_residual(rep, out.psi);
    out.saturation = second_order_relation(LieAlgebra::sl2r_cosmo(), ms, 0, 1, 1e-9);
    return out;
}

} // namespace effcas::sl2
