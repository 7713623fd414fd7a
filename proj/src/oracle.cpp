#include "effcas/oracle.hpp"

#include "effcas/errors.hpp"
#include "effcas/ordering_identities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace effcas::oracle {

namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<cd>;

SparseMatrix from_triplets(int n, const std::vector<Triplet>& t) {
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

std::vector<double> expectations(const MatrixRep& rep, const Vector& psi) {
    std::vector<double> x;
    for (const auto& g : rep.generators) x.push_back(psi.dot(g * psi).real());
    return x;
}

Vector apply_delta(const MatrixRep& rep, const std::vector<double>& x, int k, const Vector& v) {
    return rep.generators[static_cast<std::size_t>(k)] * v - x[static_cast<std::size_t>(k)] * v;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    return m;
}

double identity_residual(Identity which, const std::vector<Eigen::MatrixXcd>& m) {
    MatrixRing ring;
    switch (which) {
    case Identity::ThreeOperator: return spectral_norm(three_operator_residual(ring, m[0], m[1], m[2]));
    case Identity::Cubic: return spectral_norm(cubic_residual(ring, m[0], m[1], m[2]));
    case Identity::FourOperator: return spectral_norm(four_operator_residual(ring, m[0], m[1], m[2], m[3]));
    }
    return 0.0;
}

int arity(Identity which) { return which == Identity::FourOperator ? 4 : 3; }

} // namespace

MatrixRep build_su2(double j, double hbar) {
    const double twoj = 2.0 * j;
    if (j <= 0.0 || std::abs(twoj - std::round(twoj)) > 1e-12) throw std::invalid_argument("spin must be a positive half-integer");
    const int D = static_cast<int>(std::lround(twoj)) + 1;
    std::vector<Triplet> tx, ty, tz;
    for (int r = 0; r < D; ++r) {
        const double m = j - r;
        tz.emplace_back(r, r, hbar * m);
        if (r > 0) {
            // S+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, row r-1 holds m+1
            const double s = 0.5 * hbar * std::sqrt(j * (j + 1) - m * (m + 1));
            tx.emplace_back(r - 1, r, s);
            tx.emplace_back(r, r - 1, s);
            ty.emplace_back(r - 1, r, cd(0, -s));
            ty.emplace_back(r, r - 1, cd(0, s));
        }
    }
    MatrixRep rep;
    rep.model = "su2";
    rep.hbar = hbar;
    rep.generators = {from_triplets(D, tx), from_triplets(D, ty), from_triplets(D, tz)};
    return rep;
}

MatrixRep build_sl2_ladder(int n_min, int n_max, double hbar) {
    if (n_min >= n_max) throw std::invalid_argument("ladder window must have n_min < n_max");
    const int D = n_max - n_min + 1;
    std::vector<Triplet> tv, tp, tm;
    for (int r = 0; r < D; ++r) {
        const double n = n_min + r;
        tv.emplace_back(r, r, hbar * (n + 0.5));
        if (r + 1 < D) {
            // J|n> = hbar (n+1)|n+1>
            const double a = hbar * (n + 1);
            tp.emplace_back(r + 1, r, 0.5 * a);
            tp.emplace_back(r, r + 1, 0.5 * a);
            tm.emplace_back(r + 1, r, cd(0, -0.5 * a));
            tm.emplace_back(r, r + 1, cd(0, 0.5 * a));
        }
    }
    MatrixRep rep;
    rep.model = "sl2r-cosmo";
    rep.hbar = hbar;
    rep.n_min = n_min;
    rep.truncated_low = n_min != 0;
    rep.truncated_high = true;
    rep.generators = {from_triplets(D, tv), from_triplets(D, tp), from_triplets(D, tm)};
    return rep;
}

LadderOperators ladder_operators(const MatrixRep& rep) {
    const int D = rep.size();
    SparseMatrix I(D, D);
    I.setIdentity();
    LadderOperators op;
    op.V = rep.generators[0] - I * cd(0.5 * rep.hbar);
    op.J = rep.generators[1] + rep.generators[2] * cd(0, 1);
    op.Jdag = rep.generators[1] - rep.generators[2] * cd(0, 1);
    return op;
}

double tail_mass(const MatrixRep& rep, const Vector& psi, int rows) {
    const int D = static_cast<int>(psi.size());
    rows = std::min(rows, D);
    double m = 0.0;
    if (rep.truncated_low) m += psi.head(rows).squaredNorm();
    if (rep.truncated_high) m += psi.tail(rows).squaredNorm();
    return m;
}

std::complex<double> word_expectation(const MatrixRep& rep, const Vector& psi, const std::vector<int>& word) {
    const auto x = expectations(rep, psi);
    Vector v = psi;
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_delta(rep, x, *it, v);
    return psi.dot(v);
}

MomentState moments_of_vector(const MatrixRep& rep, const Vector& psi, int N, double tail_threshold) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("state vector must be normalized");
    if (tail_mass(rep, psi, 2 * N) > tail_threshold)
        throw DomainError("tail mass near the truncated edge exceeds threshold");
    const int M = rep.dim();
    const auto x = expectations(rep, psi);

    struct Acc {
        cd sum = 0.0;
        double scale = 0.0;
        long count = 0;
    };
    std::map<MultiIndex, Acc> acc;
    // depth-first over words, prepending letters to reuse D_w psi
    std::vector<int> counts(static_cast<std::size_t>(M), 0);
    auto rec = [&](auto&& self, const Vector& v, int depth) -> void {
        if (depth == N) return;
        for (int k = 0; k < M; ++k) {
            Vector w = apply_delta(rep, x, k, v);
            ++counts[static_cast<std::size_t>(k)];
            if (depth + 1 >= 2) {
                Acc& a = acc[MultiIndex(counts)];
                a.sum += psi.dot(w);
                a.scale += w.norm();
                ++a.count;
            }
            self(self, w, depth + 1);
            --counts[static_cast<std::size_t>(k)];
        }
    };
    rec(rec, psi, 0);

    MomentState s(x, N, rep.hbar);
    for (const auto& [idx, a] : acc) {
        const cd m = a.sum / static_cast<double>(a.count);
        const double scale = a.scale / static_cast<double>(a.count);
        if (std::abs(m.imag()) > 1e-11 * std::max(scale, 1e-300))
            throw DomainError("moment " + idx.to_string() + " has an imaginary part");
        s.set(idx, m.real());
    }
    return s;
}

std::complex<double> matrix_expectation(const MatrixRep& rep, const Vector& psi, const OperatorPolynomial& p) {
    const auto x = expectations(rep, psi);
    cd total = 0.0;
    for (const auto& [idx, c] : p.terms()) {
        std::vector<int> word = idx.word();
        cd avg = 0.0;
        long count = 0;
        do {
            avg += word_expectation(rep, psi, word);
            ++count;
        } while (std::next_permutation(word.begin(), word.end()));
        total += c.evaluate(x, rep.hbar) * (avg / static_cast<double>(count));
    }
    return total;
}

double check_identity(Identity which, int trials, std::uint64_t seed, int dim) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<Eigen::MatrixXcd> m;
        for (int k = 0; k < arity(which); ++k) m.push_back(random_matrix(rng, dim));
        worst = std::max(worst, identity_residual(which, m));
    }
    return worst;
}

double check_identity_on_rep(Identity which, const MatrixRep& rep) {
    std::vector<Eigen::MatrixXcd> g;
    for (const auto& s : rep.generators) g.emplace_back(Eigen::MatrixXcd(s));
    const int M = rep.dim(), n = arity(which);
    double worst = 0.0;
    std::vector<int> t(static_cast<std::size_t>(n), 0);
    for (;;) {
        std::vector<Eigen::MatrixXcd> m;
        for (int k : t) m.push_back(g[static_cast<std::size_t>(k)]);
        worst = std::max(worst, identity_residual(which, m));
        int k = 0;
        while (k < n && ++t[static_cast<std::size_t>(k)] == M) t[static_cast<std::size_t>(k++)] = 0;
        if (k == n) break;
    }
    return worst;
}

Vector su2_coherent(const MatrixRep& rep, const Eigen::Vector3d& n) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(rep.size(), rep.size());
    for (int k = 0; k < 3; ++k) H += n[k] * Eigen::MatrixXcd(rep.generators[static_cast<std::size_t>(k)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    return es.eigenvectors().col(rep.size() - 1).normalized();
}

Vector random_vector(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector v(size);
    for (int k = 0; k < size; ++k) v[k] = std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    return v.normalized();
}

Vector gaussian_profile(const MatrixRep& rep, double n0, double sigma, double p) {
    Vector v(rep.size());
    for (int r = 0; r < rep.size(); ++r) {
        const double n = rep.n_min + r;
        const double d = (n - n0) / sigma;
        v[r] = std::exp(-0.25 * d * d) * std::polar(1.0, p * n);
    }
    return v.normalized();
}

Vector gaussian_pair(const MatrixRep& rep, double n0, double sigma, double p1, double p2, std::complex<double> b) {
    Vector v = gaussian_profile(rep, n0, sigma, p1) + b * gaussian_profile(rep, n0, sigma, p2);
    return v.normalized();
}

std::pair<int, int> gaussian_window(double n0, double sigma, int N, double widths) {
    const int w = static_cast<int>(std::ceil(widths * sigma)) + 2 * N + 4;
    const int lo = std::max(0, static_cast<int>(std::floor(n0)) - w);
    return {lo, static_cast<int>(std::ceil(n0)) + w};
}

} // namespace effcas::oracle
