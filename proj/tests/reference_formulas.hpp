#pragma once

// Hand-encoded reference forms of the effective Casimir conditions, written
// independently of the engine from the published formulas. Keys are
// (moment, second moment or zero index) as in ConstraintExpression::canonical.

#include "effcas/constraints.hpp"

namespace effcas::reference {

using Form = std::map<std::pair<MultiIndex, MultiIndex>, Coefficient>;

class Builder {
public:
    explicit Builder(int dim) : dim_(dim) {}

    Builder& add(const MultiIndex& m, const Coefficient& c) { return put(m, MultiIndex(dim_), c); }
    Builder& add(const MultiIndex& a, const MultiIndex& b, const Coefficient& c) {
        return a < b ? put(b, a, c) : put(a, b, c);
    }
    Builder& constant(const Coefficient& c) { return put(MultiIndex(dim_), MultiIndex(dim_), c); }

    Form form() const {
        Form out;
        for (const auto& [k, v] : f_)
            if (!v.is_zero()) out[k] = v;
        return out;
    }

    MultiIndex idx(std::initializer_list<int> letters) const { return MultiIndex::from_word(dim_, letters); }

private:
    Builder& put(const MultiIndex& a, const MultiIndex& b, const Coefficient& c) {
        f_[{a, b}] += c;
        return *this;
    }
    int dim_;
    Form f_;
};

inline Coefficient q(const Rational& r) { return Coefficient(GaussRational(r)); }
inline Coefficient xs(int k) { return Coefficient::x(k); }
inline Coefficient h2() { return Coefficient::hbar() * Coefficient::hbar(); }

/// <C> = k^ij Delta(x_i x_j) + k^ij x_i x_j - c.
inline Form cas_eff(const LieAlgebra& a, const Coefficient& c) {
    const int M = a.dim();
    const auto k = *a.killing_upper();
    Builder b(M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const Coefficient kij = q(k[i][j]);
            b.add(b.idx({i, j}), kij);
            b.constant(kij * xs(i) * xs(j));
        }
    b.constant(-c);
    return b.form();
}

/// Third-order condition k^ij Delta(x_i x_j x_k) - hbar^2/6 k^ij eps_ki^l eps_lj^m x_m + 2 k^ij x_i Delta(x_j x_k).
inline Form third_order(const LieAlgebra& a, int kk) {
    const int M = a.dim();
    const auto k = *a.killing_upper();
    Builder b(M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const Coefficient kij = q(k[i][j]);
            if (kij.is_zero()) continue;
            b.add(b.idx({i, j, kk}), kij);
            b.add(b.idx({j, kk}), Coefficient(2) * kij * xs(i));
            for (int l = 0; l < M; ++l)
                for (int m = 0; m < M; ++m)
                    b.constant(Coefficient::rational(-1, 6) * h2() * kij * q(a.eps(kk, i, l) * a.eps(l, j, m)) * xs(m));
        }
    return b.form();
}

/// Lowest-order part 2 x^j Delta(x_j x_k) with x^j = k^ji x_i.
inline Form third_order_leading(const LieAlgebra& a, int kk) {
    const int M = a.dim();
    const auto k = *a.killing_upper();
    Builder b(M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) b.add(b.idx({j, kk}), Coefficient(2) * q(k[i][j]) * xs(i));
    return b.form();
}

/// On-shell fourth-order condition for the index e_k + e_l, general form.
inline Form fourth_order(const LieAlgebra& a, int kk, int ll) {
    const int M = a.dim();
    const auto k = *a.killing_upper();
    Builder b(M);
    const Coefficient sixth = Coefficient::rational(1, 6) * h2();
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const Coefficient kij = q(k[i][j]);
            if (kij.is_zero()) continue;
            b.add(b.idx({i, kk, ll}), Coefficient(2) * kij * xs(j));
            b.add(b.idx({i, j, kk, ll}), kij);
            b.add(b.idx({i, j}), b.idx({kk, ll}), -kij);
            for (int m = 0; m < M; ++m)
                for (int n = 0; n < M; ++n) {
                    // symmetrization over (k l) with weight 1/2
                    for (auto [p, r] : {std::pair{kk, ll}, std::pair{ll, kk}}) {
                        const Coefficient half = Coefficient::rational(1, 2) * sixth * kij;
                        b.add(b.idx({m, n}), half * q(3 * a.eps(i, p, m) * a.eps(r, j, n)));
                        b.add(b.idx({j, n}), half * q(2 * a.eps(i, p, m) * a.eps(r, m, n)));
                        b.add(b.idx({r, n}), half * q(2 * a.eps(m, j, n) * a.eps(i, p, m)));
                    }
                    b.constant(-sixth * kij * q(a.eps(kk, i, m) * a.eps(ll, j, n)) * xs(m) * xs(n));
                }
        }
    return b.form();
}

/// The same condition with the hbar^2 moment line contracted for totally
/// antisymmetric eps and k = delta: c_lk hbar^2 Delta(x_l x_k) - 1/6 hbar^2 delta_lk Delta(x^i x_i),
/// last line -1/6 hbar^2 (delta_lk x^i x_i - x_l x_k).
inline Form fourth_order_simplified(int M, int kk, int ll, const Rational& c_lk) {
    Builder b(M);
    const Coefficient sixth = Coefficient::rational(1, 6) * h2();
    for (int i = 0; i < M; ++i) {
        b.add(b.idx({i, kk, ll}), Coefficient(2) * xs(i));
        b.add(b.idx({i, i, kk, ll}), Coefficient(1));
        b.add(b.idx({i, i}), b.idx({kk, ll}), Coefficient(-1));
        if (kk == ll) {
            b.add(b.idx({i, i}), -sixth);
            b.constant(-sixth * xs(i) * xs(i));
        }
    }
    b.add(b.idx({kk, ll}), q(c_lk) * h2());
    b.constant(sixth * xs(kk) * xs(ll));
    return b.form();
}

/// Third-order sl2r-cosmo reality conditions for Delta V, Delta J+, Delta J-
/// in the symbols x1 = V + hbar/2, x2 = J+, x3 = J-; gamma is the hbar^2
/// coefficient of the J+- conditions.
inline Form sl2_third(int which, const Rational& gamma) {
    Builder b(3);
    const Coefficient two(2);
    switch (which) {
    case 0:
        b.add(b.idx({0, 1, 1}), 1).add(b.idx({0, 2, 2}), 1).add(b.idx({0, 0, 0}), -1);
        b.add(b.idx({0, 1}), two * xs(1)).add(b.idx({0, 2}), two * xs(2)).add(b.idx({0, 0}), -two * xs(0));
        // -(1/6) hbar^2 (2V + hbar)
        b.constant(Coefficient::rational(-1, 3) * h2() * xs(0));
        break;
    case 1:
        b.add(b.idx({1, 1, 1}), 1).add(b.idx({1, 2, 2}), 1).add(b.idx({1, 0, 0}), -1);
        b.add(b.idx({1, 1}), two * xs(1)).add(b.idx({1, 2}), two * xs(2)).add(b.idx({0, 1}), -two * xs(0));
        b.constant(-q(gamma) * h2() * xs(1));
        break;
    default:
        b.add(b.idx({2, 2, 2}), 1).add(b.idx({1, 1, 2}), 1).add(b.idx({2, 0, 0}), -1);
        b.add(b.idx({2, 2}), two * xs(2)).add(b.idx({1, 2}), two * xs(1)).add(b.idx({0, 2}), -two * xs(0));
        b.constant(-q(gamma) * h2() * xs(2));
        break;
    }
    return b.form();
}

} // namespace effcas::reference
