#pragma once

#include "effcas/operator_polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <vector>

namespace effcas {

/// Ring operations used to write the ordering identities once for both the
/// symbolic engine and dense matrices.
struct PolynomialRing {
    using T = OperatorPolynomial;
    T mul(const T& a, const T& b) const { return multiply(a, b); }
    T scale(const T& a, long num, long den) const { return a * Coefficient(GaussRational(make_rational(num, den))); }
    T sym(const std::vector<T>& f) const { return symmetrized_product(f); }
};

struct MatrixRing {
    using T = Eigen::MatrixXcd;
    T mul(const T& a, const T& b) const { return a * b; }
    T scale(const T& a, long num, long den) const { return a * (static_cast<double>(num) / static_cast<double>(den)); }
    T sym(const std::vector<T>& f) const {
        std::vector<int> perm(f.size());
        for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
        T sum = T::Zero(f[0].rows(), f[0].cols());
        long count = 0;
        do {
            T prod = f[static_cast<std::size_t>(perm[0])];
            for (std::size_t k = 1; k < perm.size(); ++k) prod = prod * f[static_cast<std::size_t>(perm[k])];
            sum += prod;
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return sum / static_cast<double>(count);
    }
};

namespace detail {

template <class R>
typename R::T comm(const R& r, const typename R::T& a, const typename R::T& b) {
    return r.mul(a, b) - r.mul(b, a);
}

template <class R>
typename R::T acomm(const R& r, const typename R::T& a, const typename R::T& b) {
    return r.mul(a, b) + r.mul(b, a);
}

} // namespace detail

/// ABC minus its expansion into the symmetric product plus commutator terms.
template <class R>
typename R::T three_operator_residual(const R& r, const typename R::T& A, const typename R::T& B,
                                      const typename R::T& C) {
    using detail::acomm;
    using detail::comm;
    typename R::T lhs = r.mul(r.mul(A, B), C);
    typename R::T rhs = r.sym({A, B, C});
    rhs = rhs - r.scale(acomm(r, A, comm(r, C, B)) + acomm(r, B, comm(r, C, A)) + acomm(r, C, comm(r, B, A)), 1, 4);
    rhs = rhs + r.scale(comm(r, B, comm(r, C, A)) - r.scale(comm(r, A, comm(r, C, B)), 2, 1), 1, 6);
    return lhs - rhs;
}

/// 1/2 (ABD + BDA) minus its symmetric-product expansion.
template <class R>
typename R::T cubic_residual(const R& r, const typename R::T& A, const typename R::T& B, const typename R::T& D) {
    using detail::acomm;
    using detail::comm;
    typename R::T lhs = r.scale(r.mul(r.mul(A, B), D) + r.mul(r.mul(B, D), A), 1, 2);
    typename R::T rhs = r.sym({A, B, D}) + r.scale(comm(r, comm(r, A, B), D) + comm(r, comm(r, A, D), B), 1, 12) +
               r.scale(acomm(r, A, comm(r, B, D)), 1, 4);
    return lhs - rhs;
}

/// ABCD minus its expansion into symmetric products, symmetrized commutators
/// and nested commutators.
template <class R>
typename R::T four_operator_residual(const R& r, const typename R::T& A, const typename R::T& B,
                                     const typename R::T& C, const typename R::T& D) {
    using detail::acomm;
    using detail::comm;
    typename R::T lhs = r.mul(r.mul(r.mul(A, B), C), D);
    typename R::T rhs = r.sym({A, B, C, D});
    rhs = rhs - r.scale(r.sym({C, D, comm(r, B, A)}) + r.sym({B, D, comm(r, C, A)}) + r.sym({B, C, comm(r, D, A)}) +
                            r.sym({A, C, comm(r, D, B)}) + r.sym({A, D, comm(r, C, B)}) + r.sym({A, B, comm(r, D, C)}),
                        1, 2);
    rhs = rhs + r.scale(acomm(r, comm(r, A, B), comm(r, C, D)) + acomm(r, comm(r, A, C), comm(r, B, D)) +
                            acomm(r, comm(r, A, D), comm(r, B, C)),
                        1, 8);
    auto two = [&](const typename R::T& t) { return r.scale(t, 2, 1); };
    rhs = rhs - r.scale(two(acomm(r, C, comm(r, comm(r, B, A), D))) - acomm(r, C, comm(r, comm(r, D, A), B)) +
                            two(acomm(r, D, comm(r, comm(r, B, A), C))) - acomm(r, D, comm(r, comm(r, C, A), B)) +
                            two(acomm(r, B, comm(r, comm(r, C, A), D))) - acomm(r, B, comm(r, comm(r, D, A), C)) +
                            two(acomm(r, A, comm(r, comm(r, C, B), D))) - acomm(r, A, comm(r, comm(r, D, B), C)),
                        1, 12);
    rhs = rhs - r.scale(comm(r, D, comm(r, comm(r, C, B), A)) + comm(r, C, comm(r, comm(r, D, B), A)) +
                            comm(r, B, comm(r, comm(r, D, C), A)) - two(comm(r, A, comm(r, comm(r, D, C), B))),
                        1, 12);
    return lhs - rhs;
}

} // namespace effcas
