#pragma once

#include "effcas/coefficient.hpp"
#include "effcas/lie_algebra.hpp"
#include "effcas/moment_state.hpp"
#include "effcas/multi_index.hpp"

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace effcas {

using TermMap = std::map<MultiIndex, Coefficient>;

/// Reduction engine for one algebra: products of Weyl basis elements
/// e_i e_j in terms of the basis, with results memoized. The memo is
/// guarded so that engines may be shared across threads.
class WeylEngine {
public:
    static constexpr int kDefaultMaxWordLength = 8;

    explicit WeylEngine(LieAlgebra algebra, int max_word_length = kDefaultMaxWordLength);

    const LieAlgebra& algebra() const { return algebra_; }
    int dim() const { return algebra_.dim(); }
    int max_word_length() const { return max_len_; }

    /// e_i e_j reduced to the Weyl basis.
    const TermMap& basis_product(const MultiIndex& i, const MultiIndex& j) const;

    /// Averages over the words of multiset m with letter c inserted at
    /// position q, for q = 0..|m|. Entry 0 is Delta_c e_m, entry |m| is e_m Delta_c.
    const std::vector<TermMap>& insertion(int c, const MultiIndex& m) const;

    std::size_t memo_size() const;

private:
    const std::vector<TermMap>& insertion_locked(int c, const MultiIndex& m) const;
    const TermMap& product_locked(const MultiIndex& i, const MultiIndex& j) const;

    LieAlgebra algebra_;
    int max_len_;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<int, MultiIndex>, std::vector<TermMap>> insertion_memo_;
    mutable std::map<std::pair<MultiIndex, MultiIndex>, TermMap> product_memo_;
};

using EnginePtr = std::shared_ptr<const WeylEngine>;

EnginePtr make_engine(const LieAlgebra& algebra, int max_word_length = WeylEngine::kDefaultMaxWordLength);

/// Operator expression in canonical form: sum of coefficient * e_i, with
/// coefficients polynomial in the formal expectation values x_k and hbar.
class OperatorPolynomial {
public:
    explicit OperatorPolynomial(EnginePtr engine);
    OperatorPolynomial(EnginePtr engine, TermMap terms);

    static OperatorPolynomial identity(EnginePtr engine);
    static OperatorPolynomial constant(EnginePtr engine, const Coefficient& c);
    static OperatorPolynomial basis(EnginePtr engine, const MultiIndex& idx, const Coefficient& c = Coefficient(1));
    /// Centered generator Delta x_k = x_k - <x_k>.
    static OperatorPolynomial delta_generator(EnginePtr engine, int k);
    /// Uncentered generator Delta x_k + x_k.
    static OperatorPolynomial generator(EnginePtr engine, int k);

    const EnginePtr& engine() const { return engine_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Highest basis degree present, -1 for zero.
    int degree() const;
    Coefficient coefficient(const MultiIndex& idx) const;

    OperatorPolynomial& operator+=(const OperatorPolynomial& o);
    OperatorPolynomial& operator-=(const OperatorPolynomial& o);
    OperatorPolynomial& operator*=(const Coefficient& c);
    OperatorPolynomial operator-() const;
    friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { return a += b; }
    friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { return a -= b; }
    friend OperatorPolynomial operator*(OperatorPolynomial a, const Coefficient& c) { return a *= c; }
    friend OperatorPolynomial operator*(const Coefficient& c, OperatorPolynomial a) { return a *= c; }
    friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a.terms_ == b.terms_; }

    /// Hermitian adjoint (the basis is self-adjoint for real x and hbar).
    OperatorPolynomial adjoint() const;

    /// Expectation value: e_i -> Delta(x^i), coefficients evaluated at the
    /// state. In strict mode terms above the state's order raise
    /// OrderOverflow, otherwise they are dropped.
    std::complex<double> expectation(const MomentState& state, bool strict = true) const;

    nlohmann::json to_json() const;
    static OperatorPolynomial from_json(EnginePtr engine, const nlohmann::json& j);

private:
    void check_same(const OperatorPolynomial& o) const;

    EnginePtr engine_;
    TermMap terms_;
};

OperatorPolynomial multiply(const OperatorPolynomial& a, const OperatorPolynomial& b);
OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b);
/// ab + ba (no factor 1/2).
OperatorPolynomial anticommutator(const OperatorPolynomial& a, const OperatorPolynomial& b);
/// Average of the products over all orderings of the factors.
OperatorPolynomial symmetrized_product(const std::vector<OperatorPolynomial>& factors);
/// Permutation average of the word's centered generators.
OperatorPolynomial weyl_symmetrize(const EnginePtr& engine, const std::vector<int>& word);

/// Adds c * src into dst, pruning zeros.
void accumulate(TermMap& dst, const Coefficient& c, const TermMap& src);

} // namespace effcas
