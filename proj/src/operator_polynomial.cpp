#include "effcas/operator_polynomial.hpp"

#include "effcas/errors.hpp"

#include <algorithm>

namespace effcas {

void accumulate(TermMap& dst, const Coefficient& c, const TermMap& src) {
    if (c.is_zero()) return;
    for (const auto& [idx, v] : src) {
        Coefficient add = c * v;
        if (add.is_zero()) continue;
        auto it = dst.find(idx);
        if (it == dst.end()) {
            dst.emplace(idx, std::move(add));
        } else {
            it->second += add;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

namespace {

void add_basis(TermMap& dst, const MultiIndex& idx, const Coefficient& c) {
    if (c.is_zero()) return;
    auto it = dst.find(idx);
    if (it == dst.end()) {
        dst.emplace(idx, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) dst.erase(it);
    }
}

} // namespace

WeylEngine::WeylEngine(LieAlgebra algebra, int max_word_length)
    : algebra_(std::move(algebra)), max_len_(max_word_length) {
    if (max_len_ < 1) throw std::invalid_argument("max word length must be positive");
}

EnginePtr make_engine(const LieAlgebra& algebra, int max_word_length) {
    return std::make_shared<const WeylEngine>(algebra, max_word_length);
}

std::size_t WeylEngine::memo_size() const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return insertion_memo_.size() + product_memo_.size();
}

const std::vector<TermMap>& WeylEngine::insertion(int c, const MultiIndex& m) const {
    if (c < 0 || c >= dim()) throw std::out_of_range("generator index out of range");
    if (m.dim() != dim()) throw AlgebraMismatch("multi-index dimension does not match algebra");
    if (m.degree() + 1 > max_len_)
        throw OrderOverflow("word length " + std::to_string(m.degree() + 1) + " exceeds engine maximum " +
                            std::to_string(max_len_));
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return insertion_locked(c, m);
}

// T_q = average over arrangements w of m of w[<q] Delta_c w[>=q].
// Neighbouring insertion points differ by one commutator:
//   T_s - T_{s+1} = sum_b (m_b/r) i hbar eps_cb^k (T(k, m-e_b)_s + x_k e_{m-e_b}),
// and the average of all T_q is e_{m+e_c}.
const std::vector<TermMap>& WeylEngine::insertion_locked(int c, const MultiIndex& m) const {
    auto key = std::make_pair(c, m);
    auto found = insertion_memo_.find(key);
    if (found != insertion_memo_.end()) return found->second;

    const int r = m.degree();
    const int M = dim();
    std::vector<TermMap> T(static_cast<std::size_t>(r + 1));
    if (r == 0) {
        T[0].emplace(m.plus_unit(c), Coefficient(1));
        return insertion_memo_.emplace(key, std::move(T)).first->second;
    }

    const Coefficient ihbar = Coefficient::i_unit() * Coefficient::hbar();
    std::vector<TermMap> D(static_cast<std::size_t>(r));
    for (int b = 0; b < M; ++b) {
        if (m[b] == 0) continue;
        const MultiIndex rest = m.minus_unit(b);
        const Coefficient weight = ihbar * GaussRational(make_rational(m[b], r));
        for (int k = 0; k < M; ++k) {
            const Rational& e = algebra_.eps(c, b, k);
            if (sgn(e) == 0) continue;
            const Coefficient f = weight * GaussRational(e);
            const auto& sub = insertion_locked(k, rest);
            for (int s = 0; s < r; ++s) {
                accumulate(D[static_cast<std::size_t>(s)], f, sub[static_cast<std::size_t>(s)]);
                add_basis(D[static_cast<std::size_t>(s)], rest, f * Coefficient::x(k));
            }
        }
    }

    T[0].emplace(m.plus_unit(c), Coefficient(1));
    for (int s = 0; s < r; ++s)
        accumulate(T[0], Coefficient(GaussRational(make_rational(r - s, r + 1))), D[static_cast<std::size_t>(s)]);
    for (int q = 1; q <= r; ++q) {
        T[static_cast<std::size_t>(q)] = T[static_cast<std::size_t>(q - 1)];
        accumulate(T[static_cast<std::size_t>(q)], Coefficient(-1), D[static_cast<std::size_t>(q - 1)]);
    }
    return insertion_memo_.emplace(key, std::move(T)).first->second;
}

const TermMap& WeylEngine::basis_product(const MultiIndex& i, const MultiIndex& j) const {
    if (i.dim() != dim() || j.dim() != dim()) throw AlgebraMismatch("multi-index dimension does not match algebra");
    if (i.degree() + j.degree() > max_len_)
        throw OrderOverflow("product degree " + std::to_string(i.degree() + j.degree()) +
                            " exceeds engine maximum " + std::to_string(max_len_));
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return product_locked(i, j);
}

// e_i = Delta_a e_m - R with a the first letter of i; then
// e_i e_j = sum_t (e_m e_j)_t Delta_a e_t - sum_u R_u e_u e_j.
const TermMap& WeylEngine::product_locked(const MultiIndex& i, const MultiIndex& j) const {
    auto key = std::make_pair(i, j);
    auto found = product_memo_.find(key);
    if (found != product_memo_.end()) return found->second;

    TermMap out;
    if (i.is_zero()) {
        out.emplace(j, Coefficient(1));
    } else if (j.is_zero()) {
        out.emplace(i, Coefficient(1));
    } else {
        const int a = i.first_nonzero();
        const MultiIndex m = i.minus_unit(a);
        TermMap R = insertion_locked(a, m)[0];
        add_basis(R, i, Coefficient(-1));

        const TermMap mj = product_locked(m, j);
        for (const auto& [t, coef] : mj) accumulate(out, coef, insertion_locked(a, t)[0]);
        for (const auto& [u, coef] : R) accumulate(out, -coef, product_locked(u, j));
    }
    return product_memo_.emplace(key, std::move(out)).first->second;
}

OperatorPolynomial::OperatorPolynomial(EnginePtr engine) : engine_(std::move(engine)) {
    if (!engine_) throw std::invalid_argument("null engine");
}

OperatorPolynomial::OperatorPolynomial(EnginePtr engine, TermMap terms)
    : engine_(std::move(engine)), terms_(std::move(terms)) {
    if (!engine_) throw std::invalid_argument("null engine");
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first.dim() != engine_->dim()) throw AlgebraMismatch("term index dimension mismatch");
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
}

OperatorPolynomial OperatorPolynomial::identity(EnginePtr engine) {
    return basis(engine, MultiIndex(engine->dim()));
}

OperatorPolynomial OperatorPolynomial::constant(EnginePtr engine, const Coefficient& c) {
    return basis(engine, MultiIndex(engine->dim()), c);
}

OperatorPolynomial OperatorPolynomial::basis(EnginePtr engine, const MultiIndex& idx, const Coefficient& c) {
    TermMap t;
    if (!c.is_zero()) t.emplace(idx, c);
    return OperatorPolynomial(std::move(engine), std::move(t));
}

OperatorPolynomial OperatorPolynomial::delta_generator(EnginePtr engine, int k) {
    if (k < 0 || k >= engine->dim()) throw std::out_of_range("generator index out of range");
    const int M = engine->dim();
    return basis(std::move(engine), MultiIndex::unit(M, k));
}

OperatorPolynomial OperatorPolynomial::generator(EnginePtr engine, int k) {
    auto d = delta_generator(engine, k);
    return d + constant(engine, Coefficient::x(k));
}

int OperatorPolynomial::degree() const {
    int d = -1;
    for (const auto& [idx, c] : terms_) d = std::max(d, idx.degree());
    return d;
}

Coefficient OperatorPolynomial::coefficient(const MultiIndex& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Coefficient() : it->second;
}

void OperatorPolynomial::check_same(const OperatorPolynomial& o) const {
    if (engine_ != o.engine_ && !(engine_->algebra() == o.engine_->algebra()))
        throw AlgebraMismatch("operator polynomials belong to different algebras");
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& o) {
    check_same(o);
    accumulate(terms_, Coefficient(1), o.terms_);
    return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& o) {
    check_same(o);
    accumulate(terms_, Coefficient(-1), o.terms_);
    return *this;
}

OperatorPolynomial& OperatorPolynomial::operator*=(const Coefficient& c) {
    TermMap t;
    accumulate(t, c, terms_);
    terms_ = std::move(t);
    return *this;
}

OperatorPolynomial OperatorPolynomial::operator-() const {
    OperatorPolynomial r = *this;
    for (auto& [idx, c] : r.terms_) c = -c;
    return r;
}

OperatorPolynomial OperatorPolynomial::adjoint() const {
    OperatorPolynomial r = *this;
    for (auto& [idx, c] : r.terms_) c = c.conj();
    return r;
}

std::complex<double> OperatorPolynomial::expectation(const MomentState& state, bool strict) const {
    if (state.dim() != engine_->dim()) throw AlgebraMismatch("state dimension does not match algebra");
    std::complex<double> sum = 0;
    for (const auto& [idx, c] : terms_) {
        int d = idx.degree();
        if (d == 1) continue;
        if (d > state.order()) {
            if (strict)
                throw OrderOverflow("moment " + idx.to_string() + " above state order " + std::to_string(state.order()));
            continue;
        }
        sum += c.evaluate(state.x(), state.hbar()) * state.moment(idx);
    }
    return sum;
}

nlohmann::json OperatorPolynomial::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [idx, c] : terms_) arr.push_back({{"index", idx.entries()}, {"coeff", c.to_string()}});
    return arr;
}

OperatorPolynomial OperatorPolynomial::from_json(EnginePtr engine, const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("operator polynomial must be a list of terms");
    OperatorPolynomial p(engine);
    for (const auto& term : j) {
        if (!term.contains("index") || !term.contains("coeff")) throw ParseError("term needs 'index' and 'coeff'");
        MultiIndex idx(term.at("index").get<std::vector<int>>());
        if (idx.dim() != engine->dim()) throw ParseError("term index has wrong dimension");
        p += basis(engine, idx, Coefficient::parse(term.at("coeff").get<std::string>()));
    }
    return p;
}

OperatorPolynomial multiply(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    if (a.engine() != b.engine() && !(a.engine()->algebra() == b.engine()->algebra()))
        throw AlgebraMismatch("operator polynomials belong to different algebras");
    const WeylEngine& eng = *a.engine();
    TermMap out;
    for (const auto& [i, ci] : a.terms())
        for (const auto& [j, cj] : b.terms()) accumulate(out, ci * cj, eng.basis_product(i, j));
    return OperatorPolynomial(a.engine(), std::move(out));
}

OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    return multiply(a, b) - multiply(b, a);
}

OperatorPolynomial anticommutator(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    return multiply(a, b) + multiply(b, a);
}

OperatorPolynomial symmetrized_product(const std::vector<OperatorPolynomial>& factors) {
    if (factors.empty()) throw std::invalid_argument("symmetrized product of nothing");
    std::vector<int> perm(factors.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    OperatorPolynomial sum(factors[0].engine());
    long count = 0;
    do {
        OperatorPolynomial prod = factors[static_cast<std::size_t>(perm[0])];
        for (std::size_t k = 1; k < perm.size(); ++k) prod = multiply(prod, factors[static_cast<std::size_t>(perm[k])]);
        sum += prod;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum * Coefficient(GaussRational(make_rational(1, count)));
}

OperatorPolynomial weyl_symmetrize(const EnginePtr& engine, const std::vector<int>& word) {
    if (static_cast<int>(word.size()) > engine->max_word_length())
        throw OrderOverflow("word length " + std::to_string(word.size()) + " exceeds engine maximum");
    for (int letter : word)
        if (letter < 0 || letter >= engine->dim()) throw std::out_of_range("word letter out of range");
    if (word.empty()) return OperatorPolynomial::identity(engine);
    // distinct arrangements of a multiset are equally weighted in the full average
    std::vector<int> w = word;
    std::sort(w.begin(), w.end());
    OperatorPolynomial sum(engine);
    long count = 0;
    do {
        OperatorPolynomial prod = OperatorPolynomial::delta_generator(engine, w[0]);
        for (std::size_t k = 1; k < w.size(); ++k)
            prod = multiply(prod, OperatorPolynomial::delta_generator(engine, w[k]));
        sum += prod;
        ++count;
    } while (std::next_permutation(w.begin(), w.end()));
    return sum * Coefficient(GaussRational(make_rational(1, count)));
}

} // namespace effcas
