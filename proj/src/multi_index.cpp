#include "effcas/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace effcas {

MultiIndex::MultiIndex(std::initializer_list<int> entries) : v_(entries) {
    for (int e : v_)
        if (e < 0) throw std::invalid_argument("negative multi-index entry");
}

MultiIndex::MultiIndex(const std::vector<int>& entries) : v_(entries) {
    for (int e : v_)
        if (e < 0) throw std::invalid_argument("negative multi-index entry");
}

MultiIndex MultiIndex::unit(int dim, int k) {
    if (k < 0 || k >= dim) throw std::out_of_range("unit index out of range");
    MultiIndex m(dim);
    m.v_[static_cast<std::size_t>(k)] = 1;
    return m;
}

MultiIndex MultiIndex::from_word(int dim, const std::vector<int>& word) {
    MultiIndex m(dim);
    for (int letter : word) {
        if (letter < 0 || letter >= dim) throw std::out_of_range("word letter out of range");
        ++m.v_[static_cast<std::size_t>(letter)];
    }
    return m;
}

int MultiIndex::degree() const { return std::accumulate(v_.begin(), v_.end(), 0); }

long long MultiIndex::factorial() const {
    long long f = 1;
    for (int e : v_)
        for (int k = 2; k <= e; ++k) f *= k;
    return f;
}

int MultiIndex::first_nonzero() const {
    for (int k = 0; k < dim(); ++k)
        if (v_[static_cast<std::size_t>(k)]) return k;
    return -1;
}

std::vector<int> MultiIndex::word() const {
    std::vector<int> w;
    for (int k = 0; k < dim(); ++k)
        for (int r = 0; r < v_[static_cast<std::size_t>(k)]; ++r) w.push_back(k);
    return w;
}

MultiIndex MultiIndex::plus_unit(int k) const {
    MultiIndex m = *this;
    ++m.v_.at(static_cast<std::size_t>(k));
    return m;
}

MultiIndex MultiIndex::minus_unit(int k) const {
    MultiIndex m = *this;
    if (m.v_.at(static_cast<std::size_t>(k)) == 0) throw std::domain_error("multi-index slot already zero");
    --m.v_[static_cast<std::size_t>(k)];
    return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("multi-index dimension mismatch");
    MultiIndex m = *this;
    for (std::size_t k = 0; k < v_.size(); ++k) m.v_[k] += o.v_[k];
    return m;
}

bool MultiIndex::dominates(const MultiIndex& o) const {
    if (o.dim() != dim()) return false;
    for (std::size_t k = 0; k < v_.size(); ++k)
        if (v_[k] < o.v_[k]) return false;
    return true;
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < v_.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(v_[k]);
    }
    return s + ")";
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    if (a.v_.size() != b.v_.size()) return a.v_.size() < b.v_.size();
    // larger leading entries first within a degree
    return a.v_ > b.v_;
}

namespace {

void fill(int dim, int slot, int remaining, MultiIndex& cur, std::vector<int>& buf, std::vector<MultiIndex>& out) {
    if (slot == dim - 1) {
        buf[static_cast<std::size_t>(slot)] = remaining;
        out.emplace_back(buf);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        buf[static_cast<std::size_t>(slot)] = e;
        fill(dim, slot + 1, remaining - e, cur, buf, out);
    }
}

} // namespace

std::vector<MultiIndex> indices_of_degree(int dim, int degree) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    if (degree < 0) throw std::invalid_argument("degree must be non-negative");
    std::vector<MultiIndex> out;
    std::vector<int> buf(static_cast<std::size_t>(dim), 0);
    MultiIndex cur(dim);
    fill(dim, 0, degree, cur, buf, out);
    return out;
}

std::vector<MultiIndex> indices_in_degree_range(int dim, int lo, int hi) {
    std::vector<MultiIndex> out;
    for (int d = lo; d <= hi; ++d) {
        auto part = indices_of_degree(dim, d);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long count_moments(int M, int N) {
    if (M < 1) throw std::invalid_argument("count_moments: M must be >= 1");
    if (N < 0) throw std::invalid_argument("count_moments: N must be >= 0");
    return binomial(N + M - 1, M - 1);
}

long long count_constraint_conditions(int M, int N) {
    if (M < 2) throw std::invalid_argument("count_constraint_conditions: M must be >= 2");
    if (N < 2) throw std::invalid_argument("count_constraint_conditions: N must be >= 2");
    return binomial(N + M - 2, M - 1);
}

int semiclassical_order_of_term(int moment_degree, int hbar_power, bool classical_constraint_factor) {
    if (moment_degree < 0 || hbar_power < 0) throw std::invalid_argument("negative degree or hbar power");
    return moment_degree + 2 * hbar_power + (classical_constraint_factor ? 2 : 0);
}

} // namespace effcas
