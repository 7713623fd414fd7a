#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace effcas {

/// M-tuple of non-negative integers labelling Weyl basis elements and moments.
/// Ordered by degree first, then lexicographically with the first slot
/// most significant (so e_1 precedes e_2 among degree-1 indices).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int dim) : v_(static_cast<std::size_t>(dim), 0) {}
    MultiIndex(std::initializer_list<int> entries);
    explicit MultiIndex(const std::vector<int>& entries);

    static MultiIndex unit(int dim, int k);
    /// Multiset of letters in a word, e.g. [0,0,2] -> (2,0,1).
    static MultiIndex from_word(int dim, const std::vector<int>& word);

    int dim() const { return static_cast<int>(v_.size()); }
    int operator[](int k) const { return v_[static_cast<std::size_t>(k)]; }
    int degree() const;
    /// Product of factorials of the entries.
    long long factorial() const;
    bool is_zero() const { return degree() == 0; }
    /// First slot with a nonzero entry, -1 for the zero index.
    int first_nonzero() const;
    /// Sorted word with each letter repeated by its multiplicity.
    std::vector<int> word() const;

    MultiIndex plus_unit(int k) const;
    /// Throws std::domain_error if slot k is zero.
    MultiIndex minus_unit(int k) const;
    MultiIndex operator+(const MultiIndex& o) const;

    /// Componentwise partial order.
    bool dominates(const MultiIndex& o) const;

    std::string to_string() const;
    const std::vector<int>& entries() const { return v_; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.v_ == b.v_; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return a.v_ != b.v_; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b);

private:
    std::vector<int> v_;
};

/// All M-tuples of exactly the given degree, in MultiIndex order.
std::vector<MultiIndex> indices_of_degree(int dim, int degree);
/// All M-tuples with lo <= degree <= hi.
std::vector<MultiIndex> indices_in_degree_range(int dim, int lo, int hi);

/// binomial(N+M-1, M-1): number of moments of degree N in M variables.
long long count_moments(int M, int N);
/// binomial(N+M-2, M-1): independent Casimir conditions gained at order N.
long long count_constraint_conditions(int M, int N);
long long binomial(long long n, long long k);

/// moment degree + 2*hbar power + 2 for a classical-constraint factor.
int semiclassical_order_of_term(int moment_degree, int hbar_power, bool classical_constraint_factor);

} // namespace effcas
