#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace effcas {

using Rational = mpq_class;

/// n/d in canonical form; mpq_class(n, d) alone leaves common factors in place.
inline Rational make_rational(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Exact complex number with rational real and imaginary parts.
struct GaussRational {
    Rational re{0};
    Rational im{0};

    GaussRational() = default;
    GaussRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    GaussRational(long r) : re(r), im(0) {}

    static GaussRational i_unit() { return {0, 1}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    GaussRational conj() const { return {re, -im}; }
    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    GaussRational operator-() const { return {-re, -im}; }
    GaussRational& operator+=(const GaussRational& o);
    GaussRational& operator-=(const GaussRational& o);
    GaussRational& operator*=(const GaussRational& o);
    GaussRational& operator/=(const GaussRational& o);

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    std::string to_string() const;
};

/// Parses "3", "-7/2", "0.25" (exact decimal) into a rational.
Rational parse_rational(const std::string& text);

/// Largest algebra dimension supported by the fixed-width monomial key.
inline constexpr int kMaxGenerators = 8;

/// Exponents of x_1..x_M followed by the exponent of hbar in the last slot.
struct Monomial {
    std::array<std::uint8_t, kMaxGenerators + 1> exp{};

    static constexpr int kHbarSlot = kMaxGenerators;

    int hbar_power() const { return exp[kHbarSlot]; }
    int x_degree() const;
    bool is_constant() const;
    Monomial operator*(const Monomial& o) const;
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.exp < b.exp; }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
};

/// Polynomial in formal symbols x_1..x_M and hbar with Gaussian-rational
/// coefficients. Zero terms are never stored.
class Coefficient {
public:
    using TermMap = std::map<Monomial, GaussRational>;

    Coefficient() = default;
    Coefficient(const GaussRational& c);
    Coefficient(long c) : Coefficient(GaussRational(c)) {}

    static Coefficient x(int k);
    static Coefficient hbar();
    static Coefficient i_unit() { return Coefficient(GaussRational::i_unit()); }
    static Coefficient rational(long num, long den) { return Coefficient(GaussRational(make_rational(num, den))); }

    bool is_zero() const { return terms_.empty(); }
    bool is_real() const;
    bool only_even_hbar() const;
    bool is_constant() const;
    /// Constant term (zero if absent).
    GaussRational constant() const;
    const TermMap& terms() const { return terms_; }
    /// Highest generator index appearing plus one.
    int used_generators() const;

    Coefficient& operator+=(const Coefficient& o);
    Coefficient& operator-=(const Coefficient& o);
    Coefficient& operator*=(const Coefficient& o);
    Coefficient& operator*=(const GaussRational& c);
    Coefficient operator-() const;
    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator*(Coefficient a, const GaussRational& c) { return a *= c; }
    friend Coefficient operator*(const GaussRational& c, Coefficient a) { return a *= c; }
    friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

    Coefficient pow(int n) const;
    Coefficient conj() const;
    Coefficient real_part() const;
    Coefficient imag_part() const;

    /// Terms with exactly the given power of hbar.
    Coefficient hbar_slice(int power) const;
    /// Distinct hbar powers present, ascending.
    std::vector<int> hbar_powers() const;

    /// Replaces symbol x_k (0-based) by a polynomial.
    Coefficient substitute(int k, const Coefficient& replacement) const;

    std::complex<double> evaluate(const std::vector<double>& x, double hbar) const;

    /// Readable form, e.g. "1/2*i*x1*hbar - 1/6*hbar^2".
    std::string to_string() const;
    /// Inverse of to_string; accepts +, -, *, /, ^, parentheses, rational
    /// literals, i, x1..x8 and hbar.
    static Coefficient parse(const std::string& text);

private:
    void add_term(const Monomial& m, const GaussRational& c);
    TermMap terms_;
};

} // namespace effcas
