#include "effcas/coefficient.hpp"

#include "effcas/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace effcas {

GaussRational& GaussRational::operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
    if (sgn(im) == 0 && sgn(o.im) == 0) {
        re *= o.re;
        return *this;
    }
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
    Rational den = o.re * o.re + o.im * o.im;
    if (sgn(den) == 0) throw std::domain_error("division by zero");
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

std::string GaussRational::to_string() const {
    if (sgn(im) == 0) return re.get_str();
    std::string ipart = (im == 1) ? "i" : (im == -1 ? "-i" : im.get_str() + "*i");
    if (sgn(re) == 0) return ipart;
    return "(" + re.get_str() + (sgn(im) > 0 ? "+" : "") + ipart + ")";
}

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty rational literal");
    try {
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            // exact decimal, optional exponent
            std::string mant = s, expo;
            auto e = s.find_first_of("eE");
            if (e != std::string::npos) {
                mant = s.substr(0, e);
                expo = s.substr(e + 1);
            }
            dot = mant.find('.');
            std::string digits = mant.substr(0, dot) + mant.substr(dot + 1);
            long scale = static_cast<long>(mant.size() - dot - 1);
            if (!expo.empty()) scale -= std::stol(expo);
            if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad decimal: " + text);
            if (digits[0] == '+') digits.erase(0, 1);
            mpz_class num(digits, 10);
            mpz_class den = 1;
            mpz_class ten = 10;
            if (scale >= 0) {
                mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(scale));
            } else {
                mpz_class f;
                mpz_pow_ui(f.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-scale));
                num *= f;
            }
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        if (s[0] == '+') s.erase(0, 1);
        Rational q(s, 10);
        if (sgn(q.get_den()) == 0) throw ParseError("zero denominator: " + text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + text);
    }
}

int Monomial::x_degree() const {
    int d = 0;
    for (int k = 0; k < kMaxGenerators; ++k) d += exp[k];
    return d;
}

bool Monomial::is_constant() const {
    for (auto e : exp)
        if (e) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t k = 0; k < exp.size(); ++k) {
        int e = exp[k] + o.exp[k];
        if (e > 255) throw std::overflow_error("monomial exponent overflow");
        r.exp[k] = static_cast<std::uint8_t>(e);
    }
    return r;
}

Coefficient::Coefficient(const GaussRational& c) {
    if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Coefficient Coefficient::x(int k) {
    if (k < 0 || k >= kMaxGenerators) throw std::out_of_range("generator index out of range");
    Monomial m;
    m.exp[k] = 1;
    Coefficient c;
    c.terms_.emplace(m, GaussRational(1));
    return c;
}

Coefficient Coefficient::hbar() {
    Monomial m;
    m.exp[Monomial::kHbarSlot] = 1;
    Coefficient c;
    c.terms_.emplace(m, GaussRational(1));
    return c;
}

void Coefficient::add_term(const Monomial& m, const GaussRational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

bool Coefficient::is_real() const {
    for (const auto& [m, c] : terms_)
        if (!c.is_real()) return false;
    return true;
}

bool Coefficient::only_even_hbar() const {
    for (const auto& [m, c] : terms_)
        if (m.hbar_power() % 2) return false;
    return true;
}

bool Coefficient::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

GaussRational Coefficient::constant() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? GaussRational{} : it->second;
}

int Coefficient::used_generators() const {
    int used = 0;
    for (const auto& [m, c] : terms_)
        for (int k = 0; k < kMaxGenerators; ++k)
            if (m.exp[k]) used = std::max(used, k + 1);
    return used;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    Coefficient r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
    *this = *this * o;
    return *this;
}

Coefficient& Coefficient::operator*=(const GaussRational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Coefficient Coefficient::operator-() const {
    Coefficient r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

Coefficient Coefficient::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative power");
    Coefficient r(1);
    for (int k = 0; k < n; ++k) r *= *this;
    return r;
}

Coefficient Coefficient::conj() const {
    Coefficient r;
    for (const auto& [m, c] : terms_) r.add_term(m, c.conj());
    return r;
}

Coefficient Coefficient::real_part() const {
    Coefficient r;
    for (const auto& [m, c] : terms_) r.add_term(m, GaussRational(c.re));
    return r;
}

Coefficient Coefficient::imag_part() const {
    Coefficient r;
    for (const auto& [m, c] : terms_) r.add_term(m, GaussRational(c.im));
    return r;
}

Coefficient Coefficient::hbar_slice(int power) const {
    Coefficient r;
    for (const auto& [m, c] : terms_)
        if (m.hbar_power() == power) r.terms_.emplace(m, c);
    return r;
}

std::vector<int> Coefficient::hbar_powers() const {
    std::vector<int> out;
    for (const auto& [m, c] : terms_) {
        int p = m.hbar_power();
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Coefficient Coefficient::substitute(int k, const Coefficient& replacement) const {
    Coefficient r;
    for (const auto& [m, c] : terms_) {
        Monomial rest = m;
        int e = rest.exp[k];
        rest.exp[k] = 0;
        Coefficient piece;
        piece.terms_.emplace(rest, c);
        r += piece * replacement.pow(e);
    }
    return r;
}

std::complex<double> Coefficient::evaluate(const std::vector<double>& x, double hbar) const {
    std::complex<double> sum = 0;
    for (const auto& [m, c] : terms_) {
        double v = 1;
        for (int k = 0; k < kMaxGenerators; ++k) {
            if (!m.exp[k]) continue;
            if (k >= static_cast<int>(x.size()))
                throw std::out_of_range("coefficient uses x" + std::to_string(k + 1) + " beyond state dimension");
            v *= std::pow(x[k], m.exp[k]);
        }
        v *= std::pow(hbar, m.hbar_power());
        sum += c.to_complex() * v;
    }
    return sum;
}

namespace {

std::string monomial_string(const Monomial& m) {
    std::string s;
    auto append = [&](const std::string& name, int e) {
        if (!e) return;
        if (!s.empty()) s += "*";
        s += name;
        if (e > 1) s += "^" + std::to_string(e);
    };
    for (int k = 0; k < kMaxGenerators; ++k) append("x" + std::to_string(k + 1), m.exp[k]);
    append("hbar", m.hbar_power());
    return s;
}

// Recursive-descent parser over a character stream.
class PolyParser {
public:
    explicit PolyParser(const std::string& s) : s_(s) {}

    Coefficient run() {
        Coefficient c = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return c;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("coefficient parse error at " + std::to_string(pos_) + ": " + msg + " in \"" + s_ + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char ch) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    Coefficient expr() {
        Coefficient c = term();
        for (;;) {
            if (accept('+')) c += term();
            else if (accept('-')) c -= term();
            else return c;
        }
    }

    Coefficient term() {
        Coefficient c = unary();
        for (;;) {
            if (accept('*')) {
                c *= unary();
            } else if (accept('/')) {
                Coefficient d = unary();
                if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
                c *= GaussRational(1) / d.constant();
            } else {
                return c;
            }
        }
    }

    Coefficient unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        Coefficient base = primary();
        if (accept('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            base = base.pow(std::stoi(s_.substr(start, pos_ - start)));
        }
        return base;
    }

    Coefficient primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            Coefficient c = expr();
            if (!accept(')')) fail("expected ')'");
            return c;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            return Coefficient(GaussRational(parse_rational(s_.substr(start, pos_ - start))));
        }
        if (s_.compare(pos_, 4, "hbar") == 0) {
            pos_ += 4;
            return Coefficient::hbar();
        }
        if (ch == 'x') {
            ++pos_;
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected generator number after x");
            int k = std::stoi(s_.substr(start, pos_ - start));
            if (k < 1 || k > kMaxGenerators) fail("generator number out of range");
            return Coefficient::x(k - 1);
        }
        if (ch == 'i') {
            ++pos_;
            return Coefficient::i_unit();
        }
        fail("unexpected '" + std::string(1, ch) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

std::string Coefficient::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string mono = monomial_string(m);
        GaussRational v = c;
        bool negative = false;
        // pull a leading minus out of purely real or purely imaginary values
        if (v.is_real() && sgn(v.re) < 0) {
            negative = true;
            v = -v;
        } else if (sgn(v.re) == 0 && sgn(v.im) < 0) {
            negative = true;
            v = -v;
        }
        std::string num;
        if (mono.empty()) num = v.to_string();
        else if (v == GaussRational(1)) num = mono;
        else num = v.to_string() + "*" + mono;
        if (first) out += negative ? "-" + num : num;
        else out += negative ? " - " + num : " + " + num;
        first = false;
    }
    return out;
}

Coefficient Coefficient::parse(const std::string& text) { return PolyParser(text).run(); }

} // namespace effcas
