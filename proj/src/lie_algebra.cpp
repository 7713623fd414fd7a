#include "effcas/lie_algebra.hpp"

#include "effcas/errors.hpp"

#include <fstream>
#include <sstream>

namespace effcas {

LieAlgebra::LieAlgebra(int dim, std::vector<Rational> eps, std::optional<RationalMatrix> killing_upper,
                       std::vector<std::string> names)
    : dim_(dim), eps_(std::move(eps)), killing_(std::move(killing_upper)), names_(std::move(names)) {
    if (dim_ < 1) throw std::invalid_argument("algebra dimension must be positive");
    if (dim_ > kMaxGenerators)
        throw std::invalid_argument("algebra dimension above " + std::to_string(kMaxGenerators) + " not supported");
    if (eps_.size() != static_cast<std::size_t>(dim_ * dim_ * dim_))
        throw std::invalid_argument("structure constant array has wrong size");
    if (killing_) {
        if (killing_->size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("killing metric has wrong size");
        for (const auto& row : *killing_)
            if (row.size() != static_cast<std::size_t>(dim_))
                throw std::invalid_argument("killing metric has wrong size");
    }
    if (names_.empty())
        for (int k = 0; k < dim_; ++k) names_.push_back("x" + std::to_string(k + 1));
    if (names_.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("wrong number of generator names");
}

LieAlgebra LieAlgebra::su2() {
    std::vector<Rational> eps(27, Rational(0));
    auto set = [&](int i, int j, int k, int v) { eps[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v; };
    set(0, 1, 2, 1);
    set(1, 2, 0, 1);
    set(2, 0, 1, 1);
    set(1, 0, 2, -1);
    set(2, 1, 0, -1);
    set(0, 2, 1, -1);
    LieAlgebra a(3, eps, std::nullopt, {"x1", "x2", "x3"});
    a.name_ = "su2";
    return a;
}

LieAlgebra LieAlgebra::sl2r_cosmo() {
    // [Vt,J+] = i hbar J-, [Vt,J-] = -i hbar J+, [J+,J-] = -i hbar Vt
    std::vector<Rational> eps(27, Rational(0));
    auto set = [&](int i, int j, int k, int v) {
        eps[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v;
        eps[static_cast<std::size_t>((j * 3 + i) * 3 + k)] = -v;
    };
    set(0, 1, 2, 1);
    set(0, 2, 1, -1);
    set(1, 2, 0, -1);
    // C = J+^2 + J-^2 - Vt^2
    RationalMatrix k(3, std::vector<Rational>(3, Rational(0)));
    k[0][0] = -1;
    k[1][1] = 1;
    k[2][2] = 1;
    LieAlgebra a(3, eps, k, {"V", "J+", "J-"});
    a.name_ = "sl2r-cosmo";
    return a;
}

LieAlgebra LieAlgebra::builtin(const std::string& name) {
    if (name == "su2") return su2();
    if (name == "sl2r-cosmo") return sl2r_cosmo();
    throw std::invalid_argument("unknown built-in algebra: " + name);
}

namespace {

Rational json_rational(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) return Rational(v.get<double>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw ParseError("expected a number or rational string");
}

nlohmann::json rational_json(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}

} // namespace

LieAlgebra LieAlgebra::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("epsilon"))
        throw ParseError("algebra definition needs 'dim' and 'epsilon'");
    int dim = j.at("dim").get<int>();
    if (dim < 1 || dim > kMaxGenerators) throw ParseError("'dim' out of range");
    std::vector<Rational> eps(static_cast<std::size_t>(dim * dim * dim), Rational(0));
    for (const auto& entry : j.at("epsilon")) {
        if (!entry.is_array() || entry.size() != 4) throw ParseError("epsilon entries must be [i,j,k,value]");
        int a = entry[0].get<int>(), b = entry[1].get<int>(), c = entry[2].get<int>();
        if (a < 0 || b < 0 || c < 0 || a >= dim || b >= dim || c >= dim)
            throw ParseError("epsilon index out of range");
        eps[static_cast<std::size_t>((a * dim + b) * dim + c)] = json_rational(entry[3]);
    }
    std::optional<RationalMatrix> killing;
    if (j.contains("killing")) {
        RationalMatrix k;
        for (const auto& row : j.at("killing")) {
            std::vector<Rational> r;
            for (const auto& v : row) r.push_back(json_rational(v));
            k.push_back(std::move(r));
        }
        killing = std::move(k);
    }
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    try {
        LieAlgebra a(dim, eps, killing, names);
        if (j.contains("name")) a.name_ = j.at("name").get<std::string>();
        return a;
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

LieAlgebra LieAlgebra::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open algebra file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed algebra file: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json LieAlgebra::to_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    if (!name_.empty()) j["name"] = name_;
    nlohmann::json eps = nlohmann::json::array();
    for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b)
            for (int c = 0; c < dim_; ++c)
                if (sgn(eps_[index(a, b, c)]) != 0) eps.push_back({a, b, c, rational_json(eps_[index(a, b, c)])});
    j["epsilon"] = eps;
    if (killing_) {
        nlohmann::json k = nlohmann::json::array();
        for (const auto& row : *killing_) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto& v : row) r.push_back(rational_json(v));
            k.push_back(r);
        }
        j["killing"] = k;
    }
    j["names"] = names_;
    return j;
}

RationalMatrix LieAlgebra::killing_lower_default() const {
    RationalMatrix k(static_cast<std::size_t>(dim_), std::vector<Rational>(static_cast<std::size_t>(dim_), Rational(0)));
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            Rational s = 0;
            for (int a = 0; a < dim_; ++a)
                for (int b = 0; b < dim_; ++b) s += eps(i, a, b) * eps(j, b, a);
            k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -s / 2;
        }
    return k;
}

std::optional<RationalMatrix> LieAlgebra::killing_upper() const {
    if (killing_) return killing_;
    return invert(killing_lower_default());
}

bool LieAlgebra::is_abelian() const {
    for (const auto& e : eps_)
        if (sgn(e) != 0) return false;
    return true;
}

ValidationReport LieAlgebra::validate() const {
    ValidationReport r;
    auto tuple = [](std::initializer_list<int> t) {
        std::string s = "(";
        bool first = true;
        for (int v : t) {
            if (!first) s += ",";
            s += std::to_string(v);
            first = false;
        }
        return s + ")";
    };
    for (int i = 0; i < dim_ && r.antisymmetry; ++i)
        for (int j = 0; j < dim_ && r.antisymmetry; ++j)
            for (int k = 0; k < dim_; ++k)
                if (eps(i, j, k) != -eps(j, i, k)) {
                    r.antisymmetry = false;
                    r.first_violation = "antisymmetry at (i,j,k)=" + tuple({i, j, k});
                    break;
                }
    for (int i = 0; i < dim_ && r.jacobi; ++i)
        for (int j = 0; j < dim_ && r.jacobi; ++j)
            for (int k = 0; k < dim_ && r.jacobi; ++k)
                for (int l = 0; l < dim_; ++l) {
                    Rational s = 0;
                    for (int m = 0; m < dim_; ++m)
                        s += eps(i, j, m) * eps(m, k, l) + eps(j, k, m) * eps(m, i, l) + eps(k, i, m) * eps(m, j, l);
                    if (sgn(s) != 0) {
                        r.jacobi = false;
                        if (r.first_violation.empty())
                            r.first_violation = "jacobi at (i,j,k,l)=" + tuple({i, j, k, l});
                        break;
                    }
                }
    if (killing_) {
        const auto& k = *killing_;
        for (int i = 0; i < dim_ && r.killing; ++i)
            for (int j = 0; j < dim_; ++j)
                if (k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] !=
                    k[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
                    r.killing = false;
                    if (r.first_violation.empty()) r.first_violation = "killing metric not symmetric at " + tuple({i, j});
                    break;
                }
        if (r.killing && !invert(k)) {
            r.killing = false;
            if (r.first_violation.empty()) r.first_violation = "killing metric singular";
        }
    }
    return r;
}

std::optional<RationalMatrix> invert(const RationalMatrix& m) {
    const std::size_t n = m.size();
    RationalMatrix a = m;
    RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && sgn(a[piv][col]) == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational p = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || sgn(a[r][col]) == 0) continue;
            Rational f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

} // namespace effcas
