#pragma once

#include "effcas/coefficient.hpp"

#include "json.hpp"
#include <optional>
#include <string>
#include <vector>

namespace effcas {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct ValidationReport {
    bool antisymmetry = true;
    bool jacobi = true;
    bool killing = true;
    std::string first_violation;

    bool ok() const { return antisymmetry && jacobi && killing; }
};

/// Real Lie algebra [x_i, x_j] = i hbar eps_ij^k x_k with exact rational
/// structure constants.
class LieAlgebra {
public:
    LieAlgebra(int dim, std::vector<Rational> eps, std::optional<RationalMatrix> killing_upper = std::nullopt,
               std::vector<std::string> names = {});

    static LieAlgebra su2();
    /// Generators (Vt, J+, J-) with Vt = V + hbar/2 absorbing the central term.
    static LieAlgebra sl2r_cosmo();
    /// Built-ins by name: "su2", "sl2r-cosmo".
    static LieAlgebra builtin(const std::string& name);

    static LieAlgebra from_json(const nlohmann::json& j);
    static LieAlgebra from_file(const std::string& path);
    nlohmann::json to_json() const;

    int dim() const { return dim_; }
    const Rational& eps(int i, int j, int k) const { return eps_[index(i, j, k)]; }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    /// Killing form k_ij = -1/2 sum eps_ik^l eps_jl^k (delta for su2).
    RationalMatrix killing_lower_default() const;
    /// Upper-index metric k^ij: explicit if supplied, else inverse of the default lower form.
    std::optional<RationalMatrix> killing_upper() const;
    bool has_explicit_killing() const { return killing_.has_value(); }

    bool is_abelian() const;

    ValidationReport validate() const;

    friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
        return a.dim_ == b.dim_ && a.eps_ == b.eps_ && a.killing_ == b.killing_;
    }

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(k);
    }

    int dim_;
    std::vector<Rational> eps_;
    std::optional<RationalMatrix> killing_;
    std::vector<std::string> names_;
    std::string name_;
};

/// Exact inverse; std::nullopt if singular.
std::optional<RationalMatrix> invert(const RationalMatrix& m);

} // namespace effcas
