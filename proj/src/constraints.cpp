#include "effcas/constraints.hpp"

#include "effcas/errors.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace effcas {

CasimirSpec CasimirSpec::quadratic(const EnginePtr& engine, const Coefficient& value) {
    const auto k = engine->algebra().killing_upper();
    if (!k) throw DomainError("algebra has no invertible Killing form");
    const int M = engine->dim();
    OperatorPolynomial c(engine);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const Rational& kij = (*k)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (sgn(kij) == 0) continue;
            c += multiply(OperatorPolynomial::generator(engine, i), OperatorPolynomial::generator(engine, j)) *
                 Coefficient(GaussRational(kij));
        }
    return {c, value};
}

OperatorPolynomial CasimirSpec::constraint_operator() const {
    return casimir - OperatorPolynomial::constant(casimir.engine(), value);
}

Coefficient CasimirSpec::classical() const {
    return constraint_operator().coefficient(MultiIndex(casimir.engine()->dim())).hbar_slice(0);
}

namespace {

double moment_value(const MomentState& s, const MultiIndex& j) { return j.degree() == 0 ? 1.0 : s.moment(j); }

double term_value(const ConstraintTerm& t, const MomentState& s) {
    double v = t.coeff.evaluate(s.x(), s.hbar()).real() * moment_value(s, t.moment);
    if (t.moment2) v *= moment_value(s, *t.moment2);
    return v;
}

using TermKey = std::tuple<MultiIndex, MultiIndex, int, bool>;

void add(std::map<TermKey, Coefficient>& acc, const MultiIndex& m, const std::optional<MultiIndex>& m2,
         const Coefficient& c, int p, bool classical) {
    if (m.degree() == 1 || (m2 && m2->degree() == 1)) return;
    MultiIndex a = m, b = m2 ? *m2 : MultiIndex(m.dim());
    // products are symmetric; keep the larger index first
    if (m2 && a < b) std::swap(a, b);
    acc[{a, b, p, classical}] += c;
}

ConstraintExpression assemble(const MultiIndex& label, const std::map<TermKey, Coefficient>& acc) {
    ConstraintExpression e{label, {}};
    for (const auto& [key, c] : acc) {
        if (c.is_zero()) continue;
        const auto& [a, b, p, classical] = key;
        ConstraintTerm t;
        t.moment = a;
        if (b.degree() > 0) t.moment2 = b;
        t.coeff = c;
        t.hbar_power = p;
        t.classical_factor = classical;
        t.order = semiclassical_order_of_term(a.degree() + b.degree(), p, classical);
        e.terms.push_back(std::move(t));
    }
    return e;
}

} // namespace

int ConstraintExpression::max_order() const {
    int m = -1;
    for (const auto& t : terms) m = std::max(m, t.order);
    return m;
}

int ConstraintExpression::max_moment_degree() const {
    int m = 0;
    for (const auto& t : terms) {
        m = std::max(m, t.moment.degree());
        if (t.moment2) m = std::max(m, t.moment2->degree());
    }
    return m;
}

double ConstraintExpression::evaluate(const MomentState& state) const {
    double v = 0.0;
    for (const auto& t : terms) v += term_value(t, state);
    return v;
}

double ConstraintExpression::scale(const MomentState& state) const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(term_value(t, state));
    return s;
}

Eigen::VectorXd ConstraintExpression::gradient(const MomentState& state, int lo, int hi) const {
    const auto idx = indices_in_degree_range(state.dim(), lo, hi);
    std::map<MultiIndex, Eigen::Index> pos;
    for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<Eigen::Index>(k);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
    for (const auto& t : terms) {
        const double c = t.coeff.evaluate(state.x(), state.hbar()).real();
        auto hit = [&](const MultiIndex& a, double other) {
            auto it = pos.find(a);
            if (it != pos.end()) g[it->second] += c * other;
        };
        if (t.moment2) {
            hit(t.moment, moment_value(state, *t.moment2));
            hit(*t.moment2, moment_value(state, t.moment));
        } else {
            hit(t.moment, 1.0);
        }
    }
    return g;
}

std::map<std::pair<MultiIndex, MultiIndex>, Coefficient> ConstraintExpression::canonical() const {
    std::map<std::pair<MultiIndex, MultiIndex>, Coefficient> out;
    for (const auto& t : terms) {
        MultiIndex b = t.moment2 ? *t.moment2 : MultiIndex(t.moment.dim());
        out[{t.moment, b}] += t.coeff;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

nlohmann::json ConstraintExpression::to_json() const {
    nlohmann::json j;
    j["label"] = label.entries();
    j["terms"] = nlohmann::json::array();
    for (const auto& t : terms) {
        nlohmann::json jt = {{"index", t.moment.entries()},
                             {"coeff", t.coeff.to_string()},
                             {"hbar_power", t.hbar_power},
                             {"classical_factor", t.classical_factor},
                             {"order", t.order}};
        if (t.moment2) jt["index2"] = t.moment2->entries();
        j["terms"].push_back(jt);
    }
    return j;
}

ConstraintExpression ConstraintExpression::from_json(const nlohmann::json& j) {
    try {
        ConstraintExpression c;
        c.label = MultiIndex(j.at("label").get<std::vector<int>>());
        for (const auto& jt : j.at("terms")) {
            ConstraintTerm t;
            t.moment = MultiIndex(jt.at("index").get<std::vector<int>>());
            if (jt.contains("index2")) t.moment2 = MultiIndex(jt.at("index2").get<std::vector<int>>());
            t.coeff = Coefficient::parse(jt.at("coeff").get<std::string>());
            t.hbar_power = jt.at("hbar_power").get<int>();
            t.classical_factor = jt.at("classical_factor").get<bool>();
            t.order = jt.at("order").get<int>();
            c.terms.push_back(std::move(t));
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed constraint: ") + e.what());
    }
}

ConstraintExpression effective_constraint(const CasimirSpec& spec, const MultiIndex& idx, bool on_shell) {
    const EnginePtr& eng = spec.engine();
    const int M = eng->dim();
    const MultiIndex zero(M);
    const OperatorPolynomial op = spec.constraint_operator();
    const Coefficient classical = spec.classical();

    std::map<TermKey, Coefficient> acc;
    // The C(x) e_0 part of the operator multiplies e_idx directly.
    add(acc, idx, std::nullopt, classical, 0, true);
    OperatorPolynomial rest = op - OperatorPolynomial::constant(eng, classical);
    OperatorPolynomial prod = multiply(OperatorPolynomial::basis(eng, idx), rest);
    for (const auto& [j, c] : prod.terms())
        for (int p : c.hbar_powers()) add(acc, j, std::nullopt, c.hbar_slice(p), p, false);

    if (on_shell && idx.degree() >= 2) {
        for (const auto& [j, c] : op.terms()) {
            if (j.degree() == 1) continue;
            for (int p : c.hbar_powers()) {
                const Coefficient part = -c.hbar_slice(p);
                if (j.degree() == 0)
                    add(acc, idx, std::nullopt, part, p, p == 0);
                else
                    add(acc, idx, j, part, p, false);
            }
        }
    }
    return assemble(idx, acc);
}

ConstraintExpression leading_part(const ConstraintExpression& c) {
    const int target = std::max(c.label.degree() + 1, 2);
    ConstraintExpression out{c.label, {}};
    for (const auto& t : c.terms)
        if (!t.classical_factor && t.hbar_power == 0 && !t.moment2 && t.moment.degree() == target)
            out.terms.push_back(t);
    return out;
}

ConstraintExpression truncate(const ConstraintExpression& c, int N) {
    ConstraintExpression out{c.label, {}};
    for (const auto& t : c.terms)
        if (t.order <= N) out.terms.push_back(t);
    return out;
}

std::vector<ConstraintExpression> constraint_tower(const CasimirSpec& spec, int N, bool truncated, bool on_shell) {
    if (N < 2) throw std::invalid_argument("truncation order must be at least 2");
    std::vector<ConstraintExpression> tower;
    for (const auto& idx : indices_in_degree_range(spec.engine()->dim(), 0, N - 1)) {
        auto c = effective_constraint(spec, idx, on_shell);
        if (truncated) c = truncate(c, N);
        if (!c.trivial()) tower.push_back(std::move(c));
    }
    return tower;
}

Eigen::VectorXd impose(const std::vector<ConstraintExpression>& tower, const MomentState& state) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(tower.size()));
    for (std::size_t k = 0; k < tower.size(); ++k) r[static_cast<Eigen::Index>(k)] = tower[k].evaluate(state);
    return r;
}

namespace {

int tower_degree(const std::vector<ConstraintExpression>& tower) {
    int d = 2;
    for (const auto& c : tower) d = std::max(d, c.max_moment_degree());
    return d;
}

Eigen::MatrixXd jacobian(const std::vector<ConstraintExpression>& tower, const MomentState& s, int hi) {
    const auto n = static_cast<Eigen::Index>(indices_in_degree_range(s.dim(), 2, hi).size());
    Eigen::MatrixXd J(static_cast<Eigen::Index>(tower.size()), n);
    for (std::size_t k = 0; k < tower.size(); ++k) J.row(static_cast<Eigen::Index>(k)) = tower[k].gradient(s, 2, hi);
    return J;
}

// largest residual relative to its constraint's own scale (hbar^2 floor)
double relative_residual(const std::vector<ConstraintExpression>& tower, const MomentState& s) {
    double worst = 0.0;
    const double floor = s.hbar() * s.hbar();
    for (const auto& c : tower) worst = std::max(worst, std::abs(c.evaluate(s)) / std::max(c.scale(s), floor));
    return worst;
}

} // namespace

ProjectResult project(const std::vector<ConstraintExpression>& tower, const MomentState& state,
                      const ProjectOptions& options) {
    const int hi = tower_degree(tower);
    if (hi > state.order()) throw OrderOverflow("state order below tower order");
    MomentState cur = state;
    double mu = options.damping;
    double err = relative_residual(tower, cur);
    double rnorm = impose(tower, cur).norm();
    for (int it = 0; it < options.max_iterations; ++it) {
        if (err <= options.tolerance) return {cur, it, err};
        const Eigen::VectorXd r = impose(tower, cur);
        const Eigen::MatrixXd J = jacobian(tower, cur, hi);
        // minimum-norm damped step; the system is underdetermined
        Eigen::MatrixXd G = J * J.transpose();
        const double s = std::max(G.diagonal().maxCoeff(), 1e-300);
        G.diagonal().array() += mu * s;
        const Eigen::VectorXd step = -J.transpose() * G.ldlt().solve(r);
        MomentState trial = cur;
        trial.set_moment_vector(2, hi, cur.moment_vector(2, hi) + step);
        const double tnorm = impose(tower, trial).norm();
        if (tnorm < rnorm) {
            cur = std::move(trial);
            rnorm = tnorm;
            err = relative_residual(tower, cur);
            mu = std::max(mu * 0.1, 1e-15);
        } else {
            mu *= 10.0;
        }
    }
    if (err <= options.tolerance) return {cur, options.max_iterations, err};
    throw ConvergenceError("projection did not converge, relative residual " + std::to_string(err));
}

int jacobian_rank(const std::vector<ConstraintExpression>& tower, const MomentState& state, double rel_threshold) {
    if (tower.empty()) return 0;
    const Eigen::MatrixXd J = jacobian(tower, state, tower_degree(tower));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > rel_threshold * sv[0]) ++r;
    return r;
}

} // namespace effcas
