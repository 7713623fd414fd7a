#include "effcas/constraints.hpp"
#include "effcas/errors.hpp"
#include "effcas/oracle.hpp"
#include "effcas/sl2_cosmology.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace effcas;
namespace fs = std::filesystem;

namespace {

struct Global {
    std::string model = "su2";
    std::string algebra_file;
    double hbar = 1.0;
    int order = 3;
    std::uint64_t seed = 12345;
    std::string out;
    std::optional<double> tolerance;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string csv_row(std::initializer_list<double> values) {
    std::string s;
    for (double v : values) {
        if (!s.empty()) s += ',';
        s += num(v);
    }
    return s + '\n';
}

// stdout when no --out, otherwise DIR/name written through a temporary file
void emit(const Global& g, const std::string& name, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(g.out);
    const fs::path target = fs::path(g.out) / name;
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << text;
    }
    fs::rename(tmp, target);
}

LieAlgebra load_algebra(const Global& g) {
    return g.algebra_file.empty() ? LieAlgebra::builtin(g.model) : LieAlgebra::from_file(g.algebra_file);
}

Coefficient default_casimir(const std::string& model) {
    return model == "sl2r-cosmo" ? Coefficient::rational(1, 4) * Coefficient::hbar() * Coefficient::hbar()
                                 : Coefficient(0);
}

int cmd_validate(const Global& g) {
    const auto alg = load_algebra(g);
    const auto r = alg.validate();
    std::cout << "antisymmetry: " << (r.antisymmetry ? "pass" : "fail") << '\n'
              << "jacobi: " << (r.jacobi ? "pass" : "fail") << '\n'
              << "killing: " << (r.killing ? "pass" : "fail") << '\n';
    if (!r.ok()) std::cout << "first violation: " << r.first_violation << '\n';
    return r.ok() ? 0 : 1;
}

int cmd_dof(const Global& g, int dim) {
    const int M = dim > 0 ? dim : load_algebra(g).dim();
    std::string s = "N,moments,conditions\n";
    for (int N = 2; N <= g.order; ++N)
        s += std::to_string(N) + ',' + std::to_string(count_moments(M, N)) + ',' +
             std::to_string(count_constraint_conditions(M, N)) + '\n';
    emit(g, "dof.csv", s);
    return 0;
}

int cmd_tower(const Global& g, const std::string& casimir, bool untruncated) {
    const auto alg = load_algebra(g);
    const auto spec = CasimirSpec::quadratic(make_engine(alg),
                                             casimir.empty() ? default_casimir(g.model) : Coefficient::parse(casimir));
    const auto tower = constraint_tower(spec, g.order, !untruncated);
    nlohmann::json j;
    j["model"] = g.algebra_file.empty() ? g.model : g.algebra_file;
    j["order"] = g.order;
    j["truncated"] = !untruncated;
    j["casimir_value"] = spec.value.to_string();
    j["counting"] = nlohmann::json::array();
    for (int N = 2; N <= g.order; ++N) {
        int nontrivial = 0;
        for (const auto& c : tower)
            if (c.label.degree() == N - 1 && !truncate(c, N).trivial()) ++nontrivial;
        j["counting"].push_back({{"N", N},
                                 {"moments", count_moments(alg.dim(), N)},
                                 {"conditions", count_constraint_conditions(alg.dim(), N)},
                                 {"new_constraints", nontrivial}});
    }
    j["constraints"] = nlohmann::json::array();
    for (const auto& c : tower) j["constraints"].push_back(c.to_json());
    emit(g, "tower.json", j.dump(2) + '\n');
    return 0;
}

struct ConstantsArgs {
    double A = 50.0, H = 20.0, dH2 = 30.0, lambda0 = 0.0;
    std::vector<double> explicit_c;  // c1..c6
    bool swap = false;
};

sl2::SolutionConstants constants(const Global& g, const ConstantsArgs& a) {
    if (a.explicit_c.empty()) return sl2::SolutionConstants::saturated(a.A, a.H, a.dH2, a.lambda0, g.hbar, a.swap);
    if (a.explicit_c.size() != 6) throw CLI::ValidationError("--constants", "needs c1..c6");
    sl2::SolutionConstants c;
    c.A = a.A;
    c.H = a.H;
    c.lambda0 = a.lambda0;
    c.hbar = g.hbar;
    c.c1 = a.explicit_c[0];
    c.c2 = a.explicit_c[1];
    c.c3 = a.explicit_c[2];
    c.c4 = a.explicit_c[3];
    c.c5 = a.explicit_c[4];
    c.c6 = a.explicit_c[5];
    return c;
}

int cmd_evolve(const Global& g, const ConstantsArgs& a, double from, double to, double step, int every) {
    if (!(to > from)) throw CLI::ValidationError("--to", "must exceed --from");
    const auto c = constants(g, a);
    // start at the bounce and integrate outward; both exponential modes stay comparable
    const double start = std::clamp(c.lambda0, from, to);
    const auto initial = sl2::closed_form(c, start);
    sl2::EvolveOptions opt{g.tolerance.value_or(1e-8), every};
    std::vector<std::pair<double, sl2::HarmonicState>> rows;
    if (start > from) {
        const auto back = sl2::evolve(initial, start, from, step, opt);
        for (std::size_t k = back.states.size(); k-- > 1;) rows.emplace_back(back.lambda[k], back.states[k]);
    }
    rows.emplace_back(start, initial);
    if (to > start) {
        const auto fwd = sl2::evolve(initial, start, to, step, opt);
        for (std::size_t k = 1; k < fwd.states.size(); ++k) rows.emplace_back(fwd.lambda[k], fwd.states[k]);
    }
    std::string s = "lambda,V,ReJ,ImJ,dV2,Re_dJ2,Im_dJ2,Re_dVJ,Im_dVJ,dJJ,uncert1_residual,reality_residual\n";
    for (const auto& [lam, st] : rows)
        s += csv_row({lam, st.V, st.J.real(), st.J.imag(), st.dV2, st.dJ2.real(), st.dJ2.imag(), st.dVJ.real(),
                      st.dVJ.imag(), st.dJJ, sl2::uncert1_residual(st), sl2::reality_residual(st)});
    emit(g, "evolve.csv", s);
    return 0;
}

int cmd_coherent(const Global& g, const sl2::SaturationTarget& t0, bool solve) {
    auto t = t0;
    t.hbar = g.hbar;
    sl2::HarmonicState h;
    h.hbar = g.hbar;
    h.V = t.V;
    h.J = sl2::cplx(t.Jp, t.Jm);
    h.dV2 = t.dV2;
    h.dVJ = t.dVJp;
    const auto alpha = sl2::saturation_alpha(h);
    const auto e = sl2::coherent_existence(alpha);
    std::ostringstream o;
    o << "alpha," << num(alpha.real()) << ',' << num(alpha.imag()) << '\n'
      << "k_plus," << num(e.k_plus.real()) << ',' << num(e.k_plus.imag()) << '\n'
      << "k_minus," << num(e.k_minus.real()) << ',' << num(e.k_minus.imag()) << '\n'
      << "exists," << (e.exists ? 1 : 0) << '\n';
    if (!e.exists) {
        std::cout << o.str();
        std::cerr << "no normalizable solution: alpha is real with |alpha| <= 1\n";
        return 1;
    }
    if (solve) {
        const auto s = sl2::solve_saturating_state(t);
        const auto& a = s.achieved;
        o << "level," << s.level << '\n'
          << "iterations," << s.iterations << '\n'
          << "V," << num(a.V) << '\n'
          << "Jp," << num(a.Jp()) << '\n'
          << "Jm," << num(a.Jm()) << '\n'
          << "dV2," << num(a.dV2) << '\n'
          << "dVJp," << num(a.dVJp()) << '\n'
          << "dJp2," << num(a.dJp2()) << '\n'
          << "psi_sat_residual," << num(s.psi_sat_residual) << '\n'
          << "saturation_residual," << num(s.saturation.residual) << '\n'
          << "saturation_scale," << num(s.saturation.scale) << '\n'
          << "tail," << num(s.tail) << '\n';
        if (!g.out.empty()) {
            std::string p = "n,re,im\n";
            for (int n = 0; n <= s.n_max; ++n) p += csv_row({double(n), s.psi[n].real(), s.psi[n].imag()});
            emit(g, "psi.csv", p);
        }
    }
    std::cout << o.str();
    return 0;
}

int cmd_asymmetry(const Global& g, const ConstantsArgs& a, bool general) {
    const auto c = constants(g, a);
    const auto r = sl2::asymmetry(c, !general, g.tolerance.value_or(1e-10));
    std::cout << "delta," << num(r.delta) << '\n'
              << "delta_squared," << num(r.delta_squared) << '\n'
              << "bound_squared," << num(r.bound_squared) << '\n'
              << "bound," << num(r.bound) << '\n'
              << "relative_change," << num(r.relative_change) << '\n'
              << "holds," << (r.holds ? 1 : 0) << '\n';
    if (!r.real_bound) {
        std::cerr << "no real saturated solution: bound squared is negative\n";
        return 1;
    }
    return r.holds ? 0 : 1;
}

struct OracleArgs {
    double spin = 1.0;
    std::string state = "highest";
    double n0 = 200.0, sigma = 5.0, p = 0.5;
};

int cmd_oracle(const Global& g, const OracleArgs& a) {
    const double tol = g.tolerance.value_or(1e-10);
    oracle::MatrixRep rep;
    oracle::Vector psi;
    Coefficient value;
    const auto h2 = Coefficient::hbar() * Coefficient::hbar();
    if (g.model == "su2") {
        rep = oracle::build_su2(a.spin, g.hbar);
        const long twice = std::lround(2 * a.spin);
        value = Coefficient::rational(twice * (twice + 2), 4) * h2;
        if (a.state == "highest") {
            psi = oracle::Vector::Zero(rep.size());
            psi[0] = 1.0;
        } else if (a.state == "random") {
            psi = oracle::random_vector(rep.size(), g.seed);
        } else {
            throw CLI::ValidationError("--state", "su2 states: highest, random");
        }
    } else if (g.model == "sl2r-cosmo") {
        auto [lo, hi] = oracle::gaussian_window(a.n0, a.sigma, g.order + 1);
        rep = oracle::build_sl2_ladder(lo, hi, g.hbar);
        value = Coefficient::rational(1, 4) * h2;
        psi = oracle::gaussian_profile(rep, a.n0, a.sigma, a.p);
    } else {
        throw CLI::ValidationError("--model", "oracle supports su2 and sl2r-cosmo");
    }
    const auto spec = CasimirSpec::quadratic(make_engine(LieAlgebra::builtin(g.model)), value);
    const auto tower = constraint_tower(spec, g.order, false);
    int need = 2;
    for (const auto& c : tower) need = std::max(need, c.max_moment_degree());
    const auto ms = oracle::moments_of_vector(rep, psi, need);
    std::string s = "label,residual,scale,relative\n";
    bool ok = true;
    for (const auto& c : tower) {
        const double r = c.evaluate(ms), sc = std::max(c.scale(ms), g.hbar * g.hbar);
        ok = ok && std::abs(r) <= tol * sc;
        std::string label;
        for (int e : c.label.entries()) label += std::to_string(e);
        s += label + ',' + num(r) + ',' + num(sc) + ',' + num(r / sc) + '\n';
    }
    emit(g, "oracle.csv", s);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective Casimir constraints: towers, dynamics and oracle checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config; sections per subcommand");
    Global g;
    double tol = 0.0;
    app.add_option("--model", g.model, "Built-in algebra (su2, sl2r-cosmo)");
    app.add_option("--algebra-file", g.algebra_file, "Algebra definition (JSON)");
    app.add_option("--hbar", g.hbar)->check(CLI::PositiveNumber);
    app.add_option("--order", g.order, "Truncation order N")->check(CLI::Range(2, 8));
    app.add_option("--seed", g.seed);
    app.add_option("--out", g.out, "Output directory (default stdout)");
    auto* tol_opt = app.add_option("--tolerance", tol)->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Check algebra invariants");
    validate->add_option("file", g.algebra_file, "Algebra definition (JSON)");

    auto* dof = app.add_subcommand("dof", "Moment and condition counts");
    int dim = 0;
    dof->add_option("--dim", dim, "Generator count (default: model dimension)")->check(CLI::Range(1, 8));

    auto* tower = app.add_subcommand("tower", "Export the constraint tower");
    std::string casimir;
    bool untruncated = false;
    tower->add_option("--casimir", casimir, "Casimir value as a polynomial in hbar, e.g. 3/4*hbar^2");
    tower->add_flag("--untruncated", untruncated);

    ConstantsArgs ca;
    auto add_constants = [&](CLI::App* sub) {
        sub->add_option("--A", ca.A);
        sub->add_option("--H", ca.H);
        sub->add_option("--dH2", ca.dH2);
        sub->add_option("--lambda0", ca.lambda0);
        sub->add_option("--constants", ca.explicit_c, "c1..c6 instead of the saturated preset")->expected(6);
        sub->add_flag("--swap", ca.swap, "Saturated branch with c3 < c4");
    };
    auto* evolve = app.add_subcommand("evolve", "Integrate moment dynamics");
    add_constants(evolve);
    double from = -5.0, to = 5.0, step = 1e-3;
    int every = 100;
    evolve->add_option("--from", from);
    evolve->add_option("--to", to);
    evolve->add_option("--step", step)->check(CLI::PositiveNumber);
    evolve->add_option("--every", every, "Output every k-th step")->check(CLI::PositiveNumber);

    auto* coherent = app.add_subcommand("coherent-check", "Existence of a saturating state");
    sl2::SaturationTarget target{100.0, 0.0, 80.0, 10.0, 0.0, 1.0};
    bool solve = false;
    coherent->add_option("--V", target.V);
    coherent->add_option("--Jp", target.Jp);
    coherent->add_option("--Jm", target.Jm);
    coherent->add_option("--dV2", target.dV2)->check(CLI::PositiveNumber);
    coherent->add_option("--dVJp", target.dVJp);
    coherent->add_flag("--solve", solve, "Solve for the wave function and report its moments");

    auto* asym = app.add_subcommand("asymmetry", "Fluctuation asymmetry and its bound");
    add_constants(asym);
    bool general = false;
    asym->add_flag("--general", general, "Inequality form for non-saturated constants");

    auto* orc = app.add_subcommand("oracle", "Evaluate the untruncated tower on matrix-oracle moments");
    OracleArgs oa;
    orc->add_option("--spin", oa.spin);
    orc->add_option("--state", oa.state, "su2: highest or random");
    orc->add_option("--n0", oa.n0);
    orc->add_option("--sigma", oa.sigma);
    orc->add_option("--p", oa.p);

    for (auto* sub : {validate, dof, tower, evolve, coherent, asym, orc}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (tol_opt->count() > 0) g.tolerance = tol;

    try {
        if (*validate) return cmd_validate(g);
        if (*dof) return cmd_dof(g, dim);
        if (*tower) return cmd_tower(g, casimir, untruncated);
        if (*evolve) return cmd_evolve(g, ca, from, to, step, every);
        if (*coherent) return cmd_coherent(g, target, solve);
        if (*asym) return cmd_asymmetry(g, ca, general);
        if (*orc) return cmd_oracle(g, oa);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
