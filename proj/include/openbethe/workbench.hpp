#pragma once

#include <functional>
#include <random>
#include <thread>

#include "openbethe/config.hpp"
#include "openbethe/report.hpp"
#include "openbethe/spectra.hpp"

namespace openbethe {

namespace detail {

/// Evaluate fn(0..n-1) across a few workers; results land in a preassigned
/// slot per index, so the merge is deterministic regardless of scheduling.
inline std::vector<double> parallel_map(int n, const std::function<double(int)>& fn) {
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    const unsigned workers = std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
    if (workers == 1 || n < 4) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers))
                out[static_cast<std::size_t>(i)] = fn(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

inline double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

struct PointDraw {
    std::mt19937_64 rng;
    double window;
    PointDraw(std::uint64_t seed, double w) : rng(seed), window(w) {}

    Cplx any() {
        std::uniform_real_distribution<double> u(-window, window);
        const double re = u(rng), im = u(rng);
        return {re, im};
    }

    template <typename Guard>
    Cplx safe(Guard&& ok) {
        for (int tries = 0; tries < 500; ++tries) {
            const Cplx z = any();
            if (ok(z)) return z;
        }
        throw config_error("sampling window contains no admissible points");
    }
};

inline auto chain_guard(const ChainConfig& chain) {
    return [&chain](Cplx z) {
        try {
            chain.guard_poles(z);
            chain.guard_poles_reversed(z);
            chain.guard_poles(z + chain.eta / 2.0);
            chain.guard_poles_reversed(z - chain.eta / 2.0);
            return std::abs(2.0 * z + chain.eta) > 0.1 && std::abs(z) > 0.05;
        } catch (const domain_error&) {
            return false;
        }
    };
}

inline auto gaudin_guard(const GaudinConfig& g) {
    return [&g](Cplx z) {
        try {
            g.guard_poles(z);
            return std::abs(z) > 0.05;
        } catch (const domain_error&) {
            return false;
        }
    };
}

/// Draw admissible points that also stay off the pair-collision surfaces
/// mu_i = mu_j, mu_i = -mu_j and mu_i + mu_j + eta = 0.
inline std::vector<Cplx> separated(PointDraw& draw, const std::function<bool(Cplx)>& ok, int count,
                                   Cplx eta = Cplx{0.0}) {
    std::vector<Cplx> out;
    int tries = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++tries > 2000) throw config_error("could not draw separated sample points");
        const Cplx z = draw.safe(ok);
        bool good = true;
        for (Cplx r : out)
            if (std::abs(z - r) < 0.15 || std::abs(z + r) < 0.15 || std::abs(z + r + eta) < 0.15) good = false;
        if (good) out.push_back(z);
    }
    return out;
}

}  // namespace detail

/// Built-in desk-scale defaults used when the config file leaves a section out.
inline ChainConfig default_chain(int n) {
    switch (n) {
        case 1:
            return ChainConfig{{0.5}, {Cplx{0.0}}, Cplx{0.9, -0.4}};
        case 2:
            return ChainConfig{{0.5, 1.0}, {Cplx{0.2, -0.1}, Cplx{-0.3, 0.25}}, Cplx{0.9, -0.4}};
        case 3:
            return ChainConfig{{0.5, 1.0, 0.5},
                               {Cplx{0.2, -0.1}, Cplx{-0.3, 0.25}, Cplx{0.15, 0.3}},
                               Cplx{0.9, -0.4}};
        default:
            throw config_error("default chains exist for n = 1, 2, 3; use a config file beyond that");
    }
}

inline TriangularBoundary default_boundary() {
    TriangularBoundary b;
    b.xi_minus = Cplx{1.1, 0.2};
    b.nu_minus = Cplx{0.75, -0.15};
    b.psi_minus = Cplx{0.4, 0.3};
    b.xi_plus = Cplx{0.95, -0.1};
    b.nu_plus = Cplx{1.05, 0.2};
    b.psi_plus = Cplx{0.6, -0.25};
    return b;
}

inline GaudinConfig default_gaudin(int n) {
    const ChainConfig chain = default_chain(n);
    return GaudinConfig{chain.spins, chain.alphas,
                        GaudinBoundary{Cplx{1.1, -0.2}, Cplx{0.8, 0.3}, Cplx{0.55, -0.15}}};
}

struct VerifyRequest {
    std::string suite;
    int sites = 2;        // used when the config has no [chain]
    int excitations = 1;  // offshell / solve excitation count
};

inline Report run_verify(const VerifyRequest& req, const RunConfig& rc) {
    Report rep;
    rep.command = "verify " + req.suite;
    rep.seed = rc.seed;
    const ChainConfig chain = rc.chain ? *rc.chain : default_chain(req.sites);
    const TriangularBoundary bnd = rc.boundary ? *rc.boundary : default_boundary();
    echo_chain(rep, chain);
    echo_boundary(rep, bnd);
    detail::PointDraw draw(rc.seed, rc.window);
    const auto ok = detail::chain_guard(chain);
    const int n = rc.samples;

    if (req.suite == "ybe") {
        std::vector<std::pair<Cplx, Cplx>> pts;
        std::vector<Cplx> etas;
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(draw.any(), draw.any());
            etas.push_back(draw.any());
        }
        const double tol = rc.tolerance("ybe", 1e-12);
        const auto run = [&](const char* name, const char* tag, double (*f)(Cplx, Cplx)) {
            rep.add(name, tag,
                    detail::max_of(detail::parallel_map(
                        n, [&](int i) { return f(pts[static_cast<std::size_t>(i)].first, etas[static_cast<std::size_t>(i)]); })),
                    tol);
        };
        rep.add("yang-baxter", "YBE",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto& [l, m] = pts[static_cast<std::size_t>(i)];
                                                        return ybe_residual(l, m, etas[static_cast<std::size_t>(i)]);
                                                    })),
                tol);
        run("unitarity", "unitarity", unitarity_residual);
        run("parity", "parity", parity_residual);
        run("temporal", "temporal", temporal_residual);
        run("crossing", "crossing", crossing_residual);
        return rep;
    }

    if (req.suite == "rtt") {
        std::vector<std::pair<Cplx, Cplx>> pts;
        for (int i = 0; i < n; ++i) pts.emplace_back(draw.safe(ok), draw.safe(ok));
        const double tol = rc.tolerance("rtt", 1e-10);
        rep.add("rtt", "RTT",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto& [l, m] = pts[static_cast<std::size_t>(i)];
                                                        return rtt_residual(l, m, chain);
                                                    })),
                tol);
        rep.add("mixed-reversed", "tTRT",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto& [l, m] = pts[static_cast<std::size_t>(i)];
                                                        return mixed_ttilde_t_residual(l, m, chain);
                                                    })),
                tol);
        rep.add("reversed-reversed", "tTtTR",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto& [l, m] = pts[static_cast<std::size_t>(i)];
                                                        return mixed_ttilde_ttilde_residual(l, m, chain);
                                                    })),
                tol);
        return rep;
    }

    if (req.suite == "reflection") {
        const double tol = rc.tolerance("reflection", 1e-12);
        std::vector<BoundaryParams> params(static_cast<std::size_t>(n));
        std::vector<std::pair<Cplx, Cplx>> pts;
        std::vector<Cplx> etas;
        for (int i = 0; i < n; ++i) {
            auto& p = params[static_cast<std::size_t>(i)];
            p.xi_minus = draw.any();
            p.phi_tilde_minus = draw.any();
            p.psi_tilde_minus = draw.any();
            p.xi_plus = draw.any();
            p.phi_tilde_plus = draw.any();
            p.psi_tilde_plus = draw.any();
            pts.emplace_back(draw.any(), draw.any());
            etas.push_back(draw.any());
        }
        rep.add("reflection", "RE",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto k = static_cast<std::size_t>(i);
                                                        return reflection_residual(pts[k].first, pts[k].second,
                                                                                   etas[k], params[k]);
                                                    })),
                tol);
        rep.add("dual-reflection", "dRE",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto k = static_cast<std::size_t>(i);
                                                        return dual_reflection_residual(pts[k].first, pts[k].second,
                                                                                        etas[k], params[k]);
                                                    })),
                tol);
        return rep;
    }

    if (req.suite == "exchange") {
        std::vector<std::pair<Cplx, Cplx>> pts;
        for (int i = 0; i < n; ++i) pts.emplace_back(draw.safe(ok), draw.safe(ok));
        rep.add("exchange", "exchangeRE",
                detail::max_of(detail::parallel_map(n,
                                                    [&](int i) {
                                                        const auto& [l, m] = pts[static_cast<std::size_t>(i)];
                                                        return exchange_residual(l, m, chain, bnd);
                                                    })),
                rc.tolerance("exchange", 1e-10));
        return rep;
    }

    if (req.suite == "appendixB") {
        const double tol = rc.tolerance("appendixB", 1e-9);
        AppendixBReport worst;
        for (int k = 0; k < std::max(1, n / 5); ++k) {
            const Cplx lam = draw.safe(ok), mu = draw.safe(ok);
            const auto mus = detail::separated(draw, ok, 2, chain.eta);
            const AppendixBReport ab = verify_appendix_b(lam, mu, mus[0], mus[1], chain, bnd);
            if (worst.entries.empty()) {
                worst = ab;
            } else {
                for (std::size_t i = 0; i < ab.entries.size(); ++i)
                    worst.entries[i].residual = std::max(worst.entries[i].residual, ab.entries[i].residual);
            }
        }
        for (const auto& e : worst.entries) rep.add(e.name, "comm-rel:" + e.name, e.residual, tol);
        return rep;
    }

    if (req.suite == "commutativity") {
        std::vector<std::pair<Cplx, Cplx>> pts;
        for (int i = 0; i < n; ++i) pts.emplace_back(draw.safe(ok), draw.safe(ok));
        rep.add("transfer-commutes", "open-tt",
                detail::max_of(detail::parallel_map(
                    n,
                    [&](int i) {
                        const auto& [l, m] = pts[static_cast<std::size_t>(i)];
                        return commutator_residual(transfer_matrix(l, chain, bnd), transfer_matrix(m, chain, bnd));
                    })),
                rc.tolerance("commutativity", 1e-10));
        return rep;
    }

    if (req.suite == "determinant") {
        double dual = 0.0, vac = 0.0, central_t = 0.0, central_b = 0.0;
        for (int k = 0; k < std::max(1, n / 5); ++k) {
            const Cplx lam = draw.safe(ok), mu = draw.safe(ok);
            const Matrix det = sklyanin_determinant(lam, chain, bnd);
            dual = std::max(dual, rel_residual(det, sklyanin_determinant_trace(lam, chain, bnd)));
            const Vector om = pseudo_vacuum(chain);
            const Cplx ev = 2.0 * lam * vacuum_alpha(lam + chain.eta / 2.0, chain, bnd) *
                            vacuum_delta_hat(lam - chain.eta / 2.0, chain, bnd);
            vac = std::max(vac, max_abs(Vector(det * om - ev * om)) / std::abs(ev));
            central_t = std::max(central_t, commutator_residual(det, transfer_matrix(mu, chain, bnd)));
            const SklyaninBlocks s = sklyanin_monodromy(mu, chain, bnd);
            for (const Matrix* blk : {&s.a, &s.b, &s.c, &s.d})
                central_b = std::max(central_b, commutator_residual(det, *blk));
        }
        rep.add("trace-vs-resolved", "Delta-T-cal", dual, rc.tolerance("determinant", 1e-11));
        rep.add("vacuum-eigenvalue", "Del-calTOm", vac, rc.tolerance("determinant", 1e-11));
        rep.add("centrality-transfer", "Delta-central", central_t, rc.tolerance("centrality", 1e-10));
        rep.add("centrality-blocks", "Delta-central", central_b, rc.tolerance("centrality", 1e-10));
        return rep;
    }

    if (req.suite == "offshell") {
        const double tol = rc.tolerance("offshell", 1e-9);
        const int m = req.excitations;
        double worst = 0.0;
        for (int rep_i = 0; rep_i < std::max(1, n / 5); ++rep_i) {
            std::vector<Cplx> roots = detail::separated(draw, ok, m, chain.eta);
            worst = std::max(worst, off_shell_residual(draw.safe(ok), roots, chain, bnd));
        }
        rep.add("off-shell-action", "t-on-PsiM", worst, tol);
        return rep;
    }

    if (req.suite == "gaudin") {
        const GaudinConfig g = rc.gaudin ? *rc.gaudin : default_gaudin(req.sites);
        echo_gaudin(rep, g);
        double capacity = 0.0;
        for (double s : g.spins) capacity += 2.0 * s;
        if (static_cast<double>(req.excitations) > capacity)
            throw config_error(
                "gaudin suite: excitation count exceeds the weight capacity sum(2 s_m); "
                "the creation product vanishes identically there");
        const auto gok = detail::gaudin_guard(g);
        rep.add("creation-commutes", "F-commute",
                commutator_residual(gaudin_f_operator(draw.safe(gok), g), gaudin_f_operator(draw.safe(gok), g)),
                rc.tolerance("f-commute", 1e-13));
        const int m = req.excitations;
        double worst = 0.0;
        for (int rep_i = 0; rep_i < std::max(1, n / 5); ++rep_i) {
            std::vector<Cplx> roots = detail::separated(draw, gok, m);
            worst = std::max(worst, gaudin_off_shell_residual(draw.safe(gok), roots, g));
        }
        rep.add("tau-off-shell", "tau-on-phiM", worst, rc.tolerance("gaudin", 1e-9));
        const GaudinHamiltonians ham = gaudin_hamiltonians(g);
        const double offs = 1e-6;
        double worst_res = 0.0;
        for (std::size_t m_i = 0; m_i < g.spins.size(); ++m_i) {
            const Cplx am = g.alphas[m_i];
            const Matrix res_p = (offs * gaudin_tau(am + offs, g) + (-offs) * gaudin_tau(am - offs, g)) / 2.0;
            const Matrix res_m = (offs * gaudin_tau(-am + offs, g) + (-offs) * gaudin_tau(-am - offs, g)) / 2.0;
            worst_res = std::max(worst_res, rel_residual(res_p, Matrix(4.0 * ham.h[m_i])));
            worst_res = std::max(worst_res, rel_residual(res_m, Matrix(4.0 * ham.h_tilde[m_i])));
        }
        rep.add("hamiltonian-residues", "open-Ham", worst_res, rc.tolerance("residues", 1e-4));
        double worst_comm = 0.0;
        for (std::size_t a = 0; a < ham.h.size(); ++a)
            for (std::size_t b = a + 1; b < ham.h.size(); ++b)
                worst_comm = std::max(worst_comm, commutator_residual(ham.h[a], ham.h[b]));
        rep.add("hamiltonians-commute", "open-Ham", worst_comm, rc.tolerance("commutativity", 1e-10));
        return rep;
    }

    if (req.suite == "expansion") {
        const GaudinConfig g = rc.gaudin ? *rc.gaudin : default_gaudin(req.sites);
        echo_gaudin(rep, g);
        // The eta-series truncation worsens near the +-alpha_m poles, so the
        // expansion point keeps a wider berth than the generic guard.
        const auto gok = [&g](Cplx z) {
            try {
                g.guard_poles(z);
            } catch (const domain_error&) {
                return false;
            }
            for (const Cplx& a : g.alphas)
                if (std::abs(z - a) < 0.3 || std::abs(z + a) < 0.3) return false;
            return std::abs(z) > 0.2;
        };
        const Cplx lam = draw.safe(gok);
        const ExpansionReport er = quasiclassical_check(lam, g);
        rep.add("expansion-constant", "final-exp c0", er.c0_residual, rc.tolerance("expansion-c0", 1e-6));
        rep.add("expansion-linear", "final-exp c1", er.c1_residual, rc.tolerance("expansion-c1", 1e-6));
        rep.add("expansion-tau", "final-exp c2", er.tau_residual, rc.tolerance("expansion-tau", 1e-5));
        rep.add("expansion-fit", "final-exp fit", er.fit_residual, rc.tolerance("expansion-fit", 1e-8));
        rep.add("richardson-agreement", "final-exp c2", er.richardson_gap,
                rc.tolerance("expansion-richardson", 1e-3));
        // Roots for the scalar limits also stay away from +-lambda, where the
        // eigenvalue products would inflate the eta-series derivatives.
        const auto rok = [&](Cplx z) {
            return gok(z) && std::abs(z - lam) > 0.35 && std::abs(z + lam) > 0.35;
        };
        const auto roots = detail::separated(draw, rok, req.excitations);
        const double v3 = bethe_vector_limit_residual(roots, g, 1e-3);
        const double v4 = bethe_vector_limit_residual(roots, g, 1e-4);
        rep.add("vector-limit-rate", "PsiM-exp", std::abs(v4 / v3 * 10.0 - 1.0),
                rc.tolerance("limit-rate", 0.2));
        const double f3 = bethe_equation_limit_residual(0, roots, g, 1e-3);
        const double f4 = bethe_equation_limit_residual(0, roots, g, 1e-4);
        rep.add("equation-limit-rate", "Fandf", std::abs(f4 / f3 * 10.0 - 1.0), rc.tolerance("limit-rate", 0.2));
        // Scalar arithmetic is cheap, so the eigenvalue expansion runs on a
        // finer grid than the operator fit.
        ExpansionOptions scalar_opt;
        scalar_opt.etas = {1e-4, 5e-5, 2.5e-5, 1.25e-5};
        rep.add("eigenvalue-limit", "exp-Lambda", eigenvalue_limit_residual(lam, roots, g, scalar_opt),
                rc.tolerance("eigenvalue-limit", 1e-6));
        return rep;
    }

    throw config_error("unknown suite: " + req.suite +
                       " (expected ybe, rtt, reflection, exchange, appendixB, commutativity,"
                       " determinant, offshell, gaudin, expansion)");
}

// ---------------------------------------------------------------------------
// solve and spectrum commands
// ---------------------------------------------------------------------------

struct SolveOutcome {
    Report report;
    nlohmann::ordered_json solutions;
};

inline SolveOutcome run_solve_chain(int excitations, const RunConfig& rc, const std::vector<Cplx>& lambdas) {
    SolveOutcome out;
    out.report.command = "solve chain";
    out.report.seed = rc.seed;
    const ChainConfig chain = rc.chain ? *rc.chain : default_chain(1);
    const TriangularBoundary bnd = rc.boundary ? *rc.boundary : default_boundary();
    echo_chain(out.report, chain);
    echo_boundary(out.report, bnd);

    double capacity = 0.0;
    for (double s : chain.spins) capacity += 2.0 * s;
    nlohmann::ordered_json warnings = nlohmann::ordered_json::array();
    if (static_cast<double>(excitations) > capacity)
        warnings.push_back("excitation count exceeds the chain capacity sum(2 s_m); solving anyway");

    SolveOptions opt;
    opt.rng_seed = rc.seed;
    opt.random_seeds = std::max(32, rc.samples);
    const auto states = solve_bethe(excitations, chain, bnd, {}, opt);
    if (states.empty()) warnings.push_back("no converged root sets (this is a result, not an error)");

    detail::PointDraw draw(rc.seed + 17, rc.window);
    const auto ok = detail::chain_guard(chain);
    std::vector<Cplx> sample = lambdas;
    while (sample.size() < 3) sample.push_back(draw.safe(ok));

    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    int matched = 0;
    for (const auto& st : states) {
        nlohmann::ordered_json js;
        nlohmann::ordered_json roots = nlohmann::ordered_json::array();
        for (Cplx r : st.roots) roots.push_back(format_complex(r));
        js["roots"] = roots;
        js["f_residual"] = detail::max_of(st.f_residuals);
        js["zero_vector"] = st.zero_vector;
        nlohmann::ordered_json evs = nlohmann::ordered_json::array();
        bool all_match = !st.zero_vector;
        for (Cplx lam : sample) {
            nlohmann::ordered_json e;
            e["lambda"] = format_complex(lam);
            try {
                const Cplx ev = bethe_lambda(lam, st.roots, chain, bnd);
                e["eigenvalue"] = format_complex(ev);
                if (!st.zero_vector) {
                    const Matrix t = transfer_matrix(lam, chain, bnd);
                    const double dist = spectral_distance(ev, dense_spectrum(t));
                    const double vres = eigenpair_residual(t, ev, st.state);
                    e["spectral_distance"] = dist;
                    e["eigenvector_residual"] = vres;
                    if (dist > 1e-8 || vres > 1e-8) all_match = false;
                }
            } catch (const domain_error& err) {
                e["error"] = err.what();
                all_match = false;
            }
            evs.push_back(e);
        }
        js["eigenvalues"] = evs;
        js["spectral_match"] = all_match;
        if (all_match || st.zero_vector) ++matched;
        list.push_back(js);
    }
    out.solutions["schema_version"] = kSchemaVersion;
    out.solutions["mode"] = "chain";
    out.solutions["excitations"] = excitations;
    out.solutions["warnings"] = warnings;
    out.solutions["states"] = list;
    if (!states.empty())
        out.report.add("spectral-match", "LambdaM",
                       matched == static_cast<int>(list.size()) ? 0.0 : 1.0, 0.5);
    return out;
}

inline SolveOutcome run_solve_gaudin(int excitations, const RunConfig& rc, const std::vector<Cplx>& lambdas) {
    SolveOutcome out;
    out.report.command = "solve gaudin";
    out.report.seed = rc.seed;
    const GaudinConfig g = rc.gaudin ? *rc.gaudin : default_gaudin(2);
    echo_gaudin(out.report, g);

    SolveOptions opt;
    opt.rng_seed = rc.seed;
    opt.random_seeds = std::max(32, rc.samples);
    const auto states = solve_gaudin_bethe(excitations, g, {}, opt);
    nlohmann::ordered_json warnings = nlohmann::ordered_json::array();
    if (states.empty()) warnings.push_back("no converged root sets (this is a result, not an error)");

    detail::PointDraw draw(rc.seed + 17, rc.window);
    const auto gok = detail::gaudin_guard(g);
    std::vector<Cplx> sample = lambdas;
    while (sample.size() < 3) sample.push_back(draw.safe(gok));

    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    int matched = 0;
    for (const auto& st : states) {
        nlohmann::ordered_json js;
        nlohmann::ordered_json roots = nlohmann::ordered_json::array();
        for (Cplx r : st.roots) roots.push_back(format_complex(r));
        js["roots"] = roots;
        js["f_residual"] = detail::max_of(st.f_residuals);
        js["zero_vector"] = st.zero_vector;
        nlohmann::ordered_json evs = nlohmann::ordered_json::array();
        bool all_match = !st.zero_vector;
        for (Cplx lam : sample) {
            nlohmann::ordered_json e;
            e["lambda"] = format_complex(lam);
            try {
                const Cplx ev = gaudin_chi(lam, st.roots, g);
                e["eigenvalue"] = format_complex(ev);
                if (!st.zero_vector) {
                    const Matrix tau = gaudin_tau(lam, g);
                    const double dist = spectral_distance(ev, dense_spectrum(tau));
                    const double vres = eigenpair_residual(tau, ev, st.state);
                    e["spectral_distance"] = dist;
                    e["eigenvector_residual"] = vres;
                    if (dist > 1e-7 || vres > 1e-7) all_match = false;
                }
            } catch (const domain_error& err) {
                e["error"] = err.what();
                all_match = false;
            }
            evs.push_back(e);
        }
        js["eigenvalues"] = evs;
        js["spectral_match"] = all_match;
        if (all_match || st.zero_vector) ++matched;
        list.push_back(js);
    }
    out.solutions["schema_version"] = kSchemaVersion;
    out.solutions["mode"] = "gaudin";
    out.solutions["excitations"] = excitations;
    out.solutions["warnings"] = warnings;
    out.solutions["states"] = list;
    if (!states.empty())
        out.report.add("spectral-match", "chi-M", matched == static_cast<int>(list.size()) ? 0.0 : 1.0, 0.5);
    return out;
}

struct SpectrumTable {
    Report report;
    nlohmann::ordered_json table;
    std::string csv;
};

/// Dense spectrum of t(lambda) (chain mode) or tau(lambda) (gaudin mode) at
/// each requested point, eigenvalues in the canonical (Re, Im) order.
inline SpectrumTable run_spectrum(const RunConfig& rc, const std::vector<Cplx>& lambdas, bool gaudin_mode,
                                  Eigen::Index dimension_cap = kDefaultDimensionCap) {
    SpectrumTable out;
    out.report.command = gaudin_mode ? "spectrum gaudin" : "spectrum chain";
    out.report.seed = rc.seed;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "lambda_re,lambda_im,index,eigenvalue_re,eigenvalue_im\n";
    double worst_vacuum = 0.0;
    if (gaudin_mode) {
        const GaudinConfig g = rc.gaudin ? *rc.gaudin : default_gaudin(2);
        echo_gaudin(out.report, g);
        for (Cplx lam : lambdas) {
            const auto spec = dense_spectrum(gaudin_tau(lam, g), dimension_cap);
            worst_vacuum = std::max(worst_vacuum, spectral_distance(gaudin_chi0(lam, g), spec));
            nlohmann::ordered_json row;
            row["lambda"] = format_complex(lam);
            nlohmann::ordered_json evs = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < spec.size(); ++i) {
                evs.push_back(format_complex(spec[i]));
                csv << lam.real() << "," << lam.imag() << "," << i << "," << spec[i].real() << ","
                    << spec[i].imag() << "\n";
            }
            row["eigenvalues"] = evs;
            rows.push_back(row);
        }
        out.report.add("vacuum-in-spectrum", "chi0", worst_vacuum, 1e-8);
    } else {
        const ChainConfig chain = rc.chain ? *rc.chain : default_chain(2);
        const TriangularBoundary bnd = rc.boundary ? *rc.boundary : default_boundary();
        echo_chain(out.report, chain);
        echo_boundary(out.report, bnd);
        for (Cplx lam : lambdas) {
            const auto spec = dense_spectrum(transfer_matrix(lam, chain, bnd), dimension_cap);
            worst_vacuum =
                std::max(worst_vacuum, spectral_distance(vacuum_transfer_eigenvalue(lam, chain, bnd), spec));
            nlohmann::ordered_json row;
            row["lambda"] = format_complex(lam);
            nlohmann::ordered_json evs = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < spec.size(); ++i) {
                evs.push_back(format_complex(spec[i]));
                csv << lam.real() << "," << lam.imag() << "," << i << "," << spec[i].real() << ","
                    << spec[i].imag() << "\n";
            }
            row["eigenvalues"] = evs;
            rows.push_back(row);
        }
        out.report.add("vacuum-in-spectrum", "t-on-Om+", worst_vacuum, 1e-8);
    }
    out.table["schema_version"] = kSchemaVersion;
    out.table["rows"] = rows;
    out.csv = csv.str();
    return out;
}

}  // namespace openbethe
