#include <catch2/catch.hpp>

#include "openbethe/gaudin.hpp"
#include "openbethe/spectra.hpp"
#include "test_helpers.hpp"

using namespace openbethe;

namespace {

GaudinConfig standard_config() {
    return GaudinConfig{{0.5, 1.0},
                        {Cplx{0.2, -0.1}, Cplx{-0.3, 0.25}},
                        GaudinBoundary{Cplx{1.1, -0.2}, Cplx{0.8, 0.3}, Cplx{0.55, -0.15}}};
}

auto off_poles(const GaudinConfig& g) {
    return [&g](Cplx z) {
        try {
            g.guard_poles(z);
            return std::abs(z) > 0.05;
        } catch (const domain_error&) {
            return false;
        }
    };
}

std::vector<Cplx> separated_roots(obtest::Draw& d, const GaudinConfig& g, int m) {
    const auto ok = off_poles(g);
    std::vector<Cplx> roots;
    while (static_cast<int>(roots.size()) < m) {
        const Cplx z = d.c_safe(ok);
        bool good = true;
        for (Cplx r : roots)
            if (std::abs(z - r) < 0.15 || std::abs(z + r) < 0.15) good = false;
        if (good) roots.push_back(z);
    }
    return roots;
}

}  // namespace

TEST_CASE("gaudin Lax matrix", "[gaudin]") {
    obtest::Draw d;
    const GaudinConfig g = standard_config();
    SECTION("traceless in the auxiliary space") {
        const Cplx lam = d.c_safe(off_poles(g));
        const Matrix l = gaudin_lax(lam, g);
        const Eigen::Index h = l.rows() / 2;
        REQUIRE(max_abs(Matrix(l.topLeftCorner(h, h) + l.bottomRightCorner(h, h))) < 1e-12);
    }
    SECTION("residue at alpha_m is sigma . S_m") {
        const SiteOperators ops(g.chain_at(Cplx{1.0}));
        const Eigen::Index h = ops.s3.front().rows();
        const double offs = 1e-7;
        for (std::size_t m = 0; m < g.spins.size(); ++m) {
            const Matrix res = offs / 2.0 *
                               (gaudin_lax(g.alphas[m] + offs, g) - gaudin_lax(g.alphas[m] - offs, g));
            Matrix sds(2 * h, 2 * h);
            sds.topLeftCorner(h, h) = ops.s3[m];
            sds.topRightCorner(h, h) = ops.sminus[m];
            sds.bottomLeftCorner(h, h) = ops.splus[m];
            sds.bottomRightCorner(h, h) = -ops.s3[m];
            REQUIRE(rel_residual(res, sds) < 1e-6);
        }
    }
    SECTION("large-xi boundary approaches the plain two-pole sum") {
        const GaudinConfig far{{0.5}, {Cplx{0.4}}, GaudinBoundary{Cplx{1e6}, Cplx{1.0}, Cplx{0.0}}};
        const Cplx lam{0.9, 0.2};
        const SiteOperators ops(far.chain_at(Cplx{1.0}));
        Matrix sds(4, 4);
        sds.topLeftCorner(2, 2) = ops.s3[0];
        sds.topRightCorner(2, 2) = ops.sminus[0];
        sds.bottomLeftCorner(2, 2) = ops.splus[0];
        sds.bottomRightCorner(2, 2) = -ops.s3[0];
        const Matrix expected = sds / (lam - 0.4) + sds / (lam + 0.4);
        REQUIRE(rel_residual(gaudin_lax(lam, far), expected) < 1e-4);
    }
    SECTION("pole and singular-K guards") {
        REQUIRE_THROWS_AS(gaudin_lax(g.alphas[0], g), domain_error);
        const GaudinConfig sing{{0.5}, {Cplx{0.4}}, GaudinBoundary{Cplx{1.0}, Cplx{1.0}, Cplx{0.0}}};
        REQUIRE_THROWS_AS(gaudin_lax(Cplx{1.0}, sing), domain_error);  // xi^2 = lambda^2 nu^2
    }
}

TEST_CASE("generating function tau", "[gaudin]") {
    obtest::Draw d;
    const GaudinConfig g = standard_config();
    const auto ok = off_poles(g);
    SECTION("pseudo-vacuum eigenvalue") {
        const Cplx lam = d.c_safe(ok);
        const Matrix tau = gaudin_tau(lam, g);
        Vector om = Vector::Zero(tau.rows());
        om(0) = 1.0;
        const Cplx chi0 = gaudin_chi0(lam, g);
        REQUIRE(max_abs(Vector(tau * om - chi0 * om)) < 1e-12 * std::abs(chi0));
    }
    SECTION("frozen vacuum eigenvalue") {
        REQUIRE(std::abs(gaudin_chi0(Cplx{0.8, 0.3}, g) - Cplx{21.249126247890953, -23.653056155530869}) < 1e-11);
    }
    SECTION("even in lambda and a commuting family") {
        const Cplx lam = d.c_safe(ok), mu = d.c_safe(ok);
        REQUIRE(rel_residual(gaudin_tau(lam, g), gaudin_tau(-lam, g)) < 1e-12);
        REQUIRE(commutator_residual(gaudin_tau(lam, g), gaudin_tau(mu, g)) < 1e-10);
    }
    SECTION("single-site diagonal boundary against the closed form") {
        const GaudinConfig one{{1.0}, {Cplx{0.45, 0.1}}, GaudinBoundary{Cplx{1.3, 0.2}, Cplx{0.9, -0.1}, Cplx{0.0}}};
        const Cplx lam = d.c_safe(off_poles(one));
        const Cplx a = one.alphas[0];
        const Cplx r = (one.xi - lam * one.nu) / (one.xi + lam * one.nu);
        const SpinTriple t = spin_matrices(SpinRep{1.0});
        // With a diagonal K the conjugation only rescales the ladder parts:
        // G3 = (1/(l-a) + 1/(l+a)) S3, G- = (1/(l-a) + r/(l+a)) S-,
        // G+ = (1/(l-a) + 1/(r (l+a))) S+, tau = 2 G3 G3 + G+ G- + G- G+.
        const Cplx c3 = 1.0 / (lam - a) + 1.0 / (lam + a);
        const Cplx cm = 1.0 / (lam - a) + r / (lam + a);
        const Cplx cp = 1.0 / (lam - a) + 1.0 / (r * (lam + a));
        const Matrix expected =
            2.0 * c3 * c3 * t.s3 * t.s3 + cp * cm * t.splus * t.sminus + cm * cp * t.sminus * t.splus;
        REQUIRE(rel_residual(gaudin_tau(lam, one), expected) < 1e-12);
    }
}

TEST_CASE("gaudin Hamiltonians", "[gaudin]") {
    const GaudinConfig g = standard_config();
    const GaudinHamiltonians ham = gaudin_hamiltonians(g);
    SECTION("residues of tau at +-alpha_m") {
        const double offs = 1e-6;
        for (std::size_t m = 0; m < g.spins.size(); ++m) {
            const Cplx am = g.alphas[m];
            const Matrix res_plus =
                (offs * gaudin_tau(am + offs, g) + (-offs) * gaudin_tau(am - offs, g)) / 2.0;
            REQUIRE(rel_residual(res_plus, Matrix(4.0 * ham.h[m])) < 1e-4);
            const Matrix res_minus =
                (offs * gaudin_tau(-am + offs, g) + (-offs) * gaudin_tau(-am - offs, g)) / 2.0;
            REQUIRE(rel_residual(res_minus, Matrix(4.0 * ham.h_tilde[m])) < 1e-4);
        }
    }
    SECTION("commuting family, including the generating function") {
        obtest::Draw d;
        const Cplx lam = d.c_safe(off_poles(g));
        const Matrix tau = gaudin_tau(lam, g);
        for (std::size_t m = 0; m < ham.h.size(); ++m) {
            REQUIRE(commutator_residual(ham.h[m], tau) < 1e-10);
            for (std::size_t n = m + 1; n < ham.h.size(); ++n)
                REQUIRE(commutator_residual(ham.h[m], ham.h[n]) < 1e-10);
        }
    }
    SECTION("spectrum near a pole is set by the Hamiltonian") {
        // tau(l) = 2 s_m (s_m + 1)/(l - alpha_m)^2 + 4 H_m/(l - alpha_m) + O(1),
        // and the double pole is a scalar, so the shifted, rescaled spectrum
        // of tau approaches the spectrum of H_m.
        const double eps = 1e-5;
        const std::size_t m = 0;
        const Cplx lam = g.alphas[m] + eps;
        const double s = g.spins[m];
        const Matrix shifted =
            (gaudin_tau(lam, g) -
             2.0 * s * (s + 1.0) / (eps * eps) * Matrix::Identity(6, 6)) *
            (eps / 4.0);
        const Eigen::ComplexEigenSolver<Matrix> est(shifted, false);
        const Eigen::ComplexEigenSolver<Matrix> esh(ham.h[m], false);
        std::vector<Cplx> a(est.eigenvalues().data(), est.eigenvalues().data() + 6);
        std::vector<Cplx> b(esh.eigenvalues().data(), esh.eigenvalues().data() + 6);
        const auto lex = [](Cplx x, Cplx y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        };
        std::sort(a.begin(), a.end(), lex);
        std::sort(b.begin(), b.end(), lex);
        for (int i = 0; i < 6; ++i) REQUIRE(std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) < 1e-3);
    }
    SECTION("three sites, diagonal and triangular boundaries") {
        for (Cplx psi : {Cplx{0.0}, Cplx{0.4, -0.2}}) {
            const GaudinConfig g3{{0.5, 1.0, 0.5},
                                  {Cplx{0.6, 0.1}, Cplx{-0.35, 0.3}, Cplx{1.1, -0.25}},
                                  GaudinBoundary{Cplx{1.2}, Cplx{0.85}, psi}};
            const GaudinHamiltonians h3 = gaudin_hamiltonians(g3);
            for (std::size_t m = 0; m < 3; ++m)
                for (std::size_t n = m + 1; n < 3; ++n)
                    REQUIRE(commutator_residual(h3.h[m], h3.h[n]) < 1e-10);
        }
    }
}

TEST_CASE("spectrum function chi", "[gaudin]") {
    obtest::Draw d;
    const GaudinConfig g = standard_config();
    const auto ok = off_poles(g);
    SECTION("no-root case reduces to chi0 after the boundary-block cancellation") {
        for (int k = 0; k < 5; ++k) {
            const Cplx lam = d.c_safe(ok);
            REQUIRE(std::abs(gaudin_chi(lam, {}, g) - gaudin_chi0(lam, g)) <
                    1e-11 * std::abs(gaudin_chi0(lam, g)));
        }
    }
    SECTION("frozen two-root value") {
        REQUIRE(std::abs(gaudin_chi(Cplx{0.8, 0.3}, {Cplx{-0.35, 0.55}, Cplx{0.7, -0.45}}, g) -
                         Cplx{6.8437787077784620, -1.1902905669149249}) < 1e-11);
    }
    SECTION("invariant under root sign flips") {
        obtest::Draw dd;
        const auto roots = separated_roots(dd, g, 2);
        const Cplx lam = dd.c_safe(ok);
        REQUIRE(std::abs(gaudin_chi(lam, roots, g) - gaudin_chi(lam, {-roots[0], roots[1]}, g)) < 1e-11);
    }
}

TEST_CASE("creation operator F", "[gaudin]") {
    obtest::Draw d;
    const GaudinConfig g = standard_config();
    const auto ok = off_poles(g);
    SECTION("commutes at different spectral points") {
        const Matrix f1 = gaudin_f_operator(d.c_safe(ok), g);
        const Matrix f2 = gaudin_f_operator(d.c_safe(ok), g);
        REQUIRE(commutator_residual(f1, f2) < 1e-13);
    }
    SECTION("diagonal boundary gives a pure lowering operator") {
        const GaudinConfig diag{{0.5, 1.0},
                                {Cplx{0.2, -0.1}, Cplx{-0.3, 0.25}},
                                GaudinBoundary{Cplx{1.1, -0.2}, Cplx{0.8, 0.3}, Cplx{0.0}}};
        const Cplx mu = d.c_safe(off_poles(diag));
        const SiteOperators ops(diag.chain_at(Cplx{1.0}));
        Matrix expected = Matrix::Zero(6, 6);
        for (std::size_t m = 0; m < 2; ++m) {
            const Cplx c = (diag.xi + mu * diag.nu) / (mu - diag.alphas[m]) +
                           (diag.xi - mu * diag.nu) / (mu + diag.alphas[m]);
            expected += c * ops.sminus[m];
        }
        REQUIRE(rel_residual(gaudin_f_operator(mu, diag), expected) < 1e-13);
    }
    SECTION("one-excitation vector matches the explicit site sum") {
        const Cplx mu = d.c_safe(ok);
        const SiteOperators ops(g.chain_at(Cplx{1.0}));
        Vector om = Vector::Zero(6);
        om(0) = 1.0;
        Vector expected = Vector::Zero(6);
        for (std::size_t m = 0; m < 2; ++m) {
            const Cplx c = (g.xi + g.alphas[m] * g.nu) *
                           (1.0 / (mu - g.alphas[m]) + 1.0 / (mu + g.alphas[m]));
            expected += c * (g.psi * g.spins[m] / g.nu * om + ops.sminus[m] * om);
        }
        REQUIRE(rel_residual(gaudin_bethe_vector({mu}, g), expected) < 1e-12);
    }
    SECTION("two-excitation vector matches the explicit double sum") {
        const auto roots = separated_roots(d, g, 2);
        const SiteOperators ops(g.chain_at(Cplx{1.0}));
        Vector om = Vector::Zero(6);
        om(0) = 1.0;
        Vector expected = Vector::Zero(6);
        for (std::size_t m = 0; m < 2; ++m) {
            const Cplx cm = (g.xi + g.alphas[m] * g.nu) *
                            (1.0 / (roots[0] - g.alphas[m]) + 1.0 / (roots[0] + g.alphas[m]));
            for (std::size_t n = 0; n < 2; ++n) {
                const Cplx cn = (g.xi + g.alphas[n] * g.nu) *
                                (1.0 / (roots[1] - g.alphas[n]) + 1.0 / (roots[1] + g.alphas[n]));
                const Vector inner = g.psi * g.spins[n] / g.nu * om + ops.sminus[n] * om;
                Vector t1 = g.psi * g.spins[m] / g.nu * inner + ops.sminus[m] * inner;
                if (m == n)
                    t1 -= g.psi / g.nu * (g.psi * g.spins[n] / (2.0 * g.nu) * om + ops.sminus[n] * om);
                expected += cm * cn * t1;
            }
        }
        REQUIRE(rel_residual(gaudin_bethe_vector(roots, g), expected) < 1e-11);
    }
    SECTION("vector is symmetric in its roots") {
        const auto roots = separated_roots(d, g, 2);
        REQUIRE(rel_residual(gaudin_bethe_vector({roots[0], roots[1]}, g),
                             gaudin_bethe_vector({roots[1], roots[0]}, g)) < 1e-12);
    }
}

TEST_CASE("gaudin Bethe equations and off-shell action", "[gaudin]") {
    obtest::Draw d;
    const GaudinConfig g = standard_config();
    SECTION("frozen two-root value of f") {
        REQUIRE(std::abs(gaudin_f(0, {Cplx{-0.35, 0.55}, Cplx{0.7, -0.45}}, g) -
                         Cplx{-18.146797952725375, -8.0645452006350062}) < 1e-11);
    }
    SECTION("boundary term scales like nu^2") {
        const Cplx mu{0.31, 0.11};
        const auto boundary_term = [&](double nu) {
            const GaudinConfig soft{{0.5}, {Cplx{0.7}}, GaudinBoundary{Cplx{1.4}, Cplx{nu}, Cplx{0.0}}};
            const Cplx site_part =
                2.0 * (soft.xi - mu * soft.nu) * 0.5 * (1.0 / (mu - 0.7) + 1.0 / (mu + 0.7));
            return gaudin_f(0, {mu}, soft) - site_part;
        };
        const double small = std::abs(boundary_term(1e-4));
        const double large = std::abs(boundary_term(1e-2));
        REQUIRE(small < 1e-7);
        REQUIRE(small / large == Approx(1e-4).epsilon(0.01));
    }
    SECTION("off-shell identity, one excitation on one site") {
        const GaudinConfig one{{0.5}, {Cplx{0.45, 0.1}}, GaudinBoundary{Cplx{1.3, 0.2}, Cplx{0.9, -0.1}, Cplx{0.3}}};
        const auto ok = off_poles(one);
        for (int k = 0; k < 3; ++k)
            REQUIRE(gaudin_off_shell_residual(d.c_safe(ok), {d.c_safe(ok)}, one) < 1e-10);
    }
    SECTION("off-shell identity, two excitations on two sites") {
        const auto roots = separated_roots(d, g, 2);
        REQUIRE(gaudin_off_shell_residual(d.c_safe(off_poles(g)), roots, g) < 1e-9);
    }
    SECTION("off-shell identity, three excitations on three sites") {
        const GaudinConfig g3{{0.5, 1.0, 0.5},
                              {Cplx{0.6, 0.1}, Cplx{-0.35, 0.3}, Cplx{1.1, -0.25}},
                              GaudinBoundary{Cplx{1.2, -0.15}, Cplx{0.85, 0.2}, Cplx{0.4, -0.2}}};
        const auto roots = separated_roots(d, g3, 3);
        REQUIRE(gaudin_off_shell_residual(d.c_safe(off_poles(g3)), roots, g3) < 1e-9);
    }
}

TEST_CASE("gaudin Bethe solver", "[gaudin]") {
    const GaudinConfig g{{0.5, 0.5}, {Cplx{0.7}, Cplx{1.9}}, GaudinBoundary{Cplx{1.4}, Cplx{0.9}, Cplx{0.0}}};
    SolveOptions opt;
    opt.random_seeds = 48;
    const auto states = solve_gaudin_bethe(1, g, {}, opt);
    SECTION("finds the frozen one-excitation roots plus a flagged trivial set") {
        std::vector<Cplx> nontrivial;
        for (const auto& st : states)
            if (!st.zero_vector) nontrivial.push_back(st.roots.front());
        REQUIRE(nontrivial.size() == 2);
        // Frozen from an independent solver: 1.624028815083 +- 0.4666010135 i.
        for (const Cplx r : nontrivial) {
            REQUIRE(std::abs(r.real() - 1.624028815083) < 1e-7);
            REQUIRE(std::abs(std::abs(r.imag()) - 0.4666010135) < 1e-7);
        }
    }
    SECTION("non-trivial states are eigenvectors of tau across the spectrum") {
        const Cplx lam{0.37};
        const Matrix tau = gaudin_tau(lam, g);
        const auto spectrum = dense_spectrum(tau);
        for (const auto& st : states) {
            if (st.zero_vector) continue;
            const Cplx chi = gaudin_chi(lam, st.roots, g);
            REQUIRE(spectral_distance(chi, spectrum) < 1e-7);
            REQUIRE(eigenpair_residual(tau, chi, st.state) < 1e-8);
        }
    }
}

TEST_CASE("quasi-classical expansion", "[gaudin]") {
    const GaudinConfig g = standard_config();
    const Cplx lam{0.37, 0.19};
    SECTION("operator expansion recovers the closed-form coefficients and tau") {
        const ExpansionReport rep = quasiclassical_check(lam, g);
        REQUIRE(rep.c0_residual < 1e-6);
        REQUIRE(rep.c1_residual < 1e-6);
        REQUIRE(rep.tau_residual < 1e-5);
        // The two eta^2 extractions differ by the Richardson subgrid's own
        // truncation, well under the agreement gate.
        REQUIRE(rep.richardson_gap < 1e-3);
        REQUIRE(rep.fit_residual < 1e-8);
    }
    SECTION("scalar expansion of the vacuum eigenvalue") {
        ExpansionOptions fine;
        fine.etas = {1e-4, 5e-5, 2.5e-5, 1.25e-5};
        REQUIRE(eigenvalue_limit_residual(lam, {}, g, fine) < 1e-6);
    }
    SECTION("scalar expansion at two excitations") {
        ExpansionOptions fine;
        fine.etas = {1e-4, 5e-5, 2.5e-5, 1.25e-5};
        REQUIRE(eigenvalue_limit_residual(lam, {Cplx{-0.35, 0.55}, Cplx{0.7, -0.45}}, g, fine) < 1e-6);
    }
    SECTION("Bethe vector and Bethe equation limits converge at first order") {
        const std::vector<Cplx> roots{Cplx{0.6, 0.2}, Cplx{-0.4, 0.5}};
        const double r3 = bethe_vector_limit_residual(roots, g, 1e-3);
        const double r4 = bethe_vector_limit_residual(roots, g, 1e-4);
        REQUIRE(r3 < 0.05);
        REQUIRE(r4 < 0.15 * r3);  // one decade of eta buys one decade of error
        const double f3 = bethe_equation_limit_residual(0, roots, g, 1e-3);
        const double f4 = bethe_equation_limit_residual(0, roots, g, 1e-4);
        REQUIRE(f3 < 0.05);
        REQUIRE(f4 < 0.15 * f3);
    }
}
