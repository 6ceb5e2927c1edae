#include <catch2/catch.hpp>
#include <sstream>

#include "openbethe/workbench.hpp"

using namespace openbethe;

TEST_CASE("complex and spin literals", "[cli]") {
    REQUIRE(parse_complex("1.5") == Cplx{1.5, 0.0});
    REQUIRE(parse_complex("-2e-3") == Cplx{-2e-3, 0.0});
    REQUIRE(parse_complex("0.5+0.25i") == Cplx{0.5, 0.25});
    REQUIRE(parse_complex("0.5 - 0.25i") == Cplx{0.5, -0.25});
    REQUIRE(parse_complex("i") == Cplx{0.0, 1.0});
    REQUIRE(parse_complex("-i") == Cplx{0.0, -1.0});
    REQUIRE(parse_complex("2i") == Cplx{0.0, 2.0});
    REQUIRE(parse_complex("1e-2+3e-4i") == Cplx{1e-2, 3e-4});
    REQUIRE_THROWS_AS(parse_complex("pear"), config_error);
    REQUIRE(parse_spin("1/2") == 0.5);
    REQUIRE(parse_spin("3/2") == 1.5);
    REQUIRE(parse_spin("1") == 1.0);
    REQUIRE_THROWS_AS(parse_spin("one"), config_error);
    // round trip
    const Cplx z{-0.125, 2.75};
    REQUIRE(parse_complex(format_complex(z)) == z);
}

TEST_CASE("config parsing", "[cli]") {
    SECTION("full configuration") {
        std::istringstream in(R"(
# sample workbench configuration
[chain]
spins = 1/2, 1
inhomogeneities = 0.2-0.1i, -0.3+0.25i
eta = 0.9-0.4i

[boundary]
xi_minus = 1.1+0.2i
nu_minus = 0.75-0.15i
psi_minus = 0.4+0.3i
xi_plus = 0.95-0.1i
nu_plus = 1.05+0.2i
psi_plus = 0.6-0.25i

[gaudin]
xi = 1.1-0.2i
nu = 0.8+0.3i
psi = 0.55-0.15i

[tolerances]
master = 1e-9
ybe = 1e-12

[sampling]
seed = 7
count = 50
window = 1.25
)");
        const RunConfig rc = parse_run_config(in);
        REQUIRE(rc.chain.has_value());
        REQUIRE(rc.chain->size() == 2);
        REQUIRE(rc.chain->spins[1] == 1.0);
        REQUIRE(rc.chain->eta == Cplx{0.9, -0.4});
        REQUIRE(rc.boundary.has_value());
        REQUIRE(rc.boundary->nu_plus == Cplx{1.05, 0.2});
        REQUIRE(rc.gaudin.has_value());
        REQUIRE(rc.gaudin->psi == Cplx{0.55, -0.15});
        REQUIRE(rc.seed == 7);
        REQUIRE(rc.samples == 50);
        REQUIRE(rc.window == 1.25);
        REQUIRE(rc.tolerance("ybe", 1.0) == 1e-12);
        REQUIRE(rc.tolerance("anything-else", 1.0) == 1e-9);  // master fallback
    }
    SECTION("general boundary keys are triangularized through the chain eta") {
        std::istringstream in(R"(
[chain]
spins = 1/2
inhomogeneities = 0
eta = 1

[boundary]
xi_minus = 1.2
phi_tilde_minus = 0.5
psi_tilde_minus = 0.5
xi_plus = 0.9
phi_tilde_plus = 0.5
psi_tilde_plus = 0.5
)");
        const RunConfig rc = parse_run_config(in);
        REQUIRE(rc.boundary.has_value());
        // Equal off-diagonal parameters satisfy the condition trivially.
        REQUIRE(std::abs(rc.boundary->psi_minus - Cplx{1.0}) < 1e-12);
        REQUIRE(std::abs(rc.boundary->nu_minus - std::sqrt(Cplx{1.25})) < 1e-12);
    }
    SECTION("gaudin section may carry its own sites") {
        std::istringstream in(R"(
[gaudin]
spins = 1/2, 1/2
inhomogeneities = 0.7, 1.9
xi = 1.4
nu = 0.9
psi = 0
)");
        const RunConfig rc = parse_run_config(in);
        REQUIRE_FALSE(rc.chain.has_value());
        REQUIRE(rc.gaudin.has_value());
        REQUIRE(rc.gaudin->size() == 2);
        REQUIRE(rc.gaudin->alphas[1] == Cplx{1.9, 0.0});
    }
    SECTION("missing keys point at the offender") {
        std::istringstream in("[chain]\nspins = 1/2\ninhomogeneities = 0\n");
        try {
            parse_run_config(in);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            REQUIRE(std::string(e.what()).find("eta") != std::string::npos);
        }
    }
    SECTION("malformed line") {
        std::istringstream in("[chain]\nspins 1/2\n");
        REQUIRE_THROWS_AS(parse_run_config(in), config_error);
    }
}

TEST_CASE("verification reports", "[cli]") {
    RunConfig rc;
    rc.samples = 10;
    rc.seed = 3;
    SECTION("ybe suite passes with defaults and is deterministic") {
        VerifyRequest req;
        req.suite = "ybe";
        Report a = run_verify(req, rc);
        Report b = run_verify(req, rc);
        REQUIRE(a.pass());
        REQUIRE(a.checks.size() == 5);
        REQUIRE(a.to_json().dump() == b.to_json().dump());
        for (const auto& c : a.checks) REQUIRE_FALSE(c.tag.empty());
    }
    SECTION("different seed changes the samples but not the verdict") {
        VerifyRequest req;
        req.suite = "commutativity";
        Report a = run_verify(req, rc);
        RunConfig rc2 = rc;
        rc2.seed = 4;
        Report b = run_verify(req, rc2);
        REQUIRE(a.pass());
        REQUIRE(b.pass());
        REQUIRE(a.to_json().dump() != b.to_json().dump());
    }
    SECTION("unknown suite is a config error") {
        VerifyRequest req;
        req.suite = "banana";
        REQUIRE_THROWS_AS(run_verify(req, rc), config_error);
    }
    SECTION("json shape") {
        VerifyRequest req;
        req.suite = "determinant";
        const Report rep = run_verify(req, rc);
        const auto j = rep.to_json();
        REQUIRE(j["schema_version"] == kSchemaVersion);
        REQUIRE(j["pass"] == rep.pass());
        REQUIRE(j["checks"].size() == rep.checks.size());
        REQUIRE(j.contains("config"));
        REQUIRE_FALSE(j.contains("elapsed"));
    }
}

TEST_CASE("solve command output", "[cli]") {
    RunConfig rc;
    rc.chain.emplace(std::vector<double>{0.5}, std::vector<Cplx>{Cplx{0.0}}, Cplx{1.0});
    TriangularBoundary diag;
    diag.xi_minus = 1.3;
    diag.xi_plus = 0.8;
    diag.nu_plus = 1.1;
    rc.boundary = diag;
    rc.samples = 24;
    SECTION("single-site chain solve finds the matched state") {
        const SolveOutcome out = run_solve_chain(1, rc, {Cplx{0.9, 0.4}});
        REQUIRE(out.report.pass());
        REQUIRE(out.solutions["states"].size() == 1);
        REQUIRE(out.solutions["states"][0]["spectral_match"].get<bool>());
        REQUIRE(out.solutions["schema_version"] == kSchemaVersion);
    }
    SECTION("excess excitations warn but still run") {
        const SolveOutcome out = run_solve_chain(3, rc, {});
        bool warned = false;
        for (const auto& w : out.solutions["warnings"])
            if (w.get<std::string>().find("capacity") != std::string::npos) warned = true;
        REQUIRE(warned);
        REQUIRE(out.report.pass());  // absence of roots is a result, not a failure
    }
    SECTION("gaudin solve matches the dense spectrum") {
        RunConfig grc;
        grc.gaudin.emplace(std::vector<double>{0.5, 0.5}, std::vector<Cplx>{Cplx{0.7}, Cplx{1.9}},
                           GaudinBoundary{Cplx{1.4}, Cplx{0.9}, Cplx{0.0}});
        grc.samples = 48;
        const SolveOutcome out = run_solve_gaudin(1, grc, {Cplx{0.37}});
        int matched = 0;
        for (const auto& st : out.solutions["states"])
            if (st["spectral_match"].get<bool>()) ++matched;
        REQUIRE(matched == 2);
    }
}

TEST_CASE("spectrum command", "[cli]") {
    RunConfig rc;
    SECTION("vacuum eigenvalue sits in the dense spectrum") {
        const SpectrumTable table = run_spectrum(rc, {Cplx{0.8, 0.3}, Cplx{-1.1, 0.6}}, false);
        REQUIRE(table.report.pass());
        REQUIRE(table.table["rows"].size() == 2);
        REQUIRE(table.csv.find("lambda_re") == 0);
    }
    SECTION("gaudin mode") {
        const SpectrumTable table = run_spectrum(rc, {Cplx{0.8, 0.3}}, true);
        REQUIRE(table.report.pass());
        REQUIRE(table.table["rows"][0]["eigenvalues"].size() == 6);
    }
    SECTION("dimension cap") {
        REQUIRE_THROWS_AS(run_spectrum(rc, {Cplx{0.8, 0.3}}, false, 2), domain_error);
    }
    SECTION("commuting family shares its eigenbasis") {
        const ChainConfig chain = default_chain(2);
        const TriangularBoundary bnd = default_boundary();
        const auto s1 = dense_eigensystem(transfer_matrix(Cplx{0.8, 0.3}, chain, bnd));
        const auto s2 = dense_eigensystem(transfer_matrix(Cplx{-1.1, 0.6}, chain, bnd));
        // t is not normal, so change basis with the inverse rather than the
        // adjoint: each eigenvector of t(l2) is a multiple of one of t(l1),
        // making V1^{-1} V2 permutation-like column by column.
        const Matrix overlap = s1.eigenvectors.inverse() * s2.eigenvectors;
        for (Eigen::Index c = 0; c < overlap.cols(); ++c) {
            double best = 0.0, total = 0.0;
            for (Eigen::Index r = 0; r < overlap.rows(); ++r) {
                best = std::max(best, std::abs(overlap(r, c)));
                total += std::norm(overlap(r, c));
            }
            REQUIRE(best * best > 0.99 * total);
        }
    }
}
