// Command-line workbench: verification suites, Bethe-root solving and dense
// spectra for the open XXX chain and its Gaudin limit.

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "openbethe/workbench.hpp"

namespace {

using namespace openbethe;

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    return parse_run_config(in);
}

std::vector<Cplx> parse_lambda_list(const std::string& text) {
    std::vector<Cplx> out;
    if (text.empty()) return out;
    for (const auto& part : split_list(text)) out.push_back(parse_complex(part));
    return out;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write to " + path);
    out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"openbethe: open-chain algebraic Bethe ansatz workbench"};
    app.require_subcommand(1);

    std::string config_path, json_path, lambdas_text;
    std::uint64_t seed = 0;
    bool seed_set = false;

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    int sites = 2, excitations = 1;
    verify->add_option("suite", suite,
                       "ybe|rtt|reflection|exchange|appendixB|commutativity|determinant|offshell|gaudin|expansion")
        ->required();
    verify->add_option("--n", sites, "site count for the built-in default chain (1..3)");
    verify->add_option("--m", excitations, "excitation count for offshell/gaudin/expansion");
    verify->add_option("--config", config_path, "config file");
    verify->add_option("--seed", seed, "sampling seed")->each([&](const std::string&) { seed_set = true; });
    verify->add_option("--json", json_path, "write the machine report here");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the Bethe equations");
    std::string mode;
    int solve_m = 1;
    solve->add_option("mode", mode, "chain|gaudin")->required();
    solve->add_option("--m", solve_m, "excitation count")->required();
    solve->add_option("--config", config_path, "config file");
    solve->add_option("--seed", seed, "solver seed")->each([&](const std::string&) { seed_set = true; });
    solve->add_option("--lambdas", lambdas_text, "comma-separated eigenvalue sample points");
    solve->add_option("--json", json_path, "write roots and eigenvalue samples here");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "dense spectra at given points");
    bool gaudin_mode = false;
    std::string csv_path;
    Eigen::Index dim_cap = kDefaultDimensionCap;
    spectrum->add_option("--config", config_path, "config file");
    spectrum->add_option("--lambdas", lambdas_text, "comma-separated spectral points")->required();
    spectrum->add_flag("--gaudin", gaudin_mode, "diagonalize the Gaudin generating function instead");
    spectrum->add_option("--json", json_path, "write the table here");
    spectrum->add_option("--csv", csv_path, "write a CSV table here");
    spectrum->add_option("--dimension-cap", dim_cap, "largest Hilbert-space dimension to diagonalize");
    spectrum->add_option("--seed", seed, "echoed into the report")->each([&](const std::string&) {
        seed_set = true;
    });

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig rc = load_config(config_path);
        if (seed_set) rc.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();

        if (*verify) {
            VerifyRequest req;
            req.suite = suite;
            req.sites = sites;
            req.excitations = excitations;
            Report rep = run_verify(req, rc);
            rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << rep.to_text();
            if (!json_path.empty()) write_json(json_path, rep.to_json());
            return rep.pass() ? 0 : 1;
        }

        if (*solve) {
            const std::vector<Cplx> lambdas = parse_lambda_list(lambdas_text);
            SolveOutcome outcome;
            if (mode == "chain")
                outcome = run_solve_chain(solve_m, rc, lambdas);
            else if (mode == "gaudin")
                outcome = run_solve_gaudin(solve_m, rc, lambdas);
            else
                throw config_error("solve mode must be chain or gaudin, got: " + mode);
            outcome.report.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << outcome.report.to_text();
            for (const auto& w : outcome.solutions["warnings"])
                std::cout << "warning: " << w.get<std::string>() << "\n";
            std::cout << "states: " << outcome.solutions["states"].size() << "\n";
            if (!json_path.empty()) write_json(json_path, outcome.solutions);
            return outcome.report.pass() ? 0 : 1;
        }

        if (*spectrum) {
            const std::vector<Cplx> lambdas = parse_lambda_list(lambdas_text);
            if (lambdas.empty()) throw config_error("spectrum needs at least one lambda");
            SpectrumTable table = run_spectrum(rc, lambdas, gaudin_mode, dim_cap);
            table.report.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << table.report.to_text();
            if (!json_path.empty()) write_json(json_path, table.table);
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                if (!out) throw config_error("cannot write to " + csv_path);
                out << table.csv;
            } else if (json_path.empty()) {
                std::cout << table.csv;
            }
            return table.report.pass() ? 0 : 1;
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
