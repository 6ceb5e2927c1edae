#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "openbethe/config.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

inline constexpr int kSchemaVersion = 1;

struct CheckResult {
    std::string name;
    std::string tag;  // equation tag the residual certifies
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<CheckResult> checks;
    double elapsed_seconds = 0.0;  // shown in text output, excluded from JSON

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(std::string name, std::string tag, double residual, double tolerance) {
        checks.push_back({std::move(name), std::move(tag), residual, tolerance, residual <= tolerance});
    }

    /// Machine output. Byte-identical across repeated runs of the same
    /// (config, seed): no timing and no environment data.
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = command;
        j["seed"] = seed;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto& [k, v] : config_echo) cfg[k] = v;
        j["config"] = cfg;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["tag"] = c.tag;
            e["residual"] = c.residual;
            e["tolerance"] = c.tolerance;
            e["pass"] = c.pass;
            arr.push_back(e);
        }
        j["checks"] = arr;
        j["pass"] = pass();
        return j;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << "== " << command << " (seed " << seed << ") ==\n";
        std::size_t width = 4;
        for (const auto& c : checks) width = std::max(width, c.name.size());
        for (const auto& c : checks) {
            out << "  " << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
                << (c.pass ? "pass" : "FAIL") << "  residual " << std::scientific << std::setprecision(3)
                << c.residual << "  tol " << c.tolerance << "  [" << c.tag << "]\n";
        }
        out << (pass() ? "PASS" : "FAIL") << " (" << checks.size() << " checks, " << std::fixed
            << std::setprecision(2) << elapsed_seconds << " s)\n";
        return out.str();
    }
};

inline void echo_chain(Report& rep, const ChainConfig& chain) {
    std::string spins, alphas;
    for (std::size_t m = 0; m < chain.spins.size(); ++m) {
        if (m) {
            spins += ",";
            alphas += ",";
        }
        std::ostringstream s;
        s << chain.spins[m];
        spins += s.str();
        alphas += format_complex(chain.alphas[m]);
    }
    rep.config_echo.emplace_back("chain.spins", spins);
    rep.config_echo.emplace_back("chain.inhomogeneities", alphas);
    rep.config_echo.emplace_back("chain.eta", format_complex(chain.eta));
}

inline void echo_boundary(Report& rep, const TriangularBoundary& b) {
    rep.config_echo.emplace_back("boundary.xi_minus", format_complex(b.xi_minus));
    rep.config_echo.emplace_back("boundary.nu_minus", format_complex(b.nu_minus));
    rep.config_echo.emplace_back("boundary.psi_minus", format_complex(b.psi_minus));
    rep.config_echo.emplace_back("boundary.xi_plus", format_complex(b.xi_plus));
    rep.config_echo.emplace_back("boundary.nu_plus", format_complex(b.nu_plus));
    rep.config_echo.emplace_back("boundary.psi_plus", format_complex(b.psi_plus));
}

inline void echo_gaudin(Report& rep, const GaudinConfig& g) {
    std::string spins, alphas;
    for (std::size_t m = 0; m < g.spins.size(); ++m) {
        if (m) {
            spins += ",";
            alphas += ",";
        }
        std::ostringstream s;
        s << g.spins[m];
        spins += s.str();
        alphas += format_complex(g.alphas[m]);
    }
    rep.config_echo.emplace_back("gaudin.spins", spins);
    rep.config_echo.emplace_back("gaudin.inhomogeneities", alphas);
    rep.config_echo.emplace_back("gaudin.xi", format_complex(g.xi));
    rep.config_echo.emplace_back("gaudin.nu", format_complex(g.nu));
    rep.config_echo.emplace_back("gaudin.psi", format_complex(g.psi));
}

}  // namespace openbethe
