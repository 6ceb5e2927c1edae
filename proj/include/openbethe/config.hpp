#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "openbethe/boundary.hpp"
#include "openbethe/chain.hpp"
#include "openbethe/gaudin.hpp"

namespace openbethe {

/// Parse "a+bi" / "a-bi" / "bi" / "a" into a complex number. Whitespace-tolerant.
inline Cplx parse_complex(std::string text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw config_error("empty complex literal");
    const bool has_i = s.back() == 'i' || s.back() == 'j';
    if (!has_i) {
        try {
            std::size_t used = 0;
            const double re = std::stod(s, &used);
            if (used != s.size()) throw config_error("bad complex literal: " + text);
            return Cplx{re, 0.0};
        } catch (const std::exception&) {
            throw config_error("bad complex literal: " + text);
        }
    }
    s.pop_back();
    if (s.empty() || s == "+") return Cplx{0.0, 1.0};
    if (s == "-") return Cplx{0.0, -1.0};
    // Split at the last +/- that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    try {
        if (split == std::string::npos) return Cplx{0.0, std::stod(s)};
        const double re = std::stod(s.substr(0, split));
        const std::string imtext = s.substr(split);
        const double im = (imtext == "+" ? 1.0 : imtext == "-" ? -1.0 : std::stod(imtext));
        return Cplx{re, im};
    } catch (const std::exception&) {
        throw config_error("bad complex literal: " + text);
    }
}

inline std::string format_complex(Cplx z) {
    std::ostringstream out;
    out.precision(17);
    out << z.real();
    if (z.imag() >= 0.0)
        out << "+" << z.imag() << "i";
    else
        out << "-" << -z.imag() << "i";
    return out.str();
}

/// Spins accept "1/2", "3/2" or plain decimals.
inline double parse_spin(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return std::stod(text);
        return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
    } catch (const std::exception&) {
        throw config_error("bad spin literal: " + text);
    }
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

/// Flat sectioned key = value configuration for the command-line tool.
struct RunConfig {
    std::optional<ChainConfig> chain;
    std::optional<TriangularBoundary> boundary;
    std::optional<GaudinConfig> gaudin;
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 1;
    int samples = 25;
    double window = 1.5;

    double tolerance(const std::string& name, double fallback) const {
        if (const auto it = tolerances.find(name); it != tolerances.end()) return it->second;
        if (const auto it = tolerances.find("master"); it != tolerances.end()) return it->second;
        return fallback;
    }

    const ChainConfig& require_chain() const {
        if (!chain) throw config_error("missing [chain] section (key eta and friends)");
        return *chain;
    }
    const TriangularBoundary& require_boundary() const {
        if (!boundary) throw config_error("missing [boundary] section");
        return *boundary;
    }
    const GaudinConfig& require_gaudin() const {
        if (!gaudin) throw config_error("missing [gaudin] section (keys xi, nu, psi)");
        return *gaudin;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

/// Sections: [chain] spins, inhomogeneities, eta; [boundary] either the
/// triangular keys (xi_minus, nu_minus, psi_minus, xi_plus, nu_plus, psi_plus)
/// or the general ones (phi_tilde_minus, psi_tilde_minus, ...), which are
/// triangularized with the chain's eta; [gaudin] xi, nu, psi and optional
/// private spins/inhomogeneities; [tolerances] master plus per-check names;
/// [sampling] seed, count, window. Complex values are "a+bi" strings.
inline RunConfig parse_run_config(std::istream& in) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("expected key = value, got: " + line);
        sections[section][detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }

    RunConfig rc;
    const auto get = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
        const auto s = sections.find(sec);
        if (s == sections.end()) return std::nullopt;
        const auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    };

    std::vector<double> spins;
    std::vector<Cplx> alphas;
    if (sections.count("chain")) {
        const auto spins_text = get("chain", "spins");
        const auto alphas_text = get("chain", "inhomogeneities");
        const auto eta_text = get("chain", "eta");
        if (!spins_text) throw config_error("[chain] is missing key spins");
        if (!alphas_text) throw config_error("[chain] is missing key inhomogeneities");
        if (!eta_text) throw config_error("[chain] is missing key eta");
        for (const auto& t : split_list(*spins_text)) spins.push_back(parse_spin(t));
        for (const auto& t : split_list(*alphas_text)) alphas.push_back(parse_complex(t));
        rc.chain.emplace(spins, alphas, parse_complex(*eta_text));
    }

    if (sections.count("boundary")) {
        const bool triangular = get("boundary", "nu_minus").has_value();
        if (triangular) {
            TriangularBoundary b;
            const auto want = [&](const std::string& key) {
                const auto v = get("boundary", key);
                if (!v) throw config_error("[boundary] is missing key " + key);
                return parse_complex(*v);
            };
            b.xi_minus = want("xi_minus");
            b.nu_minus = want("nu_minus");
            b.psi_minus = want("psi_minus");
            b.xi_plus = want("xi_plus");
            b.nu_plus = want("nu_plus");
            b.psi_plus = want("psi_plus");
            rc.boundary = b;
        } else {
            BoundaryParams p;
            const auto want = [&](const std::string& key) {
                const auto v = get("boundary", key);
                if (!v) throw config_error("[boundary] is missing key " + key);
                return parse_complex(*v);
            };
            p.xi_minus = want("xi_minus");
            p.phi_tilde_minus = want("phi_tilde_minus");
            p.psi_tilde_minus = want("psi_tilde_minus");
            p.xi_plus = want("xi_plus");
            p.phi_tilde_plus = want("phi_tilde_plus");
            p.psi_tilde_plus = want("psi_tilde_plus");
            if (!rc.chain) throw config_error("general [boundary] keys need [chain] eta to triangularize");
            rc.boundary = triangularize(p, rc.chain->eta);
        }
    }

    if (sections.count("gaudin")) {
        const auto want = [&](const std::string& key) {
            const auto v = get("gaudin", key);
            if (!v) throw config_error("[gaudin] is missing key " + key);
            return parse_complex(*v);
        };
        std::vector<double> gspins = spins;
        std::vector<Cplx> galphas = alphas;
        if (const auto t = get("gaudin", "spins")) {
            gspins.clear();
            for (const auto& x : split_list(*t)) gspins.push_back(parse_spin(x));
        }
        if (const auto t = get("gaudin", "inhomogeneities")) {
            galphas.clear();
            for (const auto& x : split_list(*t)) galphas.push_back(parse_complex(x));
        }
        if (gspins.empty()) throw config_error("[gaudin] needs spins (own key or via [chain])");
        rc.gaudin.emplace(gspins, galphas, GaudinBoundary{want("xi"), want("nu"), want("psi")});
    }

    if (sections.count("tolerances"))
        for (const auto& [key, value] : sections["tolerances"]) {
            try {
                rc.tolerances[key] = std::stod(value);
            } catch (const std::exception&) {
                throw config_error("[tolerances] bad value for key " + key);
            }
        }

    if (const auto t = get("sampling", "seed")) rc.seed = static_cast<std::uint64_t>(std::stoull(*t));
    if (const auto t = get("sampling", "count")) rc.samples = std::stoi(*t);
    if (const auto t = get("sampling", "window")) rc.window = std::stod(*t);
    if (rc.samples < 1) throw config_error("[sampling] count must be positive");
    return rc;
}

}  // namespace openbethe
