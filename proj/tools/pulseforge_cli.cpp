#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pulseforge/perturbation.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/pulse_io.hpp"
#include "pulseforge/solver.hpp"
#include "pulseforge/trajectory.hpp"
#include "pulseforge/verification.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitConvergence = 3;

std::vector<double> parse_coeffs(const std::string& s) {
    std::vector<double> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw pulseforge::ValidationError("invalid --coeffs entry '" + tok +
                                              "'");
        }
        if (used != tok.size())
            throw pulseforge::ValidationError("invalid --coeffs entry '" + tok +
                                              "'");
        out.push_back(v);
    }
    return out;
}

// Grid grammar: either a single value or lo:hi:step with inclusive endpoints;
// the step is rounded to the nearest integer count of intervals.
std::vector<double> parse_grid(const std::string& s, const char* flag) {
    const auto c1 = s.find(':');
    if (c1 == std::string::npos) {
        try {
            return {std::stod(s)};
        } catch (const std::exception&) {
            throw pulseforge::ValidationError(std::string("invalid ") + flag +
                                              " value '" + s + "'");
        }
    }
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw pulseforge::ValidationError(std::string(flag) +
                                          ": expected lo:hi:step");
    double lo, hi, step;
    try {
        lo = std::stod(s.substr(0, c1));
        hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(s.substr(c2 + 1));
    } catch (const std::exception&) {
        throw pulseforge::ValidationError(std::string(flag) +
                                          ": expected lo:hi:step");
    }
    if (!(step > 0.0) || !(hi > lo))
        throw pulseforge::ValidationError(std::string(flag) +
                                          ": need hi > lo and step > 0");
    const auto count =
        static_cast<std::size_t>(std::lround((hi - lo) / step)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) /
                          static_cast<double>(count - 1);
    return out;
}

// Applies a JSON run config beneath any explicitly passed flags. Keys mirror
// the long option names; anything unrecognized is rejected.
void apply_config(CLI::App* cmd, const std::string& path,
                  const std::map<std::string, std::function<void(
                                                  const nlohmann::json&)>>&
                      setters) {
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw pulseforge::IoError("cannot open config " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw pulseforge::ValidationError("config " + path + ": " + ex.what());
    }
    for (const auto& [key, value] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end())
            throw pulseforge::ValidationError("config " + path +
                                              ": unknown key '" + key + "'");
        if (cmd->count("--" + key) == 0) it->second(value);
    }
}

std::string coeffs_from_json(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += ',';
        s += std::to_string(x.get<double>());
    }
    return s;
}

int cmd_design(const std::string& family, const std::string& coeffs,
               double T, double tmax, std::size_t samples,
               const std::string& out) {
    const auto fam = pulseforge::family_from_string(family);
    const pulseforge::PhaseParameterization p(fam, parse_coeffs(coeffs));
    const pulseforge::ThetaSchedule sched(T, tmax > 0 ? tmax : 4.0 * T);
    const auto pulse = pulseforge::synthesize(p, sched, samples);
    pulseforge::write_pulse_csv(out, pulse);
    std::printf("area = %.4f pi\n", pulse.area / kPi);
    return kExitOk;
}

int cmd_area(const std::string& family, const std::string& coeffs) {
    const auto fam = pulseforge::family_from_string(family);
    const pulseforge::PhaseParameterization p(fam, parse_coeffs(coeffs));
    std::printf("area = %.4f pi\n", pulseforge::pulse_area(p) / kPi);
    return kExitOk;
}

int cmd_solve(const std::string& channel, int order,
              const std::string& family, const std::string& seed,
              const std::string& out) {
    pulseforge::RobustnessTarget target{
        pulseforge::channel_from_string(channel), order,
        pulseforge::family_from_string(family)};
    target.condition_count();  // validate the combination up front
    pulseforge::SolveReport rep;
    if (!seed.empty())
        rep = pulseforge::solve(target, parse_coeffs(seed));
    else
        rep = pulseforge::solve_auto(target);
    const std::string json = pulseforge::solve_report_json(target, rep);
    if (out.empty()) {
        std::cout << json << '\n';
    } else {
        std::ofstream f(out);
        if (!f) throw pulseforge::IoError("cannot open " + out);
        f << json << '\n';
        if (!f) throw pulseforge::IoError("write failed for " + out);
    }
    return kExitOk;
}

int cmd_scan(const std::string& pulse_path, const std::string& alpha,
             const std::string& delta, bool rabi, int threads,
             const std::string& out) {
    if (!std::filesystem::exists(pulse_path))
        throw pulseforge::IoError("pulse file not found: " + pulse_path);
    const auto pulse = pulseforge::read_pulse_csv(pulse_path);
    const auto alphas = parse_grid(alpha, "--alpha");
    const auto deltas = parse_grid(delta, "--delta");
    const auto result = pulseforge::scan(pulse, alphas, deltas, threads);
    pulseforge::write_scan_csv(out, result, rabi);
    nlohmann::json cfg;
    cfg["pulse"] = pulse_path;
    cfg["alpha"] = alpha;
    cfg["delta"] = delta;
    cfg["rabi"] = rabi;
    cfg["threads"] = threads;
    std::ofstream js(pulseforge::sidecar_path(out));
    if (!js)
        throw pulseforge::IoError("cannot open sidecar for " + out);
    js << cfg.dump(2) << '\n';
    std::printf("scan: %zu rows -> %s\n", result.rows.size(), out.c_str());
    return kExitOk;
}

int cmd_verify() {
    const auto results = pulseforge::run_all_criteria();
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s (%s)\n", r.passed ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.detail.c_str());
        if (!r.passed) all = false;
    }
    std::printf("%s\n", all ? "all criteria passed"
                            : "some criteria failed (see above)");
    return all ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulseforge: design, solve and verify robust shaped pulses "
                 "for two-level population inversion"};
    app.require_subcommand(1);

    std::string family = "a", coeffs, seed, out, pulse_path, config;
    std::string alpha = "0", delta = "0", channel = "area";
    double T = 1.0, tmax = 0.0;
    std::size_t samples = 4001;
    int order = 3, threads = 0;
    bool rabi = false;

    auto* design = app.add_subcommand("design", "synthesize a shaped pulse");
    design->add_option("--family", family, "phase family: a, b or rabi");
    design->add_option("--coeffs", coeffs, "Fourier coefficients C1,C2,...");
    design->add_option("--T", T, "duration scale");
    design->add_option("--tmax", tmax, "window half-width (default 4T)");
    design->add_option("--samples", samples, "grid samples");
    design->add_option("--out", out, "output pulse CSV");
    design->add_option("--config", config, "JSON run config");

    auto* area = app.add_subcommand("area", "print the pulse area");
    area->add_option("--family", family, "phase family: a, b or rabi");
    area->add_option("--coeffs", coeffs, "Fourier coefficients C1,C2,...");

    auto* solve = app.add_subcommand("solve", "solve for robust coefficients");
    solve->add_option("--channel", channel, "area, detuning or both");
    solve->add_option("--order", order, "robustness order");
    solve->add_option("--family", family, "phase family: a or b");
    solve->add_option("--seed", seed, "explicit Newton seed C1,C2,...");
    solve->add_option("--out", out, "write report JSON here");
    solve->add_option("--config", config, "JSON run config");

    auto* scan = app.add_subcommand("scan", "scan the excitation profile");
    scan->add_option("--pulse", pulse_path, "pulse CSV");
    scan->add_option("--alpha", alpha, "alpha grid (value or lo:hi:step)");
    scan->add_option("--delta", delta, "delta grid (value or lo:hi:step)");
    scan->add_flag("--rabi", rabi, "append the analytic Rabi baseline column");
    scan->add_option("--threads", threads,
                     "worker threads (default: all cores)");
    scan->add_option("--out", out, "output scan CSV");
    scan->add_option("--config", config, "JSON run config");

    app.add_subcommand("verify",
                       "run the published-table and invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    using nlohmann::json;
    try {
        if (design->parsed()) {
            apply_config(
                design, config,
                {{"family", [&](const json& v) { family = v; }},
                 {"coeffs", [&](const json& v) { coeffs = coeffs_from_json(v); }},
                 {"T", [&](const json& v) { T = v; }},
                 {"tmax", [&](const json& v) { tmax = v; }},
                 {"samples", [&](const json& v) { samples = v; }},
                 {"out", [&](const json& v) { out = v; }}});
            if (out.empty())
                throw pulseforge::ValidationError("design: --out is required");
            return cmd_design(family, coeffs, T, tmax, samples, out);
        }
        if (area->parsed()) return cmd_area(family, coeffs);
        if (solve->parsed()) {
            apply_config(
                solve, config,
                {{"channel", [&](const json& v) { channel = v; }},
                 {"order", [&](const json& v) { order = v; }},
                 {"family", [&](const json& v) { family = v; }},
                 {"seed", [&](const json& v) { seed = coeffs_from_json(v); }},
                 {"out", [&](const json& v) { out = v; }}});
            return cmd_solve(channel, order, family, seed, out);
        }
        if (scan->parsed()) {
            apply_config(
                scan, config,
                {{"pulse", [&](const json& v) { pulse_path = v; }},
                 {"alpha", [&](const json& v) { alpha = v.is_string() ? v.get<std::string>() : v.dump(); }},
                 {"delta", [&](const json& v) { delta = v.is_string() ? v.get<std::string>() : v.dump(); }},
                 {"rabi", [&](const json& v) { rabi = v; }},
                 {"threads", [&](const json& v) { threads = v; }},
                 {"out", [&](const json& v) { out = v; }}});
            if (pulse_path.empty())
                throw pulseforge::ValidationError("scan: --pulse is required");
            if (out.empty())
                throw pulseforge::ValidationError("scan: --out is required");
            return cmd_scan(pulse_path, alpha, delta, rabi, threads, out);
        }
        return cmd_verify();
    } catch (const pulseforge::IoError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitIo;
    } catch (const pulseforge::IterationLimitError& ex) {
        std::cerr << "error: " << ex.what()
                  << " (last residual norm " << ex.last_residual_norm << ")\n";
        return kExitConvergence;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitValidation;
    }
}
