#include "pulseforge/pulse_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pulseforge {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_pulse_csv(const std::filesystem::path& csv_path,
                     const PulseShape& pulse) {
    std::ofstream f(csv_path);
    if (!f) throw IoError("cannot open " + csv_path.string() + " for writing");
    f << "t,omega,delta\n";
    for (std::size_t i = 0; i < pulse.time.size(); ++i)
        f << fmt(pulse.time[i]) << ',' << fmt(pulse.omega[i]) << ','
          << fmt(pulse.delta[i]) << '\n';
    if (!f) throw IoError("write failed for " + csv_path.string());

    nlohmann::json j;
    j["area"] = pulse.area;
    j["n_samples"] = pulse.time.size();
    if (pulse.provenance) {
        j["family"] = to_string(pulse.provenance->phase.family());
        j["coefficients"] = pulse.provenance->phase.coefficients();
        j["T"] = pulse.provenance->schedule.duration_scale;
        j["t_max"] = pulse.provenance->schedule.t_max;
    }
    std::ofstream js(sidecar_path(csv_path));
    if (!js)
        throw IoError("cannot open " + sidecar_path(csv_path).string() +
                      " for writing");
    js << j.dump(2) << '\n';
    if (!js) throw IoError("write failed for sidecar of " + csv_path.string());
}

PulseShape read_pulse_csv(const std::filesystem::path& csv_path) {
    std::ifstream f(csv_path);
    if (!f) throw IoError("cannot open " + csv_path.string());
    std::string line;
    if (!std::getline(f, line) || line.rfind("t,omega,delta", 0) != 0)
        throw IoError(csv_path.string() + ": expected header t,omega,delta");
    PulseShape pulse;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double t, om, de;
        char c1, c2;
        if (!(ss >> t >> c1 >> om >> c2 >> de) || c1 != ',' || c2 != ',')
            throw IoError(csv_path.string() + ":" + std::to_string(lineno) +
                          ": malformed row");
        pulse.time.push_back(t);
        pulse.omega.push_back(om);
        pulse.delta.push_back(de);
    }
    if (pulse.time.size() < 2)
        throw IoError(csv_path.string() + ": fewer than 2 samples");
    for (std::size_t i = 1; i < pulse.time.size(); ++i)
        if (!(pulse.time[i] > pulse.time[i - 1]))
            throw IoError(csv_path.string() + ": time not strictly increasing");
    double area = 0.0;
    for (std::size_t i = 1; i < pulse.time.size(); ++i)
        area += 0.5 * (pulse.omega[i] + pulse.omega[i - 1]) *
                (pulse.time[i] - pulse.time[i - 1]);
    pulse.area = area;
    return pulse;
}

void write_scan_csv(const std::filesystem::path& csv_path,
                    const ScanResult& scan, bool with_rabi_reference) {
    constexpr double kPi = 3.14159265358979323846;
    std::ofstream f(csv_path);
    if (!f) throw IoError("cannot open " + csv_path.string() + " for writing");
    f << "alpha,delta,p2,log10_infidelity";
    if (with_rabi_reference) f << ",p2_rabi";
    f << '\n';
    for (const auto& r : scan.rows) {
        f << fmt(r.alpha) << ',' << fmt(r.delta) << ',' << fmt(r.p2) << ',';
        if (!r.ok)
            f << "nan";
        else if (r.infidelity <= 0.0)
            f << "-inf";
        else
            f << fmt(std::log10(r.infidelity));
        if (with_rabi_reference) {
            const double c = std::cos(kPi * r.alpha / 2.0);
            f << ',' << fmt(c * c);
        }
        f << '\n';
    }
    if (!f) throw IoError("write failed for " + csv_path.string());
}

std::string solve_report_json(const RobustnessTarget& target,
                              const SolveReport& report) {
    constexpr double kPi = 3.14159265358979323846;
    nlohmann::json j;
    j["target"] = {{"channel", to_string(target.channel)},
                   {"order", target.order},
                   {"family", to_string(target.family)}};
    j["coefficients"] = report.coefficients;
    j["residual_norm"] = report.residual_norm;
    j["pulse_area_over_pi"] = report.pulse_area / kPi;
    j["verified_orders"] = report.verified_orders;
    j["iterations"] = report.iterations;
    return j.dump(2);
}

}  // namespace pulseforge
