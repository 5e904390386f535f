#pragma once

#include <filesystem>
#include <string>

#include "pulseforge/propagator.hpp"
#include "pulseforge/solver.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pulse CSV: header `t,omega,delta`, one row per grid point, 15 significant
// digits. A JSON sidecar (same path with .json extension) records the
// generating parameterization:
// {family, coefficients, T, t_max, n_samples, area}.
void write_pulse_csv(const std::filesystem::path& csv_path,
                     const PulseShape& pulse);

// Loads a sampled pulse. Provenance is intentionally not restored: file-loaded
// pulses are propagated through the spline path.
PulseShape read_pulse_csv(const std::filesystem::path& csv_path);

// Scan CSV: header `alpha,delta,p2,log10_infidelity`, row-major.
// log10_infidelity prints the token `-inf` when the infidelity underflows to
// zero. with_rabi_reference appends a `p2_rabi` column carrying the resonant
// pi-pulse baseline cos^2(pi alpha / 2).
void write_scan_csv(const std::filesystem::path& csv_path,
                    const ScanResult& scan, bool with_rabi_reference = false);

std::string solve_report_json(const RobustnessTarget& target,
                              const SolveReport& report);

// Sidecar helper: `p.csv` -> `p.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace pulseforge
