#pragma once

#include <string>

#include "errors.hpp"

namespace omb {

// All rates and frequencies are stored in units of omega_m unless omega_m is
// overridden. Defaults reproduce the parameter set used throughout the
// reference figures: g0 = 0.5, Omega = 0.01, gamma_c = 0.3, gamma_m = 0.001,
// nbar_m = 0.
struct SystemParams {
    double omega_m = 1.0;   // mechanical frequency (the unit scale)
    double delta_c = 0.0;   // optical detuning omega_c - omega_L
    double g0 = 0.5;        // single-photon optomechanical coupling
    double G = 0.0;         // mechanical pump strength
    double Omega = 0.01;    // optical drive amplitude
    double gamma_c = 0.3;   // cavity amplitude decay rate
    double gamma_m = 0.001; // mechanical decay rate
    double nbar_m = 0.0;    // thermal phonon occupancy
};

struct DerivedScalars {
    double eta;    // g0^2 / omega_m
    double delta;  // 2 g0 G / omega_m
};

// Throws ConfigError when any invariant fails:
// omega_m > 0, gamma_c > 0, gamma_m >= 0, nbar_m >= 0, g0 >= 0, G >= 0,
// Omega >= 0, all finite.
void validate(const SystemParams& p);

// True when the perturbative treatment of the drive is justified
// (Omega < gamma_c). The analytic and amplitude routes refuse to run
// outside this regime; the master-equation route only warns.
bool weak_drive_ok(const SystemParams& p);

DerivedScalars derived_scalars(const SystemParams& p);

// Drive amplitude from input laser power: sqrt(P_in * gamma_c / omega_L).
// Zero power gives zero; other non-positive arguments are domain errors.
double drive_amplitude(double P_in, double gamma_c, double omega_L);

// Bose occupancy [exp(omega_m / (k_B T)) - 1]^-1, zero at T = 0.
double thermal_occupancy(double omega_m, double T, double k_B);

// JSON config I/O. The schema mirrors the field names above; unknown keys
// are rejected. to_json emits every field so the output round-trips.
SystemParams params_from_json(const std::string& text);
std::string params_to_json(const SystemParams& p);

}  // namespace omb
