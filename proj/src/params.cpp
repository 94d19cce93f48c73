#include "params.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace omb {

void validate(const SystemParams& p) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.omega_m) || !finite(p.delta_c) || !finite(p.g0) ||
        !finite(p.G) || !finite(p.Omega) || !finite(p.gamma_c) ||
        !finite(p.gamma_m) || !finite(p.nbar_m))
        throw ConfigError("parameters must be finite");
    if (p.omega_m <= 0) throw ConfigError("omega_m must be > 0");
    if (p.gamma_c <= 0) throw ConfigError("gamma_c must be > 0");
    if (p.gamma_m < 0) throw ConfigError("gamma_m must be >= 0");
    if (p.nbar_m < 0) throw ConfigError("nbar_m must be >= 0");
    if (p.g0 < 0) throw ConfigError("g0 must be >= 0");
    if (p.G < 0) throw ConfigError("G must be >= 0");
    if (p.Omega < 0) throw ConfigError("Omega must be >= 0");
}

bool weak_drive_ok(const SystemParams& p) { return p.Omega < p.gamma_c; }

DerivedScalars derived_scalars(const SystemParams& p) {
    return {p.g0 * p.g0 / p.omega_m, 2.0 * p.g0 * p.G / p.omega_m};
}

double drive_amplitude(double P_in, double gamma_c, double omega_L) {
    if (P_in == 0.0) return 0.0;
    if (P_in < 0 || gamma_c <= 0 || omega_L <= 0)
        throw ConfigError("drive_amplitude requires positive arguments");
    return std::sqrt(P_in * gamma_c / omega_L);
}

double thermal_occupancy(double omega_m, double T, double k_B) {
    if (omega_m <= 0) throw ConfigError("omega_m must be > 0");
    if (T < 0) throw ConfigError("temperature must be >= 0");
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(omega_m / (k_B * T));
}

SystemParams params_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    SystemParams p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (!it.value().is_number())
            throw ConfigError("config value for '" + k + "' must be a number");
        double v = it.value().get<double>();
        if (k == "omega_m") p.omega_m = v;
        else if (k == "delta_c") p.delta_c = v;
        else if (k == "g0") p.g0 = v;
        else if (k == "G") p.G = v;
        else if (k == "Omega") p.Omega = v;
        else if (k == "gamma_c") p.gamma_c = v;
        else if (k == "gamma_m") p.gamma_m = v;
        else if (k == "nbar_m") p.nbar_m = v;
        else throw ConfigError("unknown config key '" + k + "'");
    }
    validate(p);
    return p;
}

std::string params_to_json(const SystemParams& p) {
    nlohmann::json j;
    j["omega_m"] = p.omega_m;
    j["delta_c"] = p.delta_c;
    j["g0"] = p.g0;
    j["G"] = p.G;
    j["Omega"] = p.Omega;
    j["gamma_c"] = p.gamma_c;
    j["gamma_m"] = p.gamma_m;
    j["nbar_m"] = p.nbar_m;
    return j.dump();
}

}  // namespace omb
