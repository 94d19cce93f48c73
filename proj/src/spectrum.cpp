#include "spectrum.hpp"

namespace omb {

double eigenenergy(LevelIndex idx, const SystemParams& p) {
    auto [eta, delta] = derived_scalars(p);
    return idx.n * p.delta_c + idx.m * p.omega_m - idx.n * idx.n * eta -
           idx.n * delta - p.G * p.G / p.omega_m;
}

double energy_shift(int n, const SystemParams& p) {
    if (n < 0) throw ConfigError("energy_shift: n must be >= 0");
    return (n * n * p.g0 * p.g0 + 2.0 * n * p.g0 * p.G + p.G * p.G) / p.omega_m;
}

double spr_detuning(const SystemParams& p) {
    auto [eta, delta] = derived_scalars(p);
    return eta + delta;
}

double tpr_detuning(const SystemParams& p, int m_sideband) {
    if (m_sideband < 0) throw ConfigError("tpr_detuning: m must be >= 0");
    auto [eta, delta] = derived_scalars(p);
    return 2.0 * eta + delta - m_sideband * p.omega_m / 2.0;
}

std::vector<ResonanceRow> resonance_table(const SystemParams& p) {
    std::vector<ResonanceRow> rows;
    rows.push_back({"spr", 0, spr_detuning(p)});
    for (int m = 0; m <= 4; ++m) rows.push_back({"tpr", m, tpr_detuning(p, m)});
    // Transition lines of the level diagram: omega10 is the 0->1 line (the
    // SPR condition), omega20 the 0->2 line without sidebands, omega21 the
    // 0->2 line accompanied by two phonons.
    rows.push_back({"omega10", 0, spr_detuning(p)});
    rows.push_back({"omega20", 0, tpr_detuning(p, 0)});
    rows.push_back({"omega21", 2, tpr_detuning(p, 2)});
    return rows;
}

}  // namespace omb
