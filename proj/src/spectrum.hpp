#pragma once

#include <vector>

#include "params.hpp"

namespace omb {

struct LevelIndex {
    int n;  // photon number
    int m;  // phonon number
};

// Eigenvalue of the undriven Hamiltonian in the displaced basis:
//   E_nm = n*delta_c + m*omega_m - n^2*eta - n*delta - G^2/omega_m.
double eigenenergy(LevelIndex idx, const SystemParams& p);

// Anharmonic level shift xi_n = (n^2 g0^2 + 2 n g0 G + G^2) / omega_m.
double energy_shift(int n, const SystemParams& p);

// Detuning of the single-photon resonance: eta + delta = E_{1,0} - E_{0,0}
// solved for delta_c = 0 offset.
double spr_detuning(const SystemParams& p);

// Detuning of the two-photon resonance with an m-phonon sideband:
//   2*eta + delta - m*omega_m/2, the delta_c solving E_{2,m} = E_{0,0}.
double tpr_detuning(const SystemParams& p, int m_sideband);

struct ResonanceRow {
    const char* kind;  // "spr", "tpr", "omega10", "omega20", "omega21"
    int m;             // phonon sideband index
    double delta_c;    // resonant detuning
};

// Resonance conditions of the anharmonic ladder: the SPR line, TPR sidebands
// m = 0..4, and the named single-/two-photon transition lines. Every entry
// reproduces the corresponding eigenenergy difference exactly.
std::vector<ResonanceRow> resonance_table(const SystemParams& p);

}  // namespace omb
