#pragma once

#include "errors.hpp"

namespace omb {

enum class Route { analytic, perturbative, master };

enum class Label { none, one_pb, two_pb, pit, sub_poisson, super_poisson };

// Qualitative thresholds: one_pb below tau1, pit above tau2. The two_pb rule
// (g2 > 1 and g3 < 1) is fixed.
struct Thresholds {
    double tau1 = 0.5;
    double tau2 = 2.0;
};

// Precedence: two_pb, then one_pb, then pit, then sub/super-Poissonian by
// g2 relative to 1; exactly g2 = 1 gets no label. Negative inputs are
// domain errors.
Label classify(double g2, double g3, const Thresholds& th = {});

const char* route_name(Route r);
const char* label_name(Label l);

// One evaluated parameter point, tagged by the route that produced it.
struct CorrelationPoint {
    double P1 = 0, P2 = 0, P3 = 0;
    double mean_n = 0;
    double g2 = 0, g3 = 0;
    Route route = Route::analytic;
    Label label = Label::none;
};

}  // namespace omb
