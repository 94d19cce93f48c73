#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include <doctest.h>

#include "omblock.h"

namespace {

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    omb_string_free(s);
    return out;
}

struct Params {
    omb_params* p = omb_params_new();
    ~Params() { omb_params_free(p); }
    operator omb_params*() const { return p; }
};

}  // namespace

TEST_CASE("version and label names") {
    CHECK(std::string(omb_version()) == "1.0.0");
    CHECK(std::string(omb_label_name(0)) == "None");
    CHECK(std::string(omb_label_name(2)) == "TwoPB");
}

TEST_CASE("parameter handles: set/get, JSON, error reporting") {
    Params P;
    REQUIRE(P.p != nullptr);

    double v = 0;
    CHECK(omb_params_get(P, "g0", &v) == OMB_OK);
    CHECK(v == 0.5);
    CHECK(omb_params_get(P, "n_a", &v) == OMB_OK);
    CHECK(v == 6);

    CHECK(omb_params_set(P, "delta_c", 0.55) == OMB_OK);
    CHECK(omb_params_set(P, "G", 0.3) == OMB_OK);
    CHECK(omb_params_get(P, "delta_c", &v) == OMB_OK);
    CHECK(v == 0.55);

    CHECK(omb_params_set(P, "coupling", 1.0) == OMB_ERR_CONFIG);
    CHECK(std::strlen(omb_last_error()) > 0);
    CHECK(omb_params_get(nullptr, "g0", &v) == OMB_ERR_CONFIG);

    std::string dump = take(omb_params_dump_json(P));
    Params Q;
    CHECK(omb_params_load_json(Q, dump.c_str()) == OMB_OK);
    CHECK(omb_params_get(Q, "G", &v) == OMB_OK);
    CHECK(v == 0.3);
    CHECK(omb_params_load_json(Q, "{\"nope\": 1}") == OMB_ERR_CONFIG);

    // values are validated when used, not when stored
    CHECK(omb_params_set(P, "gamma_c", -1.0) == OMB_OK);
    omb_point pt{};
    CHECK(omb_eval_point(P, "analytic", &pt) == OMB_ERR_CONFIG);
}

TEST_CASE("single-point evaluation across routes") {
    Params P;
    omb_params_set(P, "delta_c", 0.55);

    omb_point pt{};
    REQUIRE(omb_eval_point(P, "analytic", &pt) == OMB_OK);
    CHECK(pt.g2 == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(std::string(omb_label_name(pt.label)) == "PIT");

    REQUIRE(omb_eval_point(P, "perturbative", &pt) == OMB_OK);
    CHECK(pt.g2 == doctest::Approx(3.994777).epsilon(1e-5));

    CHECK(omb_eval_point(P, "teleport", &pt) == OMB_ERR_CONFIG);

    // the closed form is drive-independent, so Omega = 0 still evaluates;
    // the amplitude cascade sees an empty cavity and reports the undefined
    // correlation instead
    omb_params_set(P, "Omega", 0.0);
    CHECK(omb_eval_point(P, "analytic", &pt) == OMB_OK);
    CHECK(omb_eval_point(P, "perturbative", &pt) == OMB_ERR_NUMERIC);
    CHECK(std::strlen(omb_last_error()) > 0);
}

TEST_CASE("resonance table CSV") {
    Params P;
    std::string csv = take(omb_resonance_csv(P));
    CHECK(csv.rfind("kind,m,delta_c\n", 0) == 0);
    CHECK(csv.find("spr,0,0.25\n") != std::string::npos);
    CHECK(csv.find("tpr,0,0.5\n") != std::string::npos);
    CHECK(csv.find("tpr,2,-0.5\n") != std::string::npos);
    CHECK(omb_resonance_csv(nullptr) == nullptr);
}

TEST_CASE("sweep handle lifecycle and accessors") {
    Params P;
    omb_sweep* s = omb_sweep_run(P, "delta_c", 0.3, 0.5, 11, "analytic");
    REQUIRE(s != nullptr);

    CHECK(omb_sweep_row_count(s) == 11);

    double x = 0;
    const char* route = nullptr;
    const char* err = nullptr;
    omb_point pt{};
    REQUIRE(omb_sweep_row(s, 0, &x, &route, &pt, &err) == OMB_OK);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(std::string(route) == "analytic");
    CHECK(err == nullptr);
    CHECK(pt.g2 > 0);
    CHECK(omb_sweep_row(s, 99, &x, &route, &pt, &err) == OMB_ERR_CONFIG);

    std::string csv = take(omb_sweep_csv(s));
    CHECK(csv.rfind("axis_name,axis_value,route,", 0) == 0);
    std::string prov = take(omb_sweep_provenance(s));
    CHECK(prov.find("\"library_version\"") != std::string::npos);

    CHECK(omb_sweep_feature_count(s) >= 0);
    int n_windows = omb_sweep_window_count(s);
    REQUIRE(n_windows == 1);  // the blockade interval around 0.385
    double lo = 0, hi = 0;
    REQUIRE(omb_sweep_window(s, 0, &route, &lo, &hi) == OMB_OK);
    CHECK(lo < 0.385);
    CHECK(hi > 0.385);

    omb_sweep_free(s);

    CHECK(omb_sweep_run(P, "sideways", 0, 1, 11, "analytic") == nullptr);
    CHECK(omb_sweep_run(P, "delta_c", 0, 1, 1, "analytic") == nullptr);
    CHECK(std::strlen(omb_last_error()) > 0);
}

TEST_CASE("scan handle reports flagged detunings") {
    Params P;
    const double pumps[2] = {0.0, 0.3};
    omb_scan* s = omb_scan_run(P, 0.3, 0.5, 21, pumps, nullptr, 2, "analytic");
    REQUIRE(s != nullptr);

    REQUIRE(omb_scan_flagged_count(s) >= 1);
    double lo = 0, hi = 0;
    REQUIRE(omb_scan_flagged(s, 0, &lo, &hi) == OMB_OK);
    CHECK(lo <= hi);

    std::string csv = take(omb_scan_pump_csv(s, 1));
    CHECK(csv.rfind("axis_name,axis_value,route,", 0) == 0);
    CHECK(omb_scan_pump_csv(s, 7) == nullptr);

    std::string prov = take(omb_scan_provenance(s));
    CHECK(prov.find("\"flagged_intervals\"") != std::string::npos);

    omb_scan_free(s);

    CHECK(omb_scan_run(P, 0.3, 0.5, 21, nullptr, nullptr, 0, "analytic") ==
          nullptr);
}

TEST_CASE("convergence table through the C surface") {
    Params P;
    omb_params_set(P, "delta_c", 0.3);
    omb_params_set(P, "g0", 0.0);
    char* table = nullptr;
    int converged = 0;
    REQUIRE(omb_convergence_run(P, "perturbative", &table, &converged) ==
            OMB_OK);
    std::string t = take(table);
    CHECK(converged == 1);
    CHECK(t.find("n_a") != std::string::npos);
    CHECK(t.find("converged") != std::string::npos);

    CHECK(omb_convergence_run(P, "nowhere", &table, &converged) ==
          OMB_ERR_CONFIG);
}

TEST_CASE("validation suite and its negative control") {
    char* table = nullptr;
    int all_pass = 0;
    REQUIRE(omb_validate_run(7, 0, &table, &all_pass) == OMB_OK);
    std::string good = take(table);
    CHECK(all_pass == 1);
    CHECK(good.find("PASS") != std::string::npos);

    REQUIRE(omb_validate_run(7, 1, &table, &all_pass) == OMB_OK);
    std::string ctrl = take(table);
    CHECK(all_pass == 0);
    CHECK(ctrl.find("FAIL") != std::string::npos);
}

TEST_CASE("state dump writes a loadable file") {
    Params P;
    omb_params_set(P, "n_a", 4);
    omb_params_set(P, "n_b", 4);
    const char* path = "capi_state_dump.bin";
    REQUIRE(omb_state_dump(P, path) == OMB_OK);
    std::FILE* f = std::fopen(path, "rb");
    REQUIRE(f != nullptr);
    std::fseek(f, 0, SEEK_END);
    long size = std::ftell(f);
    std::fclose(f);
    std::remove(path);
    // JSON header line plus 16x16 complex doubles
    CHECK(size > 16 * 16 * 16);
}
