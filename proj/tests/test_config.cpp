// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "paim/config.hpp"

using namespace paim;

TEST_CASE("wavelengths at 3 GHz") {
    SystemConfig cfg;
    cfg.f_c_hz = 3.0e9;
    cfg.eta_eff = 1.4;
    CHECK(cfg.wavelength_m() == doctest::Approx(0.09993).epsilon(1e-4));
    CHECK(cfg.guided_wavelength_m() == doctest::Approx(0.07138).epsilon(1e-3));
    CHECK(cfg.guided_wavelength_m() == cfg.wavelength_m() / cfg.eta_eff);
}

TEST_CASE("candidate cluster centered at the x nearest to the receiver") {
    SystemConfig cfg;
    cfg.n_wg = 1;
    cfg.n_t = 5;
    cfg.area_side_m = 500.0;
    cfg.rx_position_m = {400.0, 50.0, 1.5};
    const auto geom = build_geometry(cfg);
    // Odd count: middle candidate sits exactly at the receiver's x.
    CHECK(geom.candidate_pa_positions[0][2][0] == doctest::Approx(400.0));
    // Waveguide y for a single waveguide is D/2.
    CHECK(geom.candidate_pa_positions[0][0][1] == doctest::Approx(250.0));
    CHECK(geom.feed_points[0][0] == 0.0);
    CHECK(geom.feed_points[0][2] == cfg.tx_height_m);
}

TEST_CASE("receiver ULA offsets for two elements are +-lambda/4") {
    SystemConfig cfg;
    cfg.n_r = 2;
    const auto geom = build_geometry(cfg);
    const double q = geom.lambda_m / 4.0;
    CHECK(geom.rx_elements[0][0] ==
          doctest::Approx(cfg.rx_position_m[0] - q).epsilon(1e-12));
    CHECK(geom.rx_elements[1][0] ==
          doctest::Approx(cfg.rx_position_m[0] + q).epsilon(1e-12));
}

TEST_CASE("candidate positions stay on the waveguide line") {
    SystemConfig cfg;
    cfg.n_t = 8;
    cfg.n_wg = 2;
    const auto geom = build_geometry(cfg);
    for (int n = 0; n < cfg.n_wg; ++n) {
        for (int j = 0; j < cfg.n_t; ++j) {
            const auto& pa = geom.candidate_pa_positions[n][j];
            const auto& fp = geom.feed_points[n];
            CHECK(pa[1] == fp[1]);
            CHECK(pa[2] == fp[2]);
            // Norm collapses to the pure x offset.
            CHECK(distance(pa, fp) == std::abs(pa[0] - fp[0]));
        }
        for (int j = 1; j < cfg.n_t; ++j) {
            const double dx = geom.candidate_pa_positions[n][j][0] -
                              geom.candidate_pa_positions[n][j - 1][0];
            CHECK(dx == doctest::Approx(geom.lambda_m / 2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("cluster beyond the region is rejected") {
    SystemConfig cfg;
    cfg.rx_position_m = {0.05, 50.0, 1.5}; // cluster would dip below x = 0
    cfg.n_t = 64;
    CHECK_THROWS_AS(build_geometry(cfg), std::invalid_argument);
}

TEST_CASE("config validation rejects bad fields") {
    SystemConfig cfg;
    cfg.n_a = 5;
    cfg.n_t = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.mod_order = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.eta_eff = 0.9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.delta_sf = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("JSON config round trip and unknown keys") {
    const char* text = R"({
        "n_t": 8, "n_wg": 2, "n_a": 1, "n_r": 4, "mod_order": 16,
        "p_t_dbm": 25.0, "rx_position_m": [300.0, 100.0, 1.5],
        "rng_seed": 42
    })";
    const SystemConfig cfg = parse_config(text);
    CHECK(cfg.n_t == 8);
    CHECK(cfg.n_wg == 2);
    CHECK(cfg.mod_order == 16);
    CHECK(cfg.rx_position_m[1] == 100.0);
    CHECK(cfg.rng_seed == 42);
    // Untouched fields keep their defaults.
    CHECK(cfg.n0_dbm == -90.0);

    CHECK_THROWS_WITH_AS(parse_config(R"({"n_tt": 4})"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"rx_position_m": [1.0, 2.0]})"),
                    std::invalid_argument);
}

TEST_CASE("load_config reads a file and rejects missing paths") {
    const char* path = "/tmp/paim_test_config.json";
    {
        std::ofstream out(path);
        out << R"({"n_t": 16, "mod_order": 8})";
    }
    const SystemConfig cfg = load_config(path);
    CHECK(cfg.n_t == 16);
    CHECK(cfg.mod_order == 8);
    CHECK_THROWS_AS(load_config("/tmp/paim_no_such_config.json"),
                    std::runtime_error);
}
