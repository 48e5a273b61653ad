// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace paim {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument("SystemConfig: " + what);
}

} // namespace

void SystemConfig::validate() const {
    require(n_t >= 1, "n_t must be >= 1");
    require(n_wg >= 1, "n_wg must be >= 1");
    require(n_r >= 1, "n_r must be >= 1");
    require(n_a >= 1 && n_a <= n_t, "n_a must satisfy 1 <= n_a <= n_t");
    require(is_power_of_two(mod_order) && mod_order >= 2,
            "mod_order must be a power of two >= 2");
    require(eta_eff > 1.0, "eta_eff must be > 1");
    require(f_c_hz > 0.0, "f_c_hz must be > 0");
    require(area_side_m > 0.0, "area_side_m must be > 0");
    require(delta_sf >= 0.0 && delta_sf <= 1.0, "delta_sf must be in [0, 1]");
    require(sigma_sf_db >= 0.0, "sigma_sf_db must be >= 0");
    require(d_decorr_m > 0.0, "d_decorr_m must be > 0");
    for (double v : {p_t_dbm, n0_dbm, tx_height_m, rx_position_m[0],
                     rx_position_m[1], rx_position_m[2]})
        require(std::isfinite(v), "all distances and powers must be finite");
}

double SystemConfig::p_t_mw() const { return std::pow(10.0, p_t_dbm / 10.0); }
double SystemConfig::n0_mw() const { return std::pow(10.0, n0_dbm / 10.0); }
double SystemConfig::rho_mw() const {
    return p_t_mw() / (static_cast<double>(n_wg) * static_cast<double>(n_a));
}

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

DeploymentGeometry build_geometry(const SystemConfig& cfg) {
    cfg.validate();

    DeploymentGeometry geom;
    geom.lambda_m = cfg.wavelength_m();
    geom.lambda_g_m = geom.lambda_m / cfg.eta_eff;

    const double d = cfg.area_side_m;
    const double half_lambda = geom.lambda_m / 2.0;

    geom.feed_points.resize(cfg.n_wg);
    geom.candidate_pa_positions.assign(cfg.n_wg, std::vector<Vec3>(cfg.n_t));
    for (int n = 0; n < cfg.n_wg; ++n) {
        const double y = d * (n + 0.5) / cfg.n_wg;
        geom.feed_points[n] = {0.0, y, cfg.tx_height_m};

        // Nearest point (in x) of the [0, D] waveguide segment to the receiver.
        const double x_center = std::clamp(cfg.rx_position_m[0], 0.0, d);
        for (int j = 0; j < cfg.n_t; ++j) {
            const double x = x_center + (j - (cfg.n_t - 1) / 2.0) * half_lambda;
            if (x < 0.0 || x > d) {
                std::ostringstream oss;
                oss << "candidate cluster exceeds [0, " << d << "] at x = " << x
                    << " (waveguide " << n << ", position " << j << ")";
                throw std::invalid_argument(oss.str());
            }
            geom.candidate_pa_positions[n][j] = {x, y, cfg.tx_height_m};
        }
    }

    geom.rx_elements.resize(cfg.n_r);
    for (int m = 0; m < cfg.n_r; ++m) {
        const double x =
            cfg.rx_position_m[0] + (m - (cfg.n_r - 1) / 2.0) * half_lambda;
        geom.rx_elements[m] = {x, cfg.rx_position_m[1], cfg.rx_position_m[2]};
    }
    return geom;
}

SystemConfig parse_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");

    static const std::set<std::string> known = {
        "n_t",        "n_wg",       "n_a",          "n_r",
        "mod_order",  "p_t_dbm",    "n0_dbm",       "f_c_hz",
        "eta_eff",    "area_side_m", "tx_height_m", "rx_position_m",
        "delta_sf",   "sigma_sf_db", "d_decorr_m",  "rng_seed"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    SystemConfig cfg;
    auto get_int = [&](const char* k, int& out) { if (j.contains(k)) out = j.at(k).get<int>(); };
    auto get_dbl = [&](const char* k, double& out) { if (j.contains(k)) out = j.at(k).get<double>(); };
    get_int("n_t", cfg.n_t);
    get_int("n_wg", cfg.n_wg);
    get_int("n_a", cfg.n_a);
    get_int("n_r", cfg.n_r);
    get_int("mod_order", cfg.mod_order);
    get_dbl("p_t_dbm", cfg.p_t_dbm);
    get_dbl("n0_dbm", cfg.n0_dbm);
    get_dbl("f_c_hz", cfg.f_c_hz);
    get_dbl("eta_eff", cfg.eta_eff);
    get_dbl("area_side_m", cfg.area_side_m);
    get_dbl("tx_height_m", cfg.tx_height_m);
    get_dbl("delta_sf", cfg.delta_sf);
    get_dbl("sigma_sf_db", cfg.sigma_sf_db);
    get_dbl("d_decorr_m", cfg.d_decorr_m);
    if (j.contains("rx_position_m")) {
        auto v = j.at("rx_position_m").get<std::vector<double>>();
        if (v.size() != 3)
            throw std::invalid_argument("config: rx_position_m must have 3 entries");
        cfg.rx_position_m = {v[0], v[1], v[2]};
    }
    if (j.contains("rng_seed")) cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace paim
