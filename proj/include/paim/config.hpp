// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_CONFIG_HPP
#define PAIM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace paim {

using Vec3 = std::array<double, 3>;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Scenario description: antenna counts, modulation order, powers and the
/// deployment geometry constants everything else is derived from.
struct SystemConfig {
    int n_t = 4;                 // candidate PA positions per waveguide
    int n_wg = 1;                // number of waveguides
    int n_a = 1;                 // activated PAs per waveguide
    int n_r = 2;                 // receive antennas
    int mod_order = 4;           // QAM constellation size M
    double p_t_dbm = 20.0;       // total transmit power (dBm)
    double n0_dbm = -90.0;       // noise power (dBm)
    double f_c_hz = 3.0e9;       // carrier frequency (Hz)
    double eta_eff = 1.4;        // waveguide effective refractive index
    double area_side_m = 500.0;  // square region side D (m)
    double tx_height_m = 12.5;   // waveguide height (m)
    Vec3 rx_position_m = {400.0, 50.0, 1.5};
    double delta_sf = 0.5;       // shadow-fading correlation split
    double sigma_sf_db = 8.0;    // shadow standard deviation (dB)
    double d_decorr_m = 100.0;   // shadow decorrelation distance (m)
    std::uint64_t rng_seed = 1;

    // Throws std::invalid_argument with the offending field on violation.
    void validate() const;

    double wavelength_m() const { return kSpeedOfLight / f_c_hz; }
    double guided_wavelength_m() const { return wavelength_m() / eta_eff; }
    double p_t_mw() const;
    double n0_mw() const;
    // Normalized transmit power per activated antenna, rho = P_t / (N_wg N_a).
    double rho_mw() const;
};

/// Derived coordinates: feed points, candidate PA grid and the receiver ULA.
struct DeploymentGeometry {
    std::vector<Vec3> feed_points;                       // n_wg entries
    std::vector<std::vector<Vec3>> candidate_pa_positions; // n_wg x n_t
    std::vector<Vec3> rx_elements;                       // n_r entries
    double lambda_m = 0.0;
    double lambda_g_m = 0.0;
};

// Waveguides run parallel to the x-axis at height tx_height_m, equidistant in
// y across [0, D]; the candidate cluster on each waveguide is centered on the
// point nearest (in x) to the receiver with lambda/2 spacing; feed points sit
// at x = 0; the receiver ULA is centered on rx_position_m along x.
DeploymentGeometry build_geometry(const SystemConfig& cfg);

double distance(const Vec3& a, const Vec3& b);

// Loads a JSON config whose keys mirror SystemConfig fields one-to-one.
// Unknown keys are an error.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& json_text);

} // namespace paim

#endif
