// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation
//
// Test-only helpers: synthetic i.i.d. channels with a well-defined SNR and an
// independent exhaustive detector kept deliberately separate from the library
// implementation.

#ifndef PAIM_TESTS_SYNTHETIC_HPP
#define PAIM_TESTS_SYNTHETIC_HPP

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "paim/modem.hpp"
#include "paim/rng.hpp"

namespace paim::testing {

inline Eigen::MatrixXcd iid_channel(int n_r, int cols, std::mt19937_64& rng) {
    Eigen::MatrixXcd h(n_r, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < n_r; ++i) h(i, j) = crandn(rng);
    return h;
}

inline BitVec random_bits(int count, std::mt19937_64& rng) {
    BitVec bits(count);
    for (int i = 0; i < count; ++i)
        bits[i] = static_cast<std::uint8_t>(rng() & 1u);
    return bits;
}

inline Eigen::VectorXcd frame_vector(const TransmitFrame& frame) {
    Eigen::VectorXcd x(static_cast<Eigen::Index>(frame.x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = frame.x[i];
    return x;
}

// Received vector for a synthetic run where snr_db = rho * n_a * n_wg / N0
// with N0 = 1 (per-receive-antenna SNR under unit-energy symbols).
struct SyntheticObservation {
    Eigen::VectorXcd y;
    double rho;
    BitVec bits;
};

inline SyntheticObservation observe(const Modem& modem, const Eigen::MatrixXcd& h,
                                    double snr_db, std::mt19937_64& rng) {
    SyntheticObservation obs;
    const double n_act = static_cast<double>(modem.n_a()) * modem.n_wg();
    obs.rho = std::pow(10.0, snr_db / 10.0) / n_act;
    obs.bits = random_bits(modem.spectral_efficiency(), rng);
    const TransmitFrame frame = modem.build_transmit(obs.bits);
    obs.y = std::sqrt(obs.rho) * (h * frame_vector(frame));
    for (Eigen::Index i = 0; i < obs.y.size(); ++i) obs.y(i) += crandn(rng);
    return obs;
}

// Independent exhaustive oracle: scans the enumerated signal set directly in
// lexicographic bit order and keeps the first strict minimizer, computing
// every metric from the raw y = sqrt(rho) H x form.
inline BitVec oracle_ml_bits(const std::vector<TransmitFrame>& signal_set,
                             const Eigen::MatrixXcd& h,
                             const Eigen::VectorXcd& y, double rho) {
    double best = std::numeric_limits<double>::infinity();
    const TransmitFrame* winner = nullptr;
    for (const auto& frame : signal_set) {
        const double metric =
            (y - std::sqrt(rho) * (h * frame_vector(frame))).squaredNorm();
        if (!winner || metric < best) {
            best = metric;
            winner = &frame;
        }
    }
    return winner->bits;
}

} // namespace paim::testing

#endif
