// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "paim/detector.hpp"
#include "paim/rng.hpp"
#include "support/synthetic.hpp"

using namespace paim;
using paim::testing::frame_vector;
using paim::testing::iid_channel;
using paim::testing::observe;
using paim::testing::oracle_ml_bits;

namespace {

SystemConfig make_cfg(int n_t, int n_wg, int n_a, int m, int n_r) {
    SystemConfig cfg;
    cfg.n_t = n_t;
    cfg.n_wg = n_wg;
    cfg.n_a = n_a;
    cfg.mod_order = m;
    cfg.n_r = n_r;
    return cfg;
}

} // namespace

TEST_CASE("noiseless input is decoded exactly") {
    const SystemConfig cfg = make_cfg(4, 2, 1, 4, 4);
    Detector det(cfg);
    const Modem& modem = det.modem();
    auto rng = make_rng(31, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
        const BitVec bits =
            paim::testing::random_bits(modem.spectral_efficiency(), rng);
        const auto frame = modem.build_transmit(bits);
        const double rho = 2.7;
        const VectorXcd y = std::sqrt(rho) * (h * frame_vector(frame));
        CHECK(det.ml_detect(y, h, rho).bits == bits);
        CHECK(det.bo_sd_detect(y, h, rho).bits == bits);
    }
}

TEST_CASE("zero channel returns the lexicographically first bits") {
    const SystemConfig cfg = make_cfg(4, 2, 1, 4, 2);
    Detector det(cfg);
    const int eta = det.modem().spectral_efficiency();
    const MatrixXcd h = MatrixXcd::Zero(cfg.n_r, cfg.n_t * cfg.n_wg);
    auto rng = make_rng(32, 0);
    VectorXcd y(cfg.n_r);
    for (int i = 0; i < cfg.n_r; ++i) y(i) = crandn(rng);
    const BitVec zeros(eta, 0);
    CHECK(det.ml_detect(y, h, 1.0).bits == zeros);
    CHECK(det.bo_sd_detect(y, h, 1.0).bits == zeros);
}

TEST_CASE("ML matches the independent exhaustive oracle") {
    const SystemConfig cfg = make_cfg(4, 2, 1, 4, 2);
    Detector det(cfg);
    const Modem& modem = det.modem();
    const auto signal_set = modem.enumerate_signal_set();
    auto rng = make_rng(33, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
        const auto obs = observe(modem, h, 8.0, rng);
        const auto res = det.ml_detect(obs.y, h, obs.rho);
        CHECK(res.bits == oracle_ml_bits(signal_set, h, obs.y, obs.rho));
    }
}

TEST_CASE("ML counts exactly |I| M^n_wg metric evaluations") {
    const SystemConfig cfg = make_cfg(4, 2, 1, 8, 2);
    Detector det(cfg);
    auto rng = make_rng(34, 0);
    const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
    const auto obs = observe(det.modem(), h, 10.0, rng);
    const auto res = det.ml_detect(obs.y, h, obs.rho);
    CHECK(res.counters.metric_evals == det.pattern_count() * 8 * 8);
    CHECK(res.counters.qp_solves == 0);
    const auto effort = search_effort(res, det.pattern_count());
    CHECK(effort.metric_evals_per_pattern == doctest::Approx(64.0));
}

TEST_CASE("ML effort for eight patterns at 64-QAM is exactly 512") {
    const SystemConfig cfg = make_cfg(8, 1, 1, 64, 2);
    Detector det(cfg);
    REQUIRE(det.pattern_count() == 8);
    auto rng = make_rng(40, 0);
    const auto h = iid_channel(cfg.n_r, cfg.n_t, rng);
    const auto obs = observe(det.modem(), h, 10.0, rng);
    CHECK(det.ml_detect(obs.y, h, obs.rho).counters.metric_evals == 512);
}

TEST_CASE("equivalent channel factorization invariants") {
    const SystemConfig cfg = make_cfg(4, 2, 2, 4, 4);
    Detector det(cfg);
    auto rng = make_rng(35, 0);
    const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
    VectorXcd y(cfg.n_r);
    for (int i = 0; i < cfg.n_r; ++i) y(i) = crandn(rng);

    const std::vector<std::uint32_t> ranks{1, 2};
    const EquivalentChannel eq = det.reduce_pattern(h, ranks, y);

    CHECK((eq.q.adjoint() * eq.q - MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((eq.q * eq.r - eq.h_eq).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i < 2; ++i) {
        CHECK(eq.r(i, i).imag() == 0.0);
        CHECK(eq.r(i, i).real() >= 0.0);
        for (int j = 0; j < i; ++j) CHECK(std::abs(eq.r(i, j)) == 0.0);
    }
    // QR isometry: ||z - R s||^2 + offset = ||y - H_eq s||^2 for all s.
    const double offset = y.squaredNorm() - eq.z.squaredNorm();
    for (int trial = 0; trial < 20; ++trial) {
        VectorXcd s(2);
        s << crandn(rng), crandn(rng);
        const double lhs = (eq.z - eq.r * s).squaredNorm() + offset;
        const double rhs = (y - eq.h_eq * s).squaredNorm();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    // H_eq columns are sums of the activated columns: rank 1 of the size-2
    // subsets of {0..3} is {0,2}, rank 2 is {0,3}.
    CHECK((eq.h_eq.col(0) - (h.col(0) + h.col(2))).cwiseAbs().maxCoeff() == 0.0);
    CHECK((eq.h_eq.col(1) - (h.col(4 + 0) + h.col(4 + 3))).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("BO-SD equals ML over randomized sweeps") {
    auto rng = make_rng(36, 0);
    long long bosd_evals = 0, ml_evals = 0;
    for (int m : {2, 4, 16}) {
        for (int n_wg : {1, 2}) {
            const SystemConfig cfg = make_cfg(4, n_wg, 1, m, 4);
            Detector det(cfg);
            const Modem& modem = det.modem();
            for (double snr_db : {0.0, 10.0, 20.0}) {
                for (int trial = 0; trial < 120; ++trial) {
                    const auto h =
                        iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
                    const auto obs = observe(modem, h, snr_db, rng);
                    const auto ml = det.ml_detect(obs.y, h, obs.rho);
                    const auto sd = det.bo_sd_detect(obs.y, h, obs.rho);
                    REQUIRE(sd.bits == ml.bits);
                    bosd_evals += sd.counters.metric_evals;
                    ml_evals += ml.counters.metric_evals;
                }
            }
        }
    }
    CHECK(bosd_evals < ml_evals);
}

TEST_CASE("every pruning decision satisfies its inequality") {
    const SystemConfig cfg = make_cfg(4, 2, 1, 4, 4);
    Detector det(cfg);
    auto rng = make_rng(37, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
        const auto obs = observe(det.modem(), h, 12.0, rng);
        std::vector<PruneEvent> trace;
        det.bo_sd_detect(obs.y, h, obs.rho, &trace);
        CHECK(!trace.empty());
        for (const auto& ev : trace) {
            const bool holds = ev.t <= ev.d2 - ev.c1 - ev.c2;
            CHECK(ev.admitted == holds);
            CHECK(ev.c1 >= 0.0);
            CHECK(ev.c2 >= 0.0);
        }
    }
}

TEST_CASE("box relaxation lower-bounds every discrete completion") {
    // The per-pattern P1 objective never exceeds the best discrete metric.
    const SystemConfig cfg = make_cfg(4, 2, 1, 4, 4);
    Detector det(cfg);
    const Modem& modem = det.modem();
    auto rng = make_rng(38, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
        const auto obs = observe(modem, h, 6.0, rng);
        const VectorXcd y_norm = obs.y / std::sqrt(obs.rho);
        const std::vector<std::uint32_t> ranks{0, 3};
        const EquivalentChannel eq = det.reduce_pattern(h, ranks, y_norm);

        BoxQpProblem p1;
        p1.r_mat = eq.r;
        p1.target = eq.z;
        p1.lo_re = modem.constellation().min_re();
        p1.hi_re = modem.constellation().max_re();
        p1.lo_im = modem.constellation().min_im();
        p1.hi_im = modem.constellation().max_im();
        const double relaxed = solve_box_qp(p1).objective;

        const auto& points = modem.constellation().points();
        for (std::uint32_t a = 0; a < 4; ++a) {
            for (std::uint32_t b = 0; b < 4; ++b) {
                VectorXcd s(2);
                s << points[a], points[b];
                CHECK(relaxed <= (eq.z - eq.r * s).squaredNorm() + 1e-9);
            }
        }
    }
}

TEST_CASE("underdetermined receiver still matches ML") {
    const SystemConfig cfg = make_cfg(4, 2, 1, 4, 1); // n_r < n_wg
    Detector det(cfg);
    auto rng = make_rng(39, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = iid_channel(cfg.n_r, cfg.n_t * cfg.n_wg, rng);
        const auto obs = observe(det.modem(), h, 10.0, rng);
        CHECK(det.bo_sd_detect(obs.y, h, obs.rho).bits ==
              det.ml_detect(obs.y, h, obs.rho).bits);
    }
}

TEST_CASE("enumeration cap rejects oversized ML problems") {
    SystemConfig cfg = make_cfg(8, 2, 1, 64, 2); // eta = 18
    Detector det(cfg, 16);
    const MatrixXcd h = MatrixXcd::Zero(2, 16);
    const VectorXcd y = VectorXcd::Zero(2);
    CHECK_THROWS_AS(det.ml_detect(y, h, 1.0), std::invalid_argument);
}
