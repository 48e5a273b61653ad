// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_HARNESS_HPP
#define PAIM_HARNESS_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "paim/analysis.hpp"
#include "paim/channel.hpp"
#include "paim/config.hpp"
#include "paim/detector.hpp"

namespace paim {

enum class DetectorKind { Ml, BoSd };
enum class PrecodingKind { None, Manifold };

/// One Monte Carlo experiment: scenario, SNR axis, stopping rules, seeding.
struct ExperimentPlan {
    SystemConfig cfg;
    // Transmit-power sweep (dBm) by default; when axis_is_rho_db is set the
    // values are interpreted as rho/N0 in dB and converted internally.
    std::vector<double> snr_axis;
    bool axis_is_rho_db = false;
    long trials_per_point = 10000;
    long min_errors = 0;  // early-stop threshold; 0 disables
    DetectorKind detector = DetectorKind::BoSd;
    PrecodingKind precoding = PrecodingKind::None;
    std::uint64_t seed = 1;
    int workers = 1;
    // Trials per large-scale coherence block; 0 freezes a single draw.
    long large_scale_redraw = 100;
    // Trials per small-scale (fading) coherence block; 1 redraws every trial.
    long small_scale_redraw = 1;
    long batch = 1024;  // early-stop checks happen at batch boundaries
    bool emit_timings = false;
    bool with_bound = false;  // attach the closed-form union bound per point
    double precoder_decrease_tol = 1e-8;

    void validate() const;
    std::vector<double> p_t_axis_dbm() const;
};

struct ResultRow {
    double p_t_dbm = 0.0;
    double snr_db = 0.0;  // implied per-antenna rho/N0 in dB
    long long bit_errors = 0;
    long long bits_sent = 0;
    double ber = 0.0;
    double mean_metric_evals = 0.0;
    double mean_qp_solves = 0.0;
    double wall_time_s = 0.0;
    std::optional<double> bound_value;
};

std::vector<ResultRow> run_ber_sweep(const ExperimentPlan& plan);

struct ComplexityRow {
    int mod_order = 0;
    double ml_metric_evals = 0.0;
    double ml_qp_solves = 0.0;
    double bosd_metric_evals = 0.0;
    double bosd_qp_solves = 0.0;
    double reduction = 0.0;  // 1 - bosd/ml metric evaluations
};

// Mean per-detection counters for both detectors at each modulation order;
// single SNR point taken from the front of the axis.
std::vector<ComplexityRow> run_complexity_sweep(const ExperimentPlan& plan,
                                                const std::vector<int>& m_list);

struct PrecoderAbResult {
    std::vector<ResultRow> baseline;
    std::vector<ResultRow> precoded;
    double target_ber = 1e-3;
    double gain_db = 0.0;      // positive when precoding reaches target earlier
    bool gain_defined = false; // both arms crossed the target
    long long stalled_trials = 0;
};

// Common-random-number A/B of manifold precoding against unit weights.
PrecoderAbResult run_precoder_ab(const ExperimentPlan& plan);

struct NaSweepRow {
    int n_a = 0;
    int eta = 0;
    ResultRow row;
};

std::vector<NaSweepRow> run_na_sweep(const ExperimentPlan& plan,
                                     const std::vector<int>& na_list);

struct BoundRow {
    double p_t_dbm = 0.0;
    double snr_db = 0.0;
    double bound = 0.0;
    double bound_clamped = 0.0;
    PepVariant variant = PepVariant::ClosedForm;
};

// Union bound per SNR point, conditioned on the block-0 large-scale map.
std::vector<BoundRow> run_bound(const ExperimentPlan& plan, PepVariant variant);

// Large-scale map for a given coherence block of a plan (the same map the
// sweeps use), exposed so bound and simulation can be conditioned alike.
LargeScaleMap plan_large_scale(const ExperimentPlan& plan, long block);

// Log-linear interpolation of the dB point where a BER curve crosses target.
std::optional<double> snr_at_ber(const std::vector<ResultRow>& rows,
                                 double target);

enum class OutputFormat { Csv, Json };

void write_ber_rows(std::ostream& os, const std::vector<ResultRow>& rows,
                    OutputFormat format, bool emit_timings);
void write_complexity_rows(std::ostream& os, const std::vector<ComplexityRow>& rows,
                           OutputFormat format);
void write_bound_rows(std::ostream& os, const std::vector<BoundRow>& rows,
                      OutputFormat format);
void write_na_rows(std::ostream& os, const std::vector<NaSweepRow>& rows,
                   OutputFormat format, bool emit_timings);
void write_ab_result(std::ostream& os, const PrecoderAbResult& ab,
                     OutputFormat format, bool emit_timings);

const char* detector_name(DetectorKind k);
const char* precoding_name(PrecodingKind k);

} // namespace paim

#endif
