// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "paim/precoder.hpp"
#include "paim/rng.hpp"

namespace paim {

namespace {

constexpr std::uint64_t kSaltLargeScale = 0x4c53;
constexpr std::uint64_t kSaltSmallScale = 0x534d;
constexpr std::uint64_t kSaltBits = 0x4254;
constexpr std::uint64_t kSaltNoise = 0x4e4f;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct TrialAccum {
    long long errors_a = 0;
    long long errors_b = 0;
    SearchCounters counters_a;
    SearchCounters counters_b;
    long long detections = 0;
    long long stalled = 0;

    TrialAccum& operator+=(const TrialAccum& o) {
        errors_a += o.errors_a;
        errors_b += o.errors_b;
        counters_a += o.counters_a;
        counters_b += o.counters_b;
        detections += o.detections;
        stalled += o.stalled;
        return *this;
    }
};

// Runs trials [begin, end) across workers. make_worker() produces one
// callable per thread so workers can keep private caches; per-trial results
// land in commutative integer accumulators, so totals do not depend on the
// split.
template <typename MakeWorker>
TrialAccum parallel_trials(long begin, long end, int workers,
                           MakeWorker&& make_worker) {
    const long n = end - begin;
    if (n <= 0) return {};
    if (workers <= 1 || n == 1) {
        TrialAccum acc;
        auto fn = make_worker();
        for (long t = begin; t < end; ++t) fn(t, acc);
        return acc;
    }
    const int used = static_cast<int>(std::min<long>(workers, n));
    std::vector<TrialAccum> parts(used);
    std::vector<std::thread> threads;
    threads.reserve(used);
    const long chunk = (n + used - 1) / used;
    for (int w = 0; w < used; ++w) {
        const long lo = begin + w * chunk;
        const long hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&make_worker, &parts, w, lo, hi] {
            auto fn = make_worker();
            for (long t = lo; t < hi; ++t) fn(t, parts[w]);
        });
    }
    for (auto& th : threads) th.join();
    TrialAccum total;
    for (const auto& p : parts) total += p;
    return total;
}

// Bits and noise are drawn per trial; the fading realization is keyed by its
// coherence-block indices. Streams never involve the SNR point or the worker
// split, so the same randomness is shared across sweep points and experiment
// arms (common random numbers).
struct TrialDraw {
    BitVec bits;
    VectorXcd noise_unit; // CN(0, 1) per element, scale by sqrt(N0) at use
};

TrialDraw draw_trial(const SystemConfig& cfg, int eta, std::uint64_t seed,
                     long trial) {
    TrialDraw d;
    auto rng_b = make_rng(seed, kSaltBits, static_cast<std::uint64_t>(trial));
    d.bits.resize(eta);
    for (int i = 0; i < eta; ++i)
        d.bits[i] = static_cast<std::uint8_t>(rng_b() & 1u);

    auto rng_n = make_rng(seed, kSaltNoise, static_cast<std::uint64_t>(trial));
    d.noise_unit.resize(cfg.n_r);
    for (int i = 0; i < cfg.n_r; ++i) d.noise_unit(i) = crandn(rng_n);
    return d;
}

MatrixXcd draw_block_channel(const DeploymentGeometry& geom,
                             const LargeScaleMap& map, std::uint64_t seed,
                             long ss_block) {
    auto rng = make_rng(seed, kSaltSmallScale, static_cast<std::uint64_t>(ss_block));
    return realize_channel(geom, map, rng).h;
}

// Per-worker fading cache: consecutive trials of one coherence block reuse
// the realization (and whatever the caller derives from it).
struct BlockChannelCache {
    long ls_block = -1;
    long ss_block = -1;
    MatrixXcd h;

    const MatrixXcd& get(const DeploymentGeometry& geom,
                         const std::vector<LargeScaleMap>& maps,
                         std::uint64_t seed, long ls, long ss) {
        if (ls != ls_block || ss != ss_block) {
            h = draw_block_channel(geom, maps[ls], seed, ss);
            ls_block = ls;
            ss_block = ss;
        }
        return h;
    }
};

VectorXcd to_vector(const std::vector<cplx>& v) {
    VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = v[i];
    return out;
}

DetectionResult detect(const Detector& det, DetectorKind kind,
                       const VectorXcd& y, const MatrixXcd& h, double rho) {
    return kind == DetectorKind::Ml ? det.ml_detect(y, h, rho)
                                    : det.bo_sd_detect(y, h, rho);
}

double implied_snr_db(const SystemConfig& cfg, double p_t_dbm) {
    return p_t_dbm - 10.0 * std::log10(static_cast<double>(cfg.n_wg) * cfg.n_a) -
           cfg.n0_dbm;
}

std::vector<LargeScaleMap> precompute_maps(const ExperimentPlan& plan,
                                           const DeploymentGeometry& geom) {
    const long redraw = plan.large_scale_redraw;
    const long blocks =
        redraw <= 0 ? 1 : (plan.trials_per_point + redraw - 1) / redraw;
    std::vector<LargeScaleMap> maps;
    maps.reserve(blocks);
    for (long b = 0; b < blocks; ++b) {
        auto rng = make_rng(plan.seed, kSaltLargeScale, static_cast<std::uint64_t>(b));
        maps.push_back(draw_large_scale(geom, plan.cfg, rng));
    }
    return maps;
}

} // namespace

void ExperimentPlan::validate() const {
    cfg.validate();
    if (snr_axis.empty())
        throw std::invalid_argument("ExperimentPlan: empty SNR axis");
    for (std::size_t i = 1; i < snr_axis.size(); ++i)
        if (!(snr_axis[i] > snr_axis[i - 1]))
            throw std::invalid_argument(
                "ExperimentPlan: SNR axis must be strictly increasing");
    if (trials_per_point < 1)
        throw std::invalid_argument("ExperimentPlan: trials_per_point must be >= 1");
    if (workers < 1)
        throw std::invalid_argument("ExperimentPlan: workers must be >= 1");
    if (batch < 1) throw std::invalid_argument("ExperimentPlan: batch must be >= 1");
}

std::vector<double> ExperimentPlan::p_t_axis_dbm() const {
    std::vector<double> out = snr_axis;
    if (axis_is_rho_db) {
        const double offset =
            cfg.n0_dbm + 10.0 * std::log10(static_cast<double>(cfg.n_wg) * cfg.n_a);
        for (double& v : out) v += offset;
    }
    return out;
}

LargeScaleMap plan_large_scale(const ExperimentPlan& plan, long block) {
    const DeploymentGeometry geom = build_geometry(plan.cfg);
    auto rng = make_rng(plan.seed, kSaltLargeScale, static_cast<std::uint64_t>(block));
    return draw_large_scale(geom, plan.cfg, rng);
}

std::vector<ResultRow> run_ber_sweep(const ExperimentPlan& plan) {
    plan.validate();
    const DeploymentGeometry geom = build_geometry(plan.cfg);
    const Detector detector(plan.cfg);
    const Modem& modem = detector.modem();
    const int eta = modem.spectral_efficiency();
    const double n0 = plan.cfg.n0_mw();
    const long redraw = plan.large_scale_redraw;

    const std::vector<LargeScaleMap> maps = precompute_maps(plan, geom);

    std::vector<TransmitFrame> signal_set;
    if (plan.precoding == PrecodingKind::Manifold || plan.with_bound)
        signal_set = modem.enumerate_signal_set();

    ChannelStatistics stats;
    if (plan.with_bound) stats = channel_statistics(geom, maps[0]);

    PrecoderOptions popts;
    popts.decrease_tol = plan.precoder_decrease_tol;

    std::vector<ResultRow> rows;
    const std::vector<double> axis = plan.p_t_axis_dbm();
    for (double p_t_dbm : axis) {
        const double rho = std::pow(10.0, p_t_dbm / 10.0) /
                           (static_cast<double>(plan.cfg.n_wg) * plan.cfg.n_a);
        const double sqrt_rho = std::sqrt(rho);
        const double sqrt_n0 = std::sqrt(n0);

        const auto t0 = std::chrono::steady_clock::now();
        TrialAccum total;
        long executed = 0;
        const long ssr = std::max<long>(1, plan.small_scale_redraw);
        const auto make_worker = [&] {
            return [&, cache = BlockChannelCache{}, h_eff = MatrixXcd{},
                    stalled_block = false](long t, TrialAccum& acc) mutable {
                const long ls = redraw <= 0 ? 0 : t / redraw;
                const long ss = t / ssr;
                const bool fresh = ls != cache.ls_block || ss != cache.ss_block;
                const MatrixXcd& h = cache.get(geom, maps, plan.seed, ls, ss);
                if (fresh) {
                    h_eff = h;
                    stalled_block = false;
                    if (plan.precoding == PrecodingKind::Manifold) {
                        const PrecodingVector pv = optimize_precoder(
                            h, modem, signal_set, rho, n0, popts);
                        stalled_block = pv.stalled;
                        for (int k = 0; k < plan.cfg.n_wg; ++k)
                            h_eff.middleCols(k * plan.cfg.n_t, plan.cfg.n_t) *=
                                pv.w(k);
                    }
                }
                if (stalled_block) ++acc.stalled;
                const TrialDraw d = draw_trial(plan.cfg, eta, plan.seed, t);
                const TransmitFrame frame = modem.build_transmit(d.bits);
                const VectorXcd y =
                    sqrt_rho * (h_eff * to_vector(frame.x)) + sqrt_n0 * d.noise_unit;
                const DetectionResult res =
                    detect(detector, plan.detector, y, h_eff, rho);
                acc.errors_a += hamming_distance(d.bits, res.bits);
                acc.counters_a += res.counters;
                ++acc.detections;
            };
        };
        for (long start = 0; start < plan.trials_per_point; start += plan.batch) {
            const long stop = std::min(plan.trials_per_point, start + plan.batch);
            total += parallel_trials(start, stop, plan.workers, make_worker);
            executed = stop;
            if (plan.min_errors > 0 && total.errors_a >= plan.min_errors) break;
        }
        const auto t1 = std::chrono::steady_clock::now();

        ResultRow row;
        row.p_t_dbm = p_t_dbm;
        row.snr_db = implied_snr_db(plan.cfg, p_t_dbm);
        row.bit_errors = total.errors_a;
        row.bits_sent = static_cast<long long>(executed) * eta;
        row.ber = row.bits_sent ? static_cast<double>(row.bit_errors) / row.bits_sent : 0.0;
        row.mean_metric_evals =
            static_cast<double>(total.counters_a.metric_evals) / total.detections;
        row.mean_qp_solves =
            static_cast<double>(total.counters_a.qp_solves) / total.detections;
        row.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
        if (plan.with_bound) {
            row.bound_value =
                union_bound(modem, stats, signal_set, rho, n0,
                            PepVariant::ClosedForm).value;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ComplexityRow> run_complexity_sweep(const ExperimentPlan& plan,
                                                const std::vector<int>& m_list) {
    plan.validate();
    if (m_list.empty())
        throw std::invalid_argument("run_complexity_sweep: empty modulation list");

    std::vector<ComplexityRow> rows;
    for (int m : m_list) {
        ExperimentPlan p = plan;
        p.cfg.mod_order = m;
        p.cfg.validate();
        const DeploymentGeometry geom = build_geometry(p.cfg);
        const Detector detector(p.cfg);
        const Modem& modem = detector.modem();
        const int eta = modem.spectral_efficiency();
        const double p_t_dbm = p.p_t_axis_dbm().front();
        const double rho = std::pow(10.0, p_t_dbm / 10.0) /
                           (static_cast<double>(p.cfg.n_wg) * p.cfg.n_a);
        const double n0 = p.cfg.n0_mw();
        const std::vector<LargeScaleMap> maps = precompute_maps(p, geom);
        const long redraw = p.large_scale_redraw;

        const long ssr = std::max<long>(1, p.small_scale_redraw);
        const TrialAccum total = parallel_trials(
            0, p.trials_per_point, p.workers, [&] {
                return [&, cache = BlockChannelCache{}](long t,
                                                        TrialAccum& acc) mutable {
                    const long ls = redraw <= 0 ? 0 : t / redraw;
                    const MatrixXcd& h =
                        cache.get(geom, maps, p.seed, ls, t / ssr);
                    const TrialDraw d = draw_trial(p.cfg, eta, p.seed, t);
                    const TransmitFrame frame = modem.build_transmit(d.bits);
                    const VectorXcd y = std::sqrt(rho) * (h * to_vector(frame.x)) +
                                        std::sqrt(n0) * d.noise_unit;
                    acc.counters_a += detector.ml_detect(y, h, rho).counters;
                    acc.counters_b += detector.bo_sd_detect(y, h, rho).counters;
                    ++acc.detections;
                };
            });

        ComplexityRow row;
        row.mod_order = m;
        row.ml_metric_evals =
            static_cast<double>(total.counters_a.metric_evals) / total.detections;
        row.ml_qp_solves =
            static_cast<double>(total.counters_a.qp_solves) / total.detections;
        row.bosd_metric_evals =
            static_cast<double>(total.counters_b.metric_evals) / total.detections;
        row.bosd_qp_solves =
            static_cast<double>(total.counters_b.qp_solves) / total.detections;
        row.reduction = 1.0 - row.bosd_metric_evals / row.ml_metric_evals;
        rows.push_back(row);
    }
    return rows;
}

PrecoderAbResult run_precoder_ab(const ExperimentPlan& plan) {
    plan.validate();
    const DeploymentGeometry geom = build_geometry(plan.cfg);
    const Detector detector(plan.cfg);
    const Modem& modem = detector.modem();
    const int eta = modem.spectral_efficiency();
    const double n0 = plan.cfg.n0_mw();
    const long redraw = plan.large_scale_redraw;
    const std::vector<LargeScaleMap> maps = precompute_maps(plan, geom);
    const std::vector<TransmitFrame> signal_set = modem.enumerate_signal_set();

    PrecoderOptions popts;
    popts.decrease_tol = plan.precoder_decrease_tol;

    PrecoderAbResult ab;
    const std::vector<double> axis = plan.p_t_axis_dbm();
    for (double p_t_dbm : axis) {
        const double rho = std::pow(10.0, p_t_dbm / 10.0) /
                           (static_cast<double>(plan.cfg.n_wg) * plan.cfg.n_a);
        const double sqrt_rho = std::sqrt(rho);
        const double sqrt_n0 = std::sqrt(n0);

        const auto t0 = std::chrono::steady_clock::now();
        TrialAccum total;
        long executed = 0;
        const long ssr = std::max<long>(1, plan.small_scale_redraw);
        const auto make_worker = [&] {
            return [&, cache = BlockChannelCache{}, h_eff = MatrixXcd{},
                    stalled_block = false](long t, TrialAccum& acc) mutable {
                const long ls = redraw <= 0 ? 0 : t / redraw;
                const long ss = t / ssr;
                const bool fresh = ls != cache.ls_block || ss != cache.ss_block;
                const MatrixXcd& h = cache.get(geom, maps, plan.seed, ls, ss);
                if (fresh) {
                    // Arm B weights hold for the whole coherence block.
                    const PrecodingVector pv = optimize_precoder(
                        h, modem, signal_set, rho, n0, popts);
                    stalled_block = pv.stalled;
                    h_eff = h;
                    for (int k = 0; k < plan.cfg.n_wg; ++k)
                        h_eff.middleCols(k * plan.cfg.n_t, plan.cfg.n_t) *= pv.w(k);
                }
                if (stalled_block) ++acc.stalled;
                const TrialDraw d = draw_trial(plan.cfg, eta, plan.seed, t);
                const TransmitFrame frame = modem.build_transmit(d.bits);
                const VectorXcd x = to_vector(frame.x);
                const VectorXcd noise = sqrt_n0 * d.noise_unit;

                // Arm A: unit weights.
                {
                    const VectorXcd y = sqrt_rho * (h * x) + noise;
                    const DetectionResult res =
                        detect(detector, plan.detector, y, h, rho);
                    acc.errors_a += hamming_distance(d.bits, res.bits);
                    acc.counters_a += res.counters;
                }
                // Arm B: manifold-optimized weights, same bits and noise.
                {
                    const VectorXcd y = sqrt_rho * (h_eff * x) + noise;
                    const DetectionResult res =
                        detect(detector, plan.detector, y, h_eff, rho);
                    acc.errors_b += hamming_distance(d.bits, res.bits);
                    acc.counters_b += res.counters;
                }
                ++acc.detections;
            };
        };
        for (long start = 0; start < plan.trials_per_point; start += plan.batch) {
            const long stop = std::min(plan.trials_per_point, start + plan.batch);
            total += parallel_trials(start, stop, plan.workers, make_worker);
            executed = stop;
            if (plan.min_errors > 0 &&
                std::min(total.errors_a, total.errors_b) >= plan.min_errors)
                break;
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double wall = std::chrono::duration<double>(t1 - t0).count();

        const long long bits_sent = static_cast<long long>(executed) * eta;
        ResultRow a, b;
        a.p_t_dbm = b.p_t_dbm = p_t_dbm;
        a.snr_db = b.snr_db = implied_snr_db(plan.cfg, p_t_dbm);
        a.bit_errors = total.errors_a;
        b.bit_errors = total.errors_b;
        a.bits_sent = b.bits_sent = bits_sent;
        a.ber = bits_sent ? static_cast<double>(a.bit_errors) / bits_sent : 0.0;
        b.ber = bits_sent ? static_cast<double>(b.bit_errors) / bits_sent : 0.0;
        a.mean_metric_evals =
            static_cast<double>(total.counters_a.metric_evals) / total.detections;
        b.mean_metric_evals =
            static_cast<double>(total.counters_b.metric_evals) / total.detections;
        a.mean_qp_solves =
            static_cast<double>(total.counters_a.qp_solves) / total.detections;
        b.mean_qp_solves =
            static_cast<double>(total.counters_b.qp_solves) / total.detections;
        a.wall_time_s = b.wall_time_s = wall;
        ab.baseline.push_back(std::move(a));
        ab.precoded.push_back(std::move(b));
        ab.stalled_trials += total.stalled;
    }

    const auto snr_a = snr_at_ber(ab.baseline, ab.target_ber);
    const auto snr_b = snr_at_ber(ab.precoded, ab.target_ber);
    if (snr_a && snr_b) {
        ab.gain_defined = true;
        ab.gain_db = *snr_a - *snr_b;
    }
    return ab;
}

std::vector<NaSweepRow> run_na_sweep(const ExperimentPlan& plan,
                                     const std::vector<int>& na_list) {
    plan.validate();
    if (na_list.empty())
        throw std::invalid_argument("run_na_sweep: empty N_a list");
    std::vector<NaSweepRow> rows;
    for (int na : na_list) {
        if (na < 1 || na > plan.cfg.n_t)
            throw std::invalid_argument("run_na_sweep: N_a out of range");
        ExperimentPlan p = plan;
        p.cfg.n_a = na;
        const int eta = spectral_efficiency(p.cfg);
        for (auto& row : run_ber_sweep(p))
            rows.push_back({na, eta, std::move(row)});
    }
    return rows;
}

std::vector<BoundRow> run_bound(const ExperimentPlan& plan, PepVariant variant) {
    plan.validate();
    const DeploymentGeometry geom = build_geometry(plan.cfg);
    const Modem modem(plan.cfg);
    const std::vector<TransmitFrame> signal_set = modem.enumerate_signal_set();
    const LargeScaleMap map = plan_large_scale(plan, 0);
    const ChannelStatistics stats = channel_statistics(geom, map);
    const double n0 = plan.cfg.n0_mw();

    std::vector<BoundRow> rows;
    for (double p_t_dbm : plan.p_t_axis_dbm()) {
        const double rho = std::pow(10.0, p_t_dbm / 10.0) /
                           (static_cast<double>(plan.cfg.n_wg) * plan.cfg.n_a);
        const BerBound bound =
            union_bound(modem, stats, signal_set, rho, n0, variant);
        rows.push_back({p_t_dbm, implied_snr_db(plan.cfg, p_t_dbm), bound.value,
                        bound.value_clamped, variant});
    }
    return rows;
}

std::optional<double> snr_at_ber(const std::vector<ResultRow>& rows,
                                 double target) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double b0 = rows[i - 1].ber;
        double b1 = rows[i].ber;
        if (!(b0 > target) || !(b1 <= target)) continue;
        // Floor zero BERs to half an error for the interpolation.
        if (b1 <= 0.0)
            b1 = 0.5 / std::max<long long>(rows[i].bits_sent, 1);
        const double l0 = std::log10(b0);
        const double l1 = std::log10(b1);
        const double lt = std::log10(target);
        const double x0 = rows[i - 1].p_t_dbm;
        const double x1 = rows[i].p_t_dbm;
        return x0 + (x1 - x0) * (lt - l0) / (l1 - l0);
    }
    return std::nullopt;
}

// --------------------------------------------------------------------------
// Output

namespace {

void ber_row_csv(std::ostream& os, const ResultRow& r, bool emit_timings) {
    os << fmt(r.p_t_dbm) << "," << fmt(r.snr_db) << "," << r.bit_errors << ","
       << r.bits_sent << "," << fmt(r.ber) << "," << fmt(r.mean_metric_evals)
       << "," << fmt(r.mean_qp_solves) << ","
       << fmt(emit_timings ? r.wall_time_s : 0.0) << ",";
    if (r.bound_value) os << fmt(*r.bound_value);
    os << "\n";
}

nlohmann::json ber_row_json(const ResultRow& r, bool emit_timings) {
    nlohmann::json j{{"p_t_dbm", r.p_t_dbm},
                     {"snr_db", r.snr_db},
                     {"bit_errors", r.bit_errors},
                     {"bits_sent", r.bits_sent},
                     {"ber", r.ber},
                     {"mean_metric_evals", r.mean_metric_evals},
                     {"mean_qp_solves", r.mean_qp_solves},
                     {"wall_time_s", emit_timings ? r.wall_time_s : 0.0}};
    if (r.bound_value) j["bound_value"] = *r.bound_value;
    return j;
}

constexpr const char* kBerHeader =
    "p_t_dbm,snr_db,bit_errors,bits_sent,ber,mean_metric_evals,"
    "mean_qp_solves,wall_time_s,bound_value";

} // namespace

void write_ber_rows(std::ostream& os, const std::vector<ResultRow>& rows,
                    OutputFormat format, bool emit_timings) {
    if (format == OutputFormat::Csv) {
        os << kBerHeader << "\n";
        for (const auto& r : rows) ber_row_csv(os, r, emit_timings);
        return;
    }
    nlohmann::json j;
    j["schema"] = "pinchsim.ber.v1";
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) j["rows"].push_back(ber_row_json(r, emit_timings));
    os << j.dump(2) << "\n";
}

void write_complexity_rows(std::ostream& os,
                           const std::vector<ComplexityRow>& rows,
                           OutputFormat format) {
    if (format == OutputFormat::Csv) {
        os << "mod_order,ml_metric_evals,ml_qp_solves,bosd_metric_evals,"
              "bosd_qp_solves,reduction\n";
        for (const auto& r : rows)
            os << r.mod_order << "," << fmt(r.ml_metric_evals) << ","
               << fmt(r.ml_qp_solves) << "," << fmt(r.bosd_metric_evals) << ","
               << fmt(r.bosd_qp_solves) << "," << fmt(r.reduction) << "\n";
        return;
    }
    nlohmann::json j;
    j["schema"] = "pinchsim.complexity.v1";
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"mod_order", r.mod_order},
                             {"ml_metric_evals", r.ml_metric_evals},
                             {"ml_qp_solves", r.ml_qp_solves},
                             {"bosd_metric_evals", r.bosd_metric_evals},
                             {"bosd_qp_solves", r.bosd_qp_solves},
                             {"reduction", r.reduction}});
    os << j.dump(2) << "\n";
}

void write_bound_rows(std::ostream& os, const std::vector<BoundRow>& rows,
                      OutputFormat format) {
    if (format == OutputFormat::Csv) {
        os << "p_t_dbm,snr_db,bound,bound_clamped,variant\n";
        for (const auto& r : rows)
            os << fmt(r.p_t_dbm) << "," << fmt(r.snr_db) << "," << fmt(r.bound)
               << "," << fmt(r.bound_clamped) << "," << pep_variant_name(r.variant)
               << "\n";
        return;
    }
    nlohmann::json j;
    j["schema"] = "pinchsim.bound.v1";
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"p_t_dbm", r.p_t_dbm},
                             {"snr_db", r.snr_db},
                             {"bound", r.bound},
                             {"bound_clamped", r.bound_clamped},
                             {"variant", pep_variant_name(r.variant)}});
    os << j.dump(2) << "\n";
}

void write_na_rows(std::ostream& os, const std::vector<NaSweepRow>& rows,
                   OutputFormat format, bool emit_timings) {
    if (format == OutputFormat::Csv) {
        os << "n_a,eta," << kBerHeader << "\n";
        for (const auto& r : rows) {
            os << r.n_a << "," << r.eta << ",";
            ber_row_csv(os, r.row, emit_timings);
        }
        return;
    }
    nlohmann::json j;
    j["schema"] = "pinchsim.na_sweep.v1";
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row = ber_row_json(r.row, emit_timings);
        row["n_a"] = r.n_a;
        row["eta"] = r.eta;
        j["rows"].push_back(row);
    }
    os << j.dump(2) << "\n";
}

void write_ab_result(std::ostream& os, const PrecoderAbResult& ab,
                     OutputFormat format, bool emit_timings) {
    if (format == OutputFormat::Csv) {
        os << "precoding," << kBerHeader << "\n";
        for (const auto& r : ab.baseline) {
            os << "none,";
            ber_row_csv(os, r, emit_timings);
        }
        for (const auto& r : ab.precoded) {
            os << "manifold,";
            ber_row_csv(os, r, emit_timings);
        }
        return;
    }
    nlohmann::json j;
    j["schema"] = "pinchsim.precoder_ab.v1";
    j["target_ber"] = ab.target_ber;
    j["gain_defined"] = ab.gain_defined;
    j["gain_db"] = ab.gain_db;
    j["stalled_trials"] = ab.stalled_trials;
    j["baseline"] = nlohmann::json::array();
    j["precoded"] = nlohmann::json::array();
    for (const auto& r : ab.baseline)
        j["baseline"].push_back(ber_row_json(r, emit_timings));
    for (const auto& r : ab.precoded)
        j["precoded"].push_back(ber_row_json(r, emit_timings));
    os << j.dump(2) << "\n";
}

const char* detector_name(DetectorKind k) {
    return k == DetectorKind::Ml ? "ml" : "bosd";
}

const char* precoding_name(PrecodingKind k) {
    return k == PrecodingKind::None ? "none" : "manifold";
}

} // namespace paim
