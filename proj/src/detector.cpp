// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace paim {

namespace {

// Canonical candidate metric. Both detectors and every tie comparison use
// this single routine so equal candidates produce bit-identical metrics.
double candidate_metric(const VectorXcd& y_norm, const MatrixXcd& h_eq,
                        const VectorXcd& s) {
    return (y_norm - h_eq * s).squaredNorm();
}

struct Best {
    bool valid = false;
    double metric = 0.0;
    BitVec bits;
    std::vector<std::uint32_t> ranks;
    std::vector<std::uint32_t> labels;

    // Strictly better metric wins; exact ties go to the lower bit string.
    void offer(double m, const Modem& modem,
               const std::vector<std::uint32_t>& rk,
               const std::vector<std::uint32_t>& lb) {
        if (valid && m > metric) return;
        ActivationPattern pat;
        pat.ranks.assign(rk.begin(), rk.end());
        BitVec b = modem.frame_to_bits(pat, lb);
        if (valid && m == metric && !(b < bits)) return;
        valid = true;
        metric = m;
        bits = std::move(b);
        ranks = rk;
        labels = lb;
    }
};

} // namespace

Detector::Detector(const SystemConfig& cfg, int enumeration_cap_bits)
    : modem_(cfg), cap_bits_(enumeration_cap_bits) {}

long long Detector::pattern_count() const {
    long long c = 1;
    for (int k = 0; k < modem_.n_wg(); ++k)
        c *= static_cast<long long>(modem_.pattern_count_per_wg());
    return c;
}

void Detector::pattern_ranks(long long index,
                             std::vector<std::uint32_t>& ranks) const {
    const long long per = modem_.pattern_count_per_wg();
    for (int k = modem_.n_wg() - 1; k >= 0; --k) {
        ranks[k] = static_cast<std::uint32_t>(index % per);
        index /= per;
    }
}

EquivalentChannel Detector::reduce_pattern(
    const MatrixXcd& h, const std::vector<std::uint32_t>& ranks,
    const VectorXcd& y_norm) const {
    const int n_wg = modem_.n_wg();
    const int n_t = modem_.n_t();

    EquivalentChannel eq;
    eq.h_eq.setZero(h.rows(), n_wg);
    for (int k = 0; k < n_wg; ++k)
        for (int idx : modem_.pattern_from_rank(ranks[k]))
            eq.h_eq.col(k) += h.col(k * n_t + idx);

    Eigen::HouseholderQR<MatrixXcd> qr(eq.h_eq);
    eq.q = qr.householderQ() * MatrixXcd::Identity(h.rows(), n_wg);
    eq.r = qr.matrixQR().topRows(n_wg).triangularView<Eigen::Upper>();

    // Rotate so the diagonal of R is real and non-negative.
    for (int k = 0; k < n_wg; ++k) {
        const cplx d = eq.r(k, k);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            const cplx phase = d / mag;
            eq.r.row(k) *= std::conj(phase);
            eq.q.col(k) *= phase;
            eq.r(k, k) = cplx(mag, 0.0);
        }
    }
    eq.z = eq.q.adjoint() * y_norm;
    return eq;
}

DetectionResult Detector::ml_detect(const VectorXcd& y, const MatrixXcd& h,
                                    double rho) const {
    if (modem_.spectral_efficiency() > cap_bits_)
        throw std::invalid_argument("ml_detect: eta exceeds enumeration cap");

    const int n_wg = modem_.n_wg();
    const int m = modem_.constellation().order();
    const auto& points = modem_.constellation().points();
    const VectorXcd y_norm = y / std::sqrt(rho);
    const long long patterns = pattern_count();

    Best best;
    SearchCounters counters;
    std::vector<std::uint32_t> ranks(n_wg), labels(n_wg);
    VectorXcd s(n_wg);

    for (long long p = 0; p < patterns; ++p) {
        pattern_ranks(p, ranks);
        MatrixXcd h_eq = MatrixXcd::Zero(h.rows(), n_wg);
        for (int k = 0; k < n_wg; ++k)
            for (int idx : modem_.pattern_from_rank(ranks[k]))
                h_eq.col(k) += h.col(k * modem_.n_t() + idx);

        long long combos = 1;
        for (int k = 0; k < n_wg; ++k) combos *= m;
        for (long long c = 0; c < combos; ++c) {
            long long v = c;
            for (int k = n_wg - 1; k >= 0; --k) {
                labels[k] = static_cast<std::uint32_t>(v % m);
                v /= m;
            }
            for (int k = 0; k < n_wg; ++k) s(k) = points[labels[k]];
            const double metric = candidate_metric(y_norm, h_eq, s);
            ++counters.metric_evals;
            best.offer(metric, modem_, ranks, labels);
        }
    }

    DetectionResult res;
    ActivationPattern pat;
    pat.ranks.assign(best.ranks.begin(), best.ranks.end());
    pat.index_sets.resize(n_wg);
    for (int k = 0; k < n_wg; ++k)
        pat.index_sets[k] = modem_.pattern_from_rank(best.ranks[k]);
    res.pattern = std::move(pat);
    res.symbols.resize(n_wg);
    for (int k = 0; k < n_wg; ++k) res.symbols[k] = points[best.labels[k]];
    res.bits = best.bits;
    res.metric = best.metric;
    res.counters = counters;
    return res;
}

DetectionResult Detector::bo_sd_detect(const VectorXcd& y, const MatrixXcd& h,
                                       double rho,
                                       std::vector<PruneEvent>* trace) const {
    const int n_wg = modem_.n_wg();
    const int n_r = static_cast<int>(h.rows());
    const int m = modem_.constellation().order();
    const auto& constellation = modem_.constellation();
    const auto& points = constellation.points();
    const VectorXcd y_norm = y / std::sqrt(rho);
    const long long patterns = pattern_count();

    Best best;
    SearchCounters counters;
    std::vector<std::uint32_t> ranks(n_wg);

    for (long long p = 0; p < patterns; ++p) {
        pattern_ranks(p, ranks);

        if (n_r < n_wg) {
            // Underdetermined pattern: the layered reduction needs a full
            // column-rank triangular factor, so fall back to the exhaustive
            // per-pattern scan. Still exact.
            MatrixXcd h_eq = MatrixXcd::Zero(n_r, n_wg);
            for (int k = 0; k < n_wg; ++k)
                for (int idx : modem_.pattern_from_rank(ranks[k]))
                    h_eq.col(k) += h.col(k * modem_.n_t() + idx);
            std::vector<std::uint32_t> labels(n_wg, 0);
            VectorXcd s(n_wg);
            long long combos = 1;
            for (int k = 0; k < n_wg; ++k) combos *= m;
            for (long long c = 0; c < combos; ++c) {
                long long v = c;
                for (int k = n_wg - 1; k >= 0; --k) {
                    labels[k] = static_cast<std::uint32_t>(v % m);
                    v /= m;
                }
                for (int k = 0; k < n_wg; ++k) s(k) = points[labels[k]];
                const double metric = candidate_metric(y_norm, h_eq, s);
                ++counters.metric_evals;
                best.offer(metric, modem_, ranks, labels);
            }
            continue;
        }

        const EquivalentChannel eq = reduce_pattern(h, ranks, y_norm);

        // (P1): continuous box relaxation of the whole layered problem.
        BoxQpProblem p1;
        p1.r_mat = eq.r;
        p1.target = eq.z;
        p1.lo_re = constellation.min_re();
        p1.hi_re = constellation.max_re();
        p1.lo_im = constellation.min_im();
        p1.hi_im = constellation.max_im();
        const BoxQpResult relax = solve_box_qp(p1);
        ++counters.qp_solves;

        // Initial radius from the per-axis quantization of the relaxed
        // solution; the quantized vector doubles as the pattern incumbent,
        // so the candidate set is never empty.
        std::vector<std::uint32_t> inc_labels(n_wg);
        VectorXcd s_inc(n_wg);
        for (int k = 0; k < n_wg; ++k) {
            inc_labels[k] = constellation.demap(relax.s(k));
            s_inc(k) = points[inc_labels[k]];
        }
        double d2 = (eq.z - eq.r * s_inc).squaredNorm();
        ++counters.metric_evals;
        best.offer(candidate_metric(y_norm, eq.h_eq, s_inc), modem_, ranks,
                   inc_labels);

        // Depth-first layered search, layer n_wg down to 1 (0-based ell).
        std::vector<std::uint32_t> labels(n_wg, 0);
        VectorXcd s_path(n_wg);

        auto descend = [&](auto&& self, int ell, double c2) -> void {
            ++counters.nodes_visited;

            // Lower bound on the undetermined layers: box relaxation over
            // symbols 0..ell of the rows above the current layer.
            double c1 = 0.0;
            if (ell >= 1) {
                BoxQpProblem p2;
                p2.r_mat = eq.r.topLeftCorner(ell, ell + 1);
                p2.target = eq.z.head(ell);
                if (ell + 1 < n_wg)
                    p2.target -= eq.r.block(0, ell + 1, ell, n_wg - ell - 1) *
                                 s_path.tail(n_wg - ell - 1);
                p2.lo_re = p1.lo_re;
                p2.hi_re = p1.hi_re;
                p2.lo_im = p1.lo_im;
                p2.hi_im = p1.hi_im;
                c1 = solve_box_qp(p2).objective;
                ++counters.qp_solves;
            }

            cplx row_fixed = eq.z(ell);
            for (int j = ell + 1; j < n_wg; ++j)
                row_fixed -= eq.r(ell, j) * s_path(j);

            for (int label = 0; label < m; ++label) {
                const cplx s = points[label];
                const double t = std::norm(row_fixed - eq.r(ell, ell) * s);
                const bool admitted = t <= d2 - c1 - c2;
                if (trace)
                    trace->push_back({ell + 1, t, c1, c2, d2, admitted});
                if (!admitted) continue;

                labels[ell] = static_cast<std::uint32_t>(label);
                s_path(ell) = s;
                if (ell == 0) {
                    const double leaf = c2 + t;
                    if (leaf < d2) d2 = leaf; // radius tightening
                    const double metric =
                        candidate_metric(y_norm, eq.h_eq, s_path);
                    ++counters.metric_evals;
                    best.offer(metric, modem_, ranks, labels);
                } else {
                    self(self, ell - 1, c2 + t);
                }
            }
        };
        descend(descend, n_wg - 1, 0.0);
    }

    DetectionResult res;
    ActivationPattern pat;
    pat.ranks.assign(best.ranks.begin(), best.ranks.end());
    pat.index_sets.resize(n_wg);
    for (int k = 0; k < n_wg; ++k)
        pat.index_sets[k] = modem_.pattern_from_rank(best.ranks[k]);
    res.pattern = std::move(pat);
    res.symbols.resize(n_wg);
    for (int k = 0; k < n_wg; ++k) res.symbols[k] = points[best.labels[k]];
    res.bits = best.bits;
    res.metric = best.metric;
    res.counters = counters;
    return res;
}

ComplexityRecord search_effort(const DetectionResult& result,
                               long long pattern_count) {
    ComplexityRecord rec;
    rec.patterns = pattern_count;
    const double p = static_cast<double>(pattern_count);
    rec.metric_evals_per_pattern = result.counters.metric_evals / p;
    rec.qp_solves_per_pattern = result.counters.qp_solves / p;
    rec.nodes_per_pattern = result.counters.nodes_visited / p;
    return rec;
}

} // namespace paim
