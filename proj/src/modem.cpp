// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/modem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paim {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::uint64_t bits_to_uint(const std::uint8_t* bits, int count) {
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | (bits[i] & 1u);
    return v;
}

void uint_to_bits(std::uint64_t value, std::uint8_t* bits, int count) {
    for (int i = count - 1; i >= 0; --i) {
        bits[i] = static_cast<std::uint8_t>(value & 1u);
        value >>= 1;
    }
}

int hamming_distance(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: size mismatch");
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

// --------------------------------------------------------------------------
// Constellation

namespace {

int ilog2(int v) {
    int b = 0;
    while ((1 << (b + 1)) <= v) ++b;
    return b;
}

// Ascending amplitudes {-(L-1), ..., -1, +1, ..., L-1}; label 0 sits at the
// most positive amplitude, Gray-coded so neighbors differ in one bit.
void build_axis(int bits, std::vector<double>& levels,
                std::vector<std::uint32_t>& level_labels) {
    const int l = 1 << bits;
    levels.resize(l);
    level_labels.resize(l);
    for (int i = 0; i < l; ++i) {
        levels[i] = static_cast<double>(2 * i - (l - 1));
        const std::uint32_t desc = static_cast<std::uint32_t>(l - 1 - i);
        level_labels[i] = desc ^ (desc >> 1);
    }
}

} // namespace

Constellation::Constellation(int order) : order_(order) {
    if (order < 2 || (order & (order - 1)) != 0)
        throw std::invalid_argument("Constellation: order must be a power of two >= 2");
    bits_ = ilog2(order);
    bits_i_ = (bits_ + 1) / 2;
    bits_q_ = bits_ / 2;

    build_axis(bits_i_, levels_i_, level_label_i_);
    build_axis(bits_q_, levels_q_, level_label_q_);
    if (bits_q_ == 0) {
        levels_q_ = {0.0};
        level_label_q_ = {0};
    }

    double energy = 0.0;
    for (double a : levels_i_) energy += a * a;
    energy /= levels_i_.size();
    double eq = 0.0;
    for (double a : levels_q_) eq += a * a;
    energy += eq / levels_q_.size();
    scale_ = 1.0 / std::sqrt(energy);

    points_.resize(order_);
    for (std::size_t i = 0; i < levels_i_.size(); ++i) {
        for (std::size_t q = 0; q < levels_q_.size(); ++q) {
            const std::uint32_t label =
                (level_label_i_[i] << bits_q_) | level_label_q_[q];
            points_[label] = cplx(levels_i_[i] * scale_, levels_q_[q] * scale_);
        }
    }

    min_re_ = levels_i_.front() * scale_;
    max_re_ = levels_i_.back() * scale_;
    min_im_ = levels_q_.front() * scale_;
    max_im_ = levels_q_.back() * scale_;
}

cplx Constellation::map_bits(const std::uint8_t* bits) const {
    return points_[static_cast<std::uint32_t>(bits_to_uint(bits, bits_))];
}

std::uint32_t Constellation::quantize_axis(
    double v, const std::vector<double>& levels,
    const std::vector<std::uint32_t>& labels) const {
    std::size_t best = 0;
    double best_d = std::abs(v - levels[0] * scale_);
    std::uint32_t best_label = labels[0];
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double d = std::abs(v - levels[i] * scale_);
        if (d < best_d || (d == best_d && labels[i] < best_label)) {
            best = i;
            best_d = d;
            best_label = labels[i];
        }
    }
    return static_cast<std::uint32_t>(best);
}

std::uint32_t Constellation::demap(cplx s) const {
    const std::uint32_t li = quantize_axis(s.real(), levels_i_, level_label_i_);
    const std::uint32_t lq = quantize_axis(s.imag(), levels_q_, level_label_q_);
    return (level_label_i_[li] << bits_q_) | level_label_q_[lq];
}

cplx Constellation::quantize(cplx s) const {
    return points_[demap(s)];
}

// --------------------------------------------------------------------------
// Modem

Modem::Modem(const SystemConfig& cfg)
    : n_t_(cfg.n_t), n_wg_(cfg.n_wg), n_a_(cfg.n_a), constellation_(cfg.mod_order) {
    cfg.validate();
    const std::uint64_t combos = binomial(n_t_, n_a_);
    im_bits_ = 0;
    while ((1ull << (im_bits_ + 1)) <= combos) ++im_bits_;
    eta_ = n_wg_ * (im_bits_ + constellation_.bits_per_symbol());

    // The legitimate set keeps the first 2^p subsets in lexicographic order.
    const std::uint32_t count = 1u << im_bits_;
    pattern_table_.reserve(count);
    std::vector<int> subset(n_a_);
    for (int i = 0; i < n_a_; ++i) subset[i] = i;
    for (std::uint32_t r = 0; r < count; ++r) {
        pattern_table_.push_back(subset);
        // next lexicographic size-n_a subset of {0..n_t-1}
        int i = n_a_ - 1;
        while (i >= 0 && subset[i] == n_t_ - n_a_ + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int k = i + 1; k < n_a_; ++k) subset[k] = subset[k - 1] + 1;
    }
}

std::vector<int> Modem::pattern_from_rank(std::uint32_t rank) const {
    if (rank >= pattern_table_.size())
        throw std::out_of_range("pattern_from_rank: rank outside legitimate set");
    return pattern_table_[rank];
}

std::uint32_t Modem::pattern_to_rank(const std::vector<int>& index_set) const {
    // Combinadic rank of a sorted subset in lexicographic order.
    std::uint64_t rank = 0;
    int prev = -1;
    for (int i = 0; i < n_a_; ++i) {
        for (int v = prev + 1; v < index_set[i]; ++v)
            rank += binomial(n_t_ - 1 - v, n_a_ - 1 - i);
        prev = index_set[i];
    }
    if (rank >= pattern_table_.size())
        throw std::out_of_range("pattern_to_rank: index set outside legitimate set");
    return static_cast<std::uint32_t>(rank);
}

ActivationPattern Modem::pattern_from_bits(const BitVec& bits) const {
    if (static_cast<int>(bits.size()) != n_wg_ * im_bits_)
        throw std::invalid_argument("pattern_from_bits: wrong bit count");
    ActivationPattern p;
    p.index_sets.resize(n_wg_);
    p.ranks.resize(n_wg_);
    for (int k = 0; k < n_wg_; ++k) {
        const auto rank = static_cast<std::uint32_t>(
            bits_to_uint(bits.data() + k * im_bits_, im_bits_));
        p.ranks[k] = rank;
        p.index_sets[k] = pattern_from_rank(rank);
    }
    return p;
}

BitVec Modem::pattern_to_bits(const ActivationPattern& pattern) const {
    BitVec bits(static_cast<std::size_t>(n_wg_) * im_bits_);
    for (int k = 0; k < n_wg_; ++k)
        uint_to_bits(pattern.ranks[k], bits.data() + k * im_bits_, im_bits_);
    return bits;
}

TransmitFrame Modem::build_transmit(const BitVec& bits) const {
    if (static_cast<int>(bits.size()) != eta_)
        throw std::invalid_argument("build_transmit: expected eta bits");
    const int q = constellation_.bits_per_symbol();

    TransmitFrame f;
    f.bits = bits;
    f.pattern.index_sets.resize(n_wg_);
    f.pattern.ranks.resize(n_wg_);
    f.symbols.resize(n_wg_);
    f.x.assign(static_cast<std::size_t>(n_t_) * n_wg_, cplx(0.0, 0.0));

    for (int k = 0; k < n_wg_; ++k) {
        const std::uint8_t* block = bits.data() + k * (im_bits_ + q);
        const auto rank =
            static_cast<std::uint32_t>(bits_to_uint(block, im_bits_));
        f.pattern.ranks[k] = rank;
        f.pattern.index_sets[k] = pattern_from_rank(rank);
        f.symbols[k] = constellation_.map_bits(block + im_bits_);
        for (int idx : f.pattern.index_sets[k])
            f.x[static_cast<std::size_t>(k) * n_t_ + idx] = f.symbols[k];
    }
    return f;
}

BitVec Modem::frame_to_bits(const ActivationPattern& pattern,
                            const std::vector<std::uint32_t>& symbol_labels) const {
    const int q = constellation_.bits_per_symbol();
    BitVec bits(static_cast<std::size_t>(eta_));
    for (int k = 0; k < n_wg_; ++k) {
        std::uint8_t* block = bits.data() + k * (im_bits_ + q);
        uint_to_bits(pattern.ranks[k], block, im_bits_);
        uint_to_bits(symbol_labels[k], block + im_bits_, q);
    }
    return bits;
}

std::vector<TransmitFrame> Modem::enumerate_signal_set(int cap_bits) const {
    if (eta_ > cap_bits)
        throw std::invalid_argument("enumerate_signal_set: eta exceeds enumeration cap");
    std::vector<TransmitFrame> frames;
    frames.reserve(1ull << eta_);
    BitVec bits(static_cast<std::size_t>(eta_));
    for (std::uint64_t v = 0; v < (1ull << eta_); ++v) {
        uint_to_bits(v, bits.data(), eta_);
        frames.push_back(build_transmit(bits));
    }
    return frames;
}

std::vector<std::vector<double>> Modem::selection_matrix(
    const ActivationPattern& pattern) const {
    const int rows = n_t_ * n_wg_;
    const int cols = n_a_ * n_wg_;
    std::vector<std::vector<double>> e(rows, std::vector<double>(cols, 0.0));
    for (int k = 0; k < n_wg_; ++k) {
        for (int m = 0; m < n_a_; ++m) {
            const int row = k * n_t_ + pattern.index_sets[k][m];
            const int col = k * n_a_ + m;
            e[row][col] = 1.0;
        }
    }
    return e;
}

int spectral_efficiency(const SystemConfig& cfg) {
    return Modem(cfg).spectral_efficiency();
}

} // namespace paim
