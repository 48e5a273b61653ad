// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "paim/modem.hpp"

using namespace paim;

namespace {

SystemConfig make_cfg(int n_t, int n_wg, int n_a, int m) {
    SystemConfig cfg;
    cfg.n_t = n_t;
    cfg.n_wg = n_wg;
    cfg.n_a = n_a;
    cfg.mod_order = m;
    return cfg;
}

} // namespace

TEST_CASE("spectral efficiency") {
    CHECK(spectral_efficiency(make_cfg(4, 1, 1, 4)) == 4);
    CHECK(spectral_efficiency(make_cfg(8, 2, 1, 2)) == 8);
    CHECK(spectral_efficiency(make_cfg(4, 1, 2, 2)) == 3); // floor(log2 6) + 1
}

TEST_CASE("constellation basics") {
    SUBCASE("BPSK is {+1, -1} with label 0 positive") {
        Constellation c(2);
        CHECK(c.map(0) == cplx(1.0, 0.0));
        CHECK(c.map(1) == cplx(-1.0, 0.0));
    }
    SUBCASE("QPSK points are (+-1 +- i)/sqrt(2)") {
        Constellation c(4);
        const double a = 1.0 / std::sqrt(2.0);
        std::set<std::pair<double, double>> pts;
        for (auto p : c.points())
            pts.insert({std::round(p.real() / a), std::round(p.imag() / a)});
        CHECK(pts == std::set<std::pair<double, double>>{
                         {1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
        CHECK(std::abs(std::abs(c.map(0)) - 1.0) < 1e-12);
    }
    SUBCASE("unit mean power for M in {2,4,16,64}") {
        for (int m : {2, 4, 16, 64}) {
            Constellation c(m);
            double power = 0.0;
            for (auto p : c.points()) power += std::norm(p);
            CHECK(power / m == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("per-axis Gray labels differ in one bit between neighbors") {
        Constellation c(16);
        // Sort points by real part within a fixed imaginary row and check
        // adjacent labels differ in exactly one bit.
        std::vector<std::pair<double, std::uint32_t>> row;
        for (std::uint32_t label = 0; label < 16; ++label) {
            const cplx p = c.map(label);
            if (std::abs(p.imag() - c.max_im()) < 1e-12)
                row.push_back({p.real(), label});
        }
        std::sort(row.begin(), row.end());
        REQUIRE(row.size() == 4);
        for (std::size_t i = 1; i < row.size(); ++i) {
            const std::uint32_t x = row[i - 1].second ^ row[i].second;
            CHECK(__builtin_popcount(x) == 1);
        }
    }
    SUBCASE("demap inverts map for every label") {
        for (int m : {2, 4, 8, 16, 64}) {
            Constellation c(m);
            for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(m);
                 ++label)
                CHECK(c.demap(c.map(label)) == label);
        }
    }
    CHECK_THROWS_AS(Constellation(6), std::invalid_argument);
}

TEST_CASE("pattern ranking is lexicographic") {
    Modem modem(make_cfg(4, 1, 2, 2));
    // floor(log2 C(4,2)) = 2, so ranks 0..3 keep the first four subsets.
    CHECK(modem.im_bits_per_wg() == 2);
    CHECK(modem.pattern_from_rank(0) == std::vector<int>{0, 1});
    CHECK(modem.pattern_from_rank(1) == std::vector<int>{0, 2});
    CHECK(modem.pattern_from_rank(2) == std::vector<int>{0, 3});
    CHECK(modem.pattern_from_rank(3) == std::vector<int>{1, 2});
    CHECK_THROWS_AS(modem.pattern_from_rank(4), std::out_of_range);
    for (std::uint32_t r = 0; r < 4; ++r)
        CHECK(modem.pattern_to_rank(modem.pattern_from_rank(r)) == r);
}

TEST_CASE("single pattern when every position is active") {
    Modem modem(make_cfg(4, 1, 4, 2));
    CHECK(modem.im_bits_per_wg() == 0);
    CHECK(modem.pattern_from_rank(0) == std::vector<int>{0, 1, 2, 3});
    CHECK(modem.spectral_efficiency() == 1);
}

TEST_CASE("pattern bits round trip exhaustively") {
    Modem modem(make_cfg(8, 2, 2, 2));
    const int bits = modem.n_wg() * modem.im_bits_per_wg();
    for (std::uint64_t v = 0; v < (1ull << bits); ++v) {
        BitVec b(bits);
        uint_to_bits(v, b.data(), bits);
        const auto pattern = modem.pattern_from_bits(b);
        CHECK(modem.pattern_to_bits(pattern) == b);
    }
}

TEST_CASE("build_transmit structure") {
    SUBCASE("first frame of the BPSK case is e_1") {
        Modem modem(make_cfg(4, 1, 1, 2));
        const TransmitFrame f = modem.build_transmit(BitVec{0, 0, 0});
        CHECK(f.x == std::vector<cplx>{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)});
    }
    SUBCASE("both activated positions carry the same symbol") {
        Modem modem(make_cfg(4, 1, 2, 4));
        for (std::uint64_t v = 0; v < 16; ++v) {
            BitVec b(4);
            uint_to_bits(v, b.data(), 4);
            const TransmitFrame f = modem.build_transmit(b);
            int nonzeros = 0;
            for (auto s : f.x)
                if (s != cplx(0, 0)) {
                    ++nonzeros;
                    CHECK(s == f.symbols[0]);
                }
            CHECK(nonzeros == 2);
        }
    }
    SUBCASE("selection matrix has orthonormal columns") {
        Modem modem(make_cfg(4, 2, 2, 2));
        BitVec b(modem.spectral_efficiency(), 0);
        b[0] = 1; // a non-trivial pattern
        const TransmitFrame f = modem.build_transmit(b);
        const auto e = modem.selection_matrix(f.pattern);
        const int cols = modem.n_a() * modem.n_wg();
        for (int c1 = 0; c1 < cols; ++c1) {
            for (int c2 = 0; c2 < cols; ++c2) {
                double dot = 0.0;
                for (std::size_t r = 0; r < e.size(); ++r)
                    dot += e[r][c1] * e[r][c2];
                CHECK(dot == (c1 == c2 ? 1.0 : 0.0));
            }
        }
    }
}

TEST_CASE("modem round trip over all frames") {
    const std::array<std::array<int, 4>, 3> cases{
        {{4, 1, 1, 4}, {4, 2, 2, 2}, {8, 1, 1, 16}}};
    for (auto [nt, nwg, na, m] : cases) {
        Modem modem(make_cfg(nt, nwg, na, m));
        const auto frames = modem.enumerate_signal_set();
        CHECK(frames.size() == (1ull << modem.spectral_efficiency()));
        for (const auto& f : frames) {
            std::vector<std::uint32_t> labels(nwg);
            for (int k = 0; k < nwg; ++k)
                labels[k] = modem.constellation().demap(f.symbols[k]);
            CHECK(modem.frame_to_bits(f.pattern, labels) == f.bits);
        }
    }
}

TEST_CASE("pairwise Hamming sum matches the closed form") {
    Modem modem(make_cfg(4, 1, 1, 4));
    const auto frames = modem.enumerate_signal_set();
    const int eta = modem.spectral_efficiency();
    long long sum = 0;
    for (const auto& a : frames)
        for (const auto& b : frames) sum += hamming_distance(a.bits, b.bits);
    // Each bit position differs in half of all ordered pairs.
    CHECK(sum == static_cast<long long>(eta) * (1ll << (2 * eta - 1)));
}

TEST_CASE("enumeration cap") {
    Modem modem(make_cfg(8, 2, 1, 64));
    // eta = 2 * (3 + 6) = 18 fits, but a tight cap rejects.
    CHECK_THROWS_AS(modem.enumerate_signal_set(10), std::invalid_argument);
}
