// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "fdrelay/monte_carlo.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

using namespace fdrelay::sim;
using fdrelay::outage::SnrThreshold;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

AntennaConfig cfg(int n_s, int n_r1, int n_r2, int n_d, ZfMode mode) { return {n_s, n_r1, n_r2, n_d, mode}; }

CVector random_vector(PhiloxStream& s, Eigen::Index n) { return sample_gaussian_matrix(s, n, 1).col(0); }

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("PhiloxStream is deterministic and separates substreams") {
    PhiloxStream a(42, 7);
    PhiloxStream b(42, 7);
    PhiloxStream c(42, 8);
    PhiloxStream d(42, 7, 1);
    bool c_differs = false;
    bool d_differs = false;
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        c_differs = c_differs || u != c.uniform();
        d_differs = d_differs || u != d.uniform();
    }
    CHECK(c_differs);
    CHECK(d_differs);
}

TEST_CASE("channel entries are unit-variance circular Gaussians") {
    PhiloxStream s(2024, 0);
    const int n = 100000;
    std::complex<double> mean = 0;
    double power = 0;
    double real_sq = 0;
    for (int i = 0; i < n; ++i) {
        const auto z = s.complex_normal();
        mean += z;
        power += std::norm(z);
        real_sq += z.real() * z.real();
    }
    CHECK(std::abs(mean / double(n)) < 0.01);
    CHECK_THAT(power / n, WithinAbs(1.0, 0.01));
    CHECK_THAT(real_sq / n, WithinAbs(0.5, 0.01));
}

TEST_CASE("sample_channels has the configured shapes and is reproducible") {
    const auto config = cfg(2, 3, 4, 5, ZfMode::Receive);
    PhiloxStream s1(9, 3);
    PhiloxStream s2(9, 3);
    const auto a = sample_channels(s1, config);
    const auto b = sample_channels(s2, config);
    CHECK(a.h_sr.rows() == 3);
    CHECK(a.h_sr.cols() == 2);
    CHECK(a.h_rr.rows() == 3);
    CHECK(a.h_rr.cols() == 4);
    CHECK(a.h_rd.rows() == 4);
    CHECK(a.h_rd.cols() == 5);
    CHECK(a.h_sr == b.h_sr);
    CHECK(a.h_rr == b.h_rr);
    CHECK(a.h_rd == b.h_rd);

    // Regression snapshot of the first draw.
    PhiloxStream s3(1, 0);
    const auto z = s3.complex_normal();
    PhiloxStream s4(1, 0);
    const auto block = s4.next_block();
    const double u1 = ((std::uint64_t{block[0]} << 32 | block[1]) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    const double u2 = ((std::uint64_t{block[2]} << 32 | block[3]) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    const double r = std::sqrt(-std::log(u1));
    CHECK(z.real() == r * std::cos(2.0 * std::numbers::pi * u2));
    CHECK(z.imag() == r * std::sin(2.0 * std::numbers::pi * u2));
}

TEST_CASE("left_null_projector laws") {
    CVector e1 = CVector::Zero(3);
    e1(0) = 1.0;
    CMatrix expected = CMatrix::Identity(3, 3);
    expected(0, 0) = 0.0;
    CHECK((left_null_projector(e1) - expected).norm() == 0.0);
    CHECK_THROWS_AS(left_null_projector(CVector::Zero(2)), std::invalid_argument);

    PhiloxStream s(5, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index dim = 2 + trial % 5;
        const CVector v = random_vector(s, dim);
        const CMatrix p = left_null_projector(v);
        CHECK((p - p.adjoint()).norm() <= 1e-12);
        CHECK((p * p - p).norm() <= 1e-12);
        CHECK((p * v).norm() <= 1e-12 * v.norm());
        CHECK(std::abs(p.trace() - std::complex<double>(double(dim - 1))) <= 1e-12);
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(p, Eigen::EigenvaluesOnly);
        int rank = 0;
        for (Eigen::Index i = 0; i < dim; ++i) rank += eig.eigenvalues()(i) > 0.5 ? 1 : 0;
        CHECK(rank == dim - 1);
    }
}

TEST_CASE("beamformers are unit norm and null the loopback") {
    for (const auto mode : {ZfMode::Receive, ZfMode::Transmit}) {
        for (const auto& config : {cfg(2, 3, 2, 1, mode), cfg(2, 2, 3, 1, mode), cfg(3, 2, 2, 2, mode),
                                   cfg(1, 4, 3, 3, mode)}) {
            for (std::uint64_t i = 0; i < 500; ++i) {
                PhiloxStream s(11, i);
                const auto sample = sample_channels(s, config);
                const auto beams = design_beamformers(sample, mode);
                CHECK(std::abs(beams.t_s.norm() - 1.0) <= 1e-12);
                CHECK(std::abs(beams.t_d.norm() - 1.0) <= 1e-12);
                CHECK(std::abs(beams.w_r.norm() - 1.0) <= 1e-12);
                CHECK(std::abs(beams.w_t.norm() - 1.0) <= 1e-12);
                const auto t = instantaneous_snrs(sample, beams, LinkBudget{});
                CHECK(t.zf_residual <= 1e-10);
                CHECK(t.snr_sr >= 0.0);
                CHECK(t.snr_rd >= 0.0);

                const CMatrix& proj = beams.projector;
                if (mode == ZfMode::Receive) {
                    CHECK(std::abs(proj.trace().real() - (config.n_r1 - 1)) <= 1e-12);
                    const CMatrix reduced = proj * sample.h_sr;
                    CHECK_THAT((reduced * beams.t_s).squaredNorm(), WithinRel(lambda_max_gram(reduced), 1e-9));
                    CHECK_THAT(t.snr_sr, WithinRel(beams.projected_gain, 1e-9));
                    CHECK_THAT(t.snr_rd, WithinRel(lambda_max_gram(sample.h_rd), 1e-9));
                } else {
                    CHECK(std::abs(proj.trace().real() - (config.n_r2 - 1)) <= 1e-12);
                    const CMatrix reduced = proj * sample.h_rd;
                    CHECK_THAT((reduced * beams.t_d).squaredNorm(), WithinRel(lambda_max_gram(reduced), 1e-9));
                    CHECK_THAT(t.snr_rd, WithinRel(beams.projected_gain, 1e-9));
                    CHECK_THAT(t.snr_sr, WithinRel(lambda_max_gram(sample.h_sr), 1e-9));
                }
            }
        }
    }
}

TEST_CASE("instantaneous SNRs of a hand-computed receive ZF channel") {
    ChannelSample s;
    s.h_sr = CMatrix(2, 1);
    s.h_sr << 1.0, 0.0;
    s.h_rr = CMatrix::Identity(2, 2);
    s.h_rd = CMatrix(2, 1);
    s.h_rd << 1.0, 1.0;
    const auto beams = design_receive_zf(s);
    LinkBudget budget{3.0, 5.0, 1.0, 1.0, 1.0, 1.0};
    const auto t = instantaneous_snrs(s, beams, budget);
    CHECK_THAT(t.snr_sr, WithinAbs(0.5 * 3.0, 1e-14));
    CHECK_THAT(t.snr_rd, WithinAbs(2.0 * 5.0, 1e-14));
    CHECK(t.zf_residual <= 1e-15);

    budget.p_s *= 4.0;
    budget.p_r *= 4.0;
    const auto scaled = instantaneous_snrs(s, beams, budget);
    CHECK(scaled.snr_sr == 4.0 * t.snr_sr);
    CHECK(scaled.snr_rd == 4.0 * t.snr_rd);
}

TEST_CASE("degenerate loopback is reported") {
    ChannelSample s;
    s.h_sr = CMatrix::Ones(2, 1);
    s.h_rr = CMatrix::Zero(2, 2);
    s.h_rd = CMatrix::Ones(2, 1);
    CHECK_THROWS_AS(design_receive_zf(s), DegenerateChannel);
    CHECK_THROWS_AS(design_transmit_zf(s), DegenerateChannel);
}

TEST_CASE("projected source gain has mean 7/2 for (2,3,.,.) receive ZF") {
    const auto config = cfg(2, 3, 2, 1, ZfMode::Receive);
    const auto sample = simulate_link_gains(config, 100000, 77);
    double mean = 0.0;
    for (const auto& g : sample.gains) mean += g.sr;
    mean /= static_cast<double>(sample.gains.size());
    CHECK_THAT(mean, WithinRel(3.5, 0.01));
}

TEST_CASE("received-power identities") {
    for (const auto mode : {ZfMode::Receive, ZfMode::Transmit}) {
        const auto config = cfg(2, 3, 3, 2, mode);
        for (std::uint64_t i = 0; i < 2000; ++i) {
            PhiloxStream s(13, i);
            const auto sample = sample_channels(s, config);
            const auto beams = design_beamformers(sample, mode);
            CHECK(power_identity_check(sample, beams, 3.0, 7.0).residual() <= 1e-10);

            const auto noise_only = power_identity_check(sample, beams, 0.0, 7.0);
            CHECK_THAT(noise_only.relay_definition, WithinAbs(1.0, 1e-10));

            auto stretched = beams;
            stretched.w_r *= 1.1;
            const auto off = power_identity_check(sample, stretched, 3.0, 7.0);
            CHECK_THAT(off.relay_definition - off.relay_compact, WithinAbs(0.21, 1e-9));
        }
    }
}

TEST_CASE("simulate_link_gains is deterministic and thread-count invariant") {
    const auto config = cfg(2, 3, 2, 2, ZfMode::Transmit);
    const auto one = simulate_link_gains(config, 5000, 123, 1);
    const auto three = simulate_link_gains(config, 5000, 123, 3);
    const auto again = simulate_link_gains(config, 5000, 123, 1);
    REQUIRE(one.gains.size() == 5000);
    bool identical = true;
    for (std::size_t i = 0; i < one.gains.size(); ++i) {
        identical = identical && one.gains[i].sr == three.gains[i].sr && one.gains[i].rd == three.gains[i].rd &&
                    one.gains[i].sr == again.gains[i].sr && one.gains[i].rd == again.gains[i].rd;
    }
    CHECK(identical);
    CHECK(one.redraws == 0);
    CHECK(one.max_zf_residual <= kZfResidualLimit);

    const auto other_seed = simulate_link_gains(config, 10, 124, 1);
    CHECK(other_seed.gains[0].sr != one.gains[0].sr);
}

TEST_CASE("estimate_outage") {
    const auto config = cfg(2, 3, 2, 1, ZfMode::Receive);
    const auto budget = LinkBudget::symmetric(100.0);
    CHECK(estimate_outage(config, budget, SnrThreshold{0.0}, 2000, 1).p_hat == 0.0);
    CHECK(estimate_outage(config, budget, SnrThreshold{1e12}, 2000, 1).p_hat == 1.0);
    CHECK_THROWS_AS(estimate_outage(config, budget, SnrThreshold{1.0}, 0, 1), std::invalid_argument);

    const auto e1 = estimate_outage(config, budget, SnrThreshold{10.0}, 100000, 2024);
    const auto e2 = estimate_outage(config, budget, SnrThreshold{10.0}, 100000, 2024);
    CHECK(e1.outages == e2.outages);
    CHECK(e1.ci_low <= e1.p_hat);
    CHECK(e1.p_hat <= e1.ci_high);

    // Analytic value at 20 dB, threshold 10 dB.
    const double p = 0.0046863476944717632;
    const double z = (e1.p_hat - p) / std::sqrt(p * (1.0 - p) / 100000.0);
    CHECK(std::abs(z) <= 3.0);
}
