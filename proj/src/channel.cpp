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

#include "fdrelay/channel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace fdrelay::sim {

namespace {

// Squared norms below this are treated as an underflowed denominator.
constexpr double kDegenerateNorm2 = 1e-200;

CVector normalized(const CVector& v, const char* what) {
    const double n2 = v.squaredNorm();
    if (!(n2 > kDegenerateNorm2)) throw DegenerateChannel(std::string("degenerate channel: ") + what);
    return v / std::sqrt(n2);
}

}  // namespace

CMatrix sample_gaussian_matrix(PhiloxStream& stream, Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = stream.complex_normal();
    }
    return m;
}

ChannelSample sample_channels(PhiloxStream& stream, const AntennaConfig& config) {
    ChannelSample s;
    s.h_sr = sample_gaussian_matrix(stream, config.n_r1, config.n_s);
    s.h_rr = sample_gaussian_matrix(stream, config.n_r1, config.n_r2);
    s.h_rd = sample_gaussian_matrix(stream, config.n_r2, config.n_d);
    return s;
}

CMatrix left_null_projector(const CVector& v) {
    const double n2 = v.squaredNorm();
    if (!(n2 > 0.0)) throw std::invalid_argument("left_null_projector: zero vector");
    const auto dim = v.size();
    CMatrix p = CMatrix::Identity(dim, dim) - (v * v.adjoint()) / n2;
    // Exact Hermitian symmetry; the rounding of v v^H is not symmetric.
    return (p + p.adjoint()) * 0.5;
}

Eigenpair dominant_eigenpair(const CMatrix& hermitian) {
    if (hermitian.rows() == 1) return {hermitian(0, 0).real(), CVector::Ones(1)};
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
    const auto last = hermitian.rows() - 1;
    return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

double lambda_max_gram(const CMatrix& h) {
    const CMatrix gram = h.rows() < h.cols() ? CMatrix(h * h.adjoint()) : CMatrix(h.adjoint() * h);
    if (gram.rows() == 1) return gram(0, 0).real();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(gram.rows() - 1);
}

double sample_wishart_lambda_max(PhiloxStream& stream, int rows, int cols) {
    return lambda_max_gram(sample_gaussian_matrix(stream, rows, cols));
}

BeamformerSet design_receive_zf(const ChannelSample& sample) {
    BeamformerSet b;
    const Eigenpair rd = dominant_eigenpair(sample.h_rd.adjoint() * sample.h_rd);
    b.t_d = rd.vector.normalized();
    b.free_gain = rd.value;
    const CVector h_rd = sample.h_rd * b.t_d;
    b.w_t = normalized(h_rd, "|h_RD| underflow");

    const CVector loop = sample.h_rr * h_rd;
    if (!(loop.squaredNorm() > kDegenerateNorm2)) throw DegenerateChannel("degenerate channel: |H_RR h_RD| underflow");
    b.projector = left_null_projector(loop);

    const CMatrix projected = b.projector * sample.h_sr;
    const Eigenpair sr = dominant_eigenpair(sample.h_sr.adjoint() * projected);
    b.t_s = sr.vector.normalized();
    b.projected_gain = sr.value;
    b.w_r = normalized(projected * b.t_s, "|D H_SR t_S| underflow");
    return b;
}

BeamformerSet design_transmit_zf(const ChannelSample& sample) {
    BeamformerSet b;
    const Eigenpair sr = dominant_eigenpair(sample.h_sr.adjoint() * sample.h_sr);
    b.t_s = sr.vector.normalized();
    b.free_gain = sr.value;
    const CVector h_sr = sample.h_sr * b.t_s;
    b.w_r = normalized(h_sr, "|h_SR| underflow");

    const CVector loop = sample.h_rr.adjoint() * h_sr;
    if (!(loop.squaredNorm() > kDegenerateNorm2)) throw DegenerateChannel("degenerate channel: |H_RR^H h_SR| underflow");
    b.projector = left_null_projector(loop);

    const CMatrix projected = b.projector * sample.h_rd;
    const Eigenpair rd = dominant_eigenpair(sample.h_rd.adjoint() * projected);
    b.t_d = rd.vector.normalized();
    b.projected_gain = rd.value;
    b.w_t = normalized(projected * b.t_d, "|B H_RD t_D| underflow");
    return b;
}

BeamformerSet design_beamformers(const ChannelSample& sample, ZfMode mode) {
    return mode == ZfMode::Receive ? design_receive_zf(sample) : design_transmit_zf(sample);
}

TrialResult instantaneous_snrs(const ChannelSample& sample, const BeamformerSet& beams, const LinkBudget& budget) {
    TrialResult r;
    const CVector h_sr = sample.h_sr * beams.t_s;
    const CVector h_rd = sample.h_rd * beams.t_d;
    r.snr_sr = budget.scale_sr() * std::norm(beams.w_r.dot(h_sr));
    r.snr_rd = budget.scale_rd() * std::norm(h_rd.dot(beams.w_t));
    r.zf_residual = std::abs(beams.w_r.dot(sample.h_rr * beams.w_t));
    return r;
}

double PowerIdentity::residual() const {
    return std::max(std::abs(relay_definition - relay_compact), std::abs(destination_definition - destination_compact));
}

PowerIdentity power_identity_check(const ChannelSample& sample, const BeamformerSet& beams, double p_s, double p_r) {
    const auto n_r1 = sample.h_sr.rows();
    const CVector h_sr = sample.h_sr * beams.t_s;
    const CVector h_rd = sample.h_rd * beams.t_d;
    const CVector loop = sample.h_rr * beams.w_t;

    // E{r_IN r_IN^H} with x_S, x_R and the noise mutually independent.
    const CMatrix input_cov =
        p_s * h_sr * h_sr.adjoint() + p_r * loop * loop.adjoint() + CMatrix::Identity(n_r1, n_r1);
    const std::complex<double> sigma_r = beams.w_r.adjoint() * input_cov * beams.w_r;

    // Sigma_D: scalar effective gain h_RD^H W_T, unit-variance noise.
    const Eigen::Matrix<std::complex<double>, 1, 1> gain = h_rd.adjoint() * beams.w_t;
    const std::complex<double> sigma_d = p_r * (gain * gain.adjoint()).trace() + 1.0;

    PowerIdentity id;
    id.relay_definition = sigma_r.real();
    id.relay_compact = p_s * std::norm(h_sr.dot(beams.w_r)) + 1.0;
    id.destination_definition = sigma_d.real();
    id.destination_compact = p_r * std::norm(beams.w_t.dot(h_rd)) + 1.0;
    return id;
}

}  // namespace fdrelay::sim
