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

// Per-trial relay channel model.
//
// Matrix orientation (rows index the relay side for both hops):
//   H_SR  N_R1 x N_S   source -> relay receive array
//   H_RR  N_R1 x N_R2  relay transmit array -> relay receive array (loopback)
//   H_RD  N_R2 x N_D   the relay -> destination channel is H_RD^H
// Effective vectors: h_SR = H_SR t_S (length N_R1), h_RD = H_RD t_D
// (length N_R2).  The destination sees  h_RD^H W_T x_R + n.

#pragma once

#include "fdrelay/outage.hpp"
#include "fdrelay/philox.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace fdrelay::sim {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using outage::AntennaConfig;
using outage::LinkBudget;
using outage::ZfMode;

struct ChannelSample {
    CMatrix h_sr;
    CMatrix h_rr;
    CMatrix h_rd;
};

/// Thrown when a normalization denominator underflows; the trial is redrawn.
class DegenerateChannel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// i.i.d. CN(0,1) entries, drawn H_SR, H_RR, H_RD in column-major order.
ChannelSample sample_channels(PhiloxStream& stream, const AntennaConfig& config);

/// rows x cols matrix of i.i.d. CN(0,1) entries.
CMatrix sample_gaussian_matrix(PhiloxStream& stream, Eigen::Index rows, Eigen::Index cols);

/// I - v v^H / |v|^2. Throws std::invalid_argument for v = 0.
CMatrix left_null_projector(const CVector& v);

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
struct Eigenpair {
    double value = 0.0;
    CVector vector;
};
Eigenpair dominant_eigenpair(const CMatrix& hermitian);

/// Largest eigenvalue of H^H H, computed on the smaller Gram matrix.
double lambda_max_gram(const CMatrix& h);

/// One draw of lambda_max for a rows x cols complex Gaussian matrix.
double sample_wishart_lambda_max(PhiloxStream& stream, int rows, int cols);

struct BeamformerSet {
    CVector t_s;  ///< N_S, unit norm
    CVector t_d;  ///< N_D, unit norm
    CVector w_r;  ///< N_R1, unit norm
    CVector w_t;  ///< N_R2, unit norm
    CMatrix projector;         ///< D (receive ZF, N_R1) or B (transmit ZF, N_R2)
    double projected_gain = 0.0;  ///< lambda_max of the projected hop's Gram matrix
    double free_gain = 0.0;       ///< lambda_max of the unconstrained hop's Gram matrix
};

/// W_T = h_RD/|h_RD| with t_D the dominant right-singular direction of H_RD;
/// W_R = D H_SR t_S/|.| with D = I - (H_RR h_RD)(H_RR h_RD)^H/|H_RR h_RD|^2
/// and t_S the dominant eigenvector of H_SR^H D H_SR.
BeamformerSet design_receive_zf(const ChannelSample& sample);

/// Mirror image: W_R = h_SR/|h_SR|, B = projector for H_RR^H h_SR,
/// W_T = B H_RD t_D/|.| with t_D dominant for H_RD^H B H_RD.
BeamformerSet design_transmit_zf(const ChannelSample& sample);

BeamformerSet design_beamformers(const ChannelSample& sample, ZfMode mode);

struct TrialResult {
    double snr_sr = 0.0;
    double snr_rd = 0.0;
    double zf_residual = 0.0;  ///< |W_R^H H_RR W_T|
};

/// snr_sr = alpha_SR^2 P_S gammabar_SR |W_R^H H_SR t_S|^2,
/// snr_rd = alpha_RD^2 P_R gammabar_RD |h_RD^H W_T|^2.
TrialResult instantaneous_snrs(const ChannelSample& sample, const BeamformerSet& beams, const LinkBudget& budget);

/// Received-power traces at R and D, once from the covariance definitions
/// (loopback term included) and once from the compact ZF forms.
struct PowerIdentity {
    double relay_definition = 0.0;
    double relay_compact = 0.0;
    double destination_definition = 0.0;
    double destination_compact = 0.0;

    [[nodiscard]] double residual() const;
};

/// Powers are the raw P_S, P_R (zero allowed).
PowerIdentity power_identity_check(const ChannelSample& sample, const BeamformerSet& beams, double p_s, double p_r);

}  // namespace fdrelay::sim
