// SPDX-License-Identifier: Apache-2.0
//
// twrc: relay power minimization for lattice-coded two-way relaying with
// power-splitting energy harvesting.
// Copyright (C) 2026 The twrc authors
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

// Transceiver design for the two-way relay.
//
// Notation used throughout (i = 0, 1 for the two users):
//   f      relay transmit beamformer, unit norm
//   g      relay receive combiner (row vector), unit norm
//   h_i    uplink channel; the downlink is h_i^T by reciprocity
//   dl_i = |h_i^T f|^2   downlink gain       ul_i = |g h_i|^2   uplink gain
//
// With the second-moment ratio dropped from the uplink rate constraint, the
// rate, harvesting and splitting constraints collapse to
//
//   P_r dl_i >= a_i,  a_i = sigma^2 theta_ur_i / (eta ul_i) + sigma^2 (theta_ru_i - 1) + 2 P_c / eta
//
// so the minimum relay power for fixed (f, g) is max_i a_i / dl_i. For fixed g
// this is a two-constraint SDP in F = P_r f f^H; for fixed f it is
// min_g max_i (rho_i / ul_i + mu_i), solved as an SDP in G = g^H g by
// bisection on the level.
//
// All powers here are linear.

#pragma once

#include "twrc/channel.hpp"
#include "twrc/numerics.hpp"
#include "twrc/sdp.hpp"

#include <array>
#include <span>
#include <string>

namespace twrc
{

struct SystemParams
{
    std::size_t antennas = 4;
    double eta = 1.0;           // energy conversion efficiency, (0, 1]
    double circuit_power = 0.0; // P_c
    double sigma2 = 1.0;        // receiver noise power
    double sigma2_a = 0.0;      // share before the power splitter
    double sigma2_p = 1.0;      // share after the power splitter
    std::array<double, 2> rate_targets{2.0, 2.0}; // bits/s/Hz sent by user 1, user 2

    // Throws InvalidArgument when an invariant is broken.
    void validate() const;

    // sigma2_a = 0, sigma2_p = sigma2
    static SystemParams make(std::size_t antennas, double eta, double circuit_power, double sigma2,
                             double rate1, double rate2);
};

struct RateThresholds
{
    std::array<double, 2> uplink;   // 2^(2 R_i), user i -> relay
    std::array<double, 2> downlink; // 2^(2 R_{3-i}), relay -> user i
};

RateThresholds rate_thresholds(const SystemParams &params);

// |a . b|^2 with the plain bilinear product: both |h^T f|^2 and |g h|^2.
double effective_gain(const ComplexVector &a, const ComplexVector &b);

std::array<double, 2> constraint_rhs(const SystemParams &params, const ComplexVector &g,
                                     const ChannelRealization &channel);

double required_power(const ComplexVector &f, const ComplexVector &g, const ChannelRealization &channel,
                      const SystemParams &params);

struct RankOne
{
    double scale = 0.0; // dominant eigenvalue
    ComplexVector v;    // unit dominant eigenvector
    double rank_ratio = 0.0;
};

RankOne rank_one_extract(const HermitianMatrix &m);

// Lowers the rank of a PSD matrix while keeping Tr(P_j M) fixed for every
// P_j in `preserved`, until rank^2 <= preserved.size(). Eigenvalues below
// `relative_cut` * lambda_max count as zero.
HermitianMatrix reduce_rank(const HermitianMatrix &m, std::span<const HermitianMatrix> preserved,
                            double relative_cut = 1e-8);

struct BeamformerResult
{
    HermitianMatrix F;
    double p_r = 0.0;
    ComplexVector f;
    double rank_ratio = 0.0;     // of the returned F
    double raw_rank_ratio = 0.0; // of the interior-point solution
    bool rank_reduced = false;
    bool fallback = false;       // eigenvector projection plus power rescale
    std::string diagnostic;
};

BeamformerResult solve_beamformer(const ComplexVector &g, const ChannelRealization &channel,
                                  const SystemParams &params, const SdpTolerances &tol = {});

// min Tr(F) s.t. Tr(conj(h_i) h_i^T F) >= a_i. A non-positive a_i drops that
// user's constraint.
BeamformerResult solve_beamformer_rhs(const std::array<double, 2> &a, const ChannelRealization &channel,
                                      const SdpTolerances &tol = {});

struct CombinerCoefficients
{
    std::array<double, 2> rho{};
    std::array<double, 2> mu{};
};

CombinerCoefficients combiner_coefficients(const ComplexVector &f, const ChannelRealization &channel,
                                           const SystemParams &params);

struct CombinerResult
{
    HermitianMatrix G;
    ComplexVector g;
    double p_r = 0.0; // max_i (rho_i / |g h_i|^2 + mu_i) at the returned g
    double level = 0.0;
    double rank_ratio = 0.0;
    double raw_rank_ratio = 0.0;
    bool rank_reduced = false;
    bool fallback = false;
    int oracle_calls = 0;
    std::string diagnostic;
};

// The bisection starts from the better of the uniform combiner and
// `incumbent` (if given).
CombinerResult solve_combiner(const ComplexVector &f, const ChannelRealization &channel,
                              const SystemParams &params, const SdpTolerances &tol = {},
                              const ComplexVector *incumbent = nullptr);

// A user with rho_i == 0 is dropped from the objective.
CombinerResult solve_combiner_coeffs(const CombinerCoefficients &coeffs, const ChannelRealization &channel,
                                     const SdpTolerances &tol = {}, const ComplexVector *incumbent = nullptr);

struct BetaInterval
{
    double lower = 0.0;
    double upper = 0.0;
};

// Splitting ratios that keep user i's constraints satisfied at relay power p_r.
BetaInterval beta_interval(std::size_t user, double p_r, const ComplexVector &f, const ComplexVector &g,
                           const ChannelRealization &channel, const SystemParams &params);

// Closed-form splitting ratios (the midpoint of beta_interval). Throws
// Infeasible when an interval is empty.
std::array<double, 2> recover_beta(double p_r, const ComplexVector &f, const ComplexVector &g,
                                   const ChannelRealization &channel, const SystemParams &params);

struct TransceiverDesign
{
    ComplexVector f;
    ComplexVector g;
    double p_r = 0.0;
    std::array<double, 2> beta{};
    std::array<double, 2> p_uplink{}; // eta (1 - beta_i) P_r dl_i - 2 P_c
    std::array<double, 2> gamma{};    // achieved second-moment ratio, diagnostic only
};

// Fills beta, uplink powers and gamma for a given (f, g, P_r).
TransceiverDesign complete_design(const ComplexVector &f, const ComplexVector &g, double p_r,
                                  const ChannelRealization &channel, const SystemParams &params);

struct RateReport
{
    std::array<double, 2> uplink_rate{};         // R_{i,r}
    std::array<double, 2> downlink_rate{};       // R_{r,i}, splitter noise lumped into sigma^2
    std::array<double, 2> downlink_rate_exact{}; // R_{r,i} with the sigma_a^2 / sigma_p^2 split
    std::array<double, 2> end_to_end{};          // R_1 = min(R_{1,r}, R_{r,2}), R_2 likewise
    std::array<double, 2> uplink_margin{};       // R_{i,r} - target_i
    std::array<double, 2> downlink_margin{};     // R_{r,i} - target_{3-i}
    std::array<double, 2> gamma{};
    double alpha = 0.0;

    double min_margin() const;
};

RateReport verify_rates(const TransceiverDesign &design, const ChannelRealization &channel,
                        const SystemParams &params);

} // namespace twrc
