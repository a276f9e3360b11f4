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

// Small dense semidefinite programs
//
//     min (or max)  Tr(C X)
//     s.t.          Tr(A_k X)  {>=, =, <=}  b_k,   k = 1..m
//                   X ⪰ 0
//
// solved by an infeasible primal-dual interior-point method (HKM search
// direction, Mehrotra predictor-corrector). Inequalities get one
// non-negative slack each. Hermitian instances are solved through their
// real symmetric embedding.
//
// Residuals are relative:
//     primal = ||b - A(X) - slack|| / (1 + ||b||)
//     dual   = ||C - sum y_k A_k - Z||_F / (1 + ||C||_F)
//     gap    = |Tr(CX) - b'y| / (1 + |Tr(CX)| + |b'y|)

#pragma once

#include "twrc/numerics.hpp"

#include <functional>
#include <vector>

namespace twrc
{

enum class Relation
{
    GreaterEqual,
    Equal,
    LessEqual
};

enum class Sense
{
    Minimize,
    Maximize
};

enum class SdpStatus
{
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure
};

const char *status_name(SdpStatus status) noexcept;

struct SdpTolerances
{
    double feasibility = 1e-8;
    double gap = 1e-7;
    double psd = 1e-9;
    int max_iterations = 200;
};

struct KktResiduals
{
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
};

struct SdpConstraint
{
    HermitianMatrix a;
    Relation relation = Relation::GreaterEqual;
    double rhs = 0.0;
};

struct SdpInstance
{
    HermitianMatrix objective;
    Sense sense = Sense::Minimize;
    std::vector<SdpConstraint> constraints;

    std::size_t dimension() const noexcept { return objective.dim(); }
};

struct SdpSolution
{
    HermitianMatrix x;
    double objective_value = 0.0;
    double dual_bound = 0.0;         // b'y of the final dual iterate
    std::vector<double> multipliers; // y, for the minimization form
    SdpStatus status = SdpStatus::NumericalFailure;
    KktResiduals kkt;
    int iterations = 0;
};

// Hermitian instances: N <= 16, at most 8 constraints.
SdpSolution solve_sdp(const SdpInstance &instance, const SdpTolerances &tol = {});

struct RealSdpConstraint
{
    RealMatrix a;
    Relation relation = Relation::GreaterEqual;
    double rhs = 0.0;
};

struct RealSdpInstance
{
    RealMatrix objective;
    Sense sense = Sense::Minimize;
    std::vector<RealSdpConstraint> constraints;
};

struct RealSdpSolution
{
    RealMatrix x;
    double objective_value = 0.0;
    double dual_bound = 0.0;
    std::vector<double> multipliers;
    SdpStatus status = SdpStatus::NumericalFailure;
    KktResiduals kkt;
    int iterations = 0;
};

// Real symmetric instances: dimension <= 32, at most 8 constraints.
RealSdpSolution solve_real_sdp(const RealSdpInstance &instance, const SdpTolerances &tol = {});

struct BisectionResult
{
    double level = 0.0;    // smallest feasible level found
    double lower = 0.0;    // largest level known infeasible (== level if lo was feasible)
    int oracle_calls = 0;  // including the two endpoint probes
    int interior_calls = 0;
};

// Monotone level-set bisection: `feasible` must be false below some threshold
// and true above it. Probes lo (returns it when already feasible) and hi
// (BracketError when infeasible), then halves until hi - lo <= tol, using at
// most ceil(log2((hi - lo) / tol)) interior probes.
BisectionResult bisect_level(const std::function<bool(double)> &feasible, double lo, double hi, double tol);

} // namespace twrc
