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

#pragma once

#include <stdexcept>
#include <string>

namespace twrc
{

enum class ErrorCode
{
    InvalidArgument,   // malformed input, dimension mismatch
    DomainError,       // value outside the mathematical domain of an operation
    DegenerateChannel, // zero effective channel gain
    Infeasible,        // requested operating point admits no solution
    SolverFailure,     // iteration cap or numerical breakdown
    NestingViolation,  // lattice chain is not nested
    BracketError,      // bisection bracket not monotone
    IoError,
    Usage
};

const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace twrc
