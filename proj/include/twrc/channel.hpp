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

#include "twrc/numerics.hpp"

#include <cstdint>

namespace twrc
{

// Uplink channel vectors of the two users (N relay antennas). The downlink
// uses the same vectors by reciprocity.
struct ChannelRealization
{
    ComplexVector h1;
    ComplexVector h2;
    std::uint64_t seed = 0;

    std::size_t antennas() const noexcept { return h1.size(); }

    // user is 0 or 1
    const ComplexVector &user(std::size_t i) const noexcept { return i == 0 ? h1 : h2; }
};

} // namespace twrc
