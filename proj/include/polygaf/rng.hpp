#pragma once

#include <array>
#include <cstdint>

#include "polygaf/common.hpp"

namespace polygaf {

// Philox4x32-10 counter-based generator: a stateless bijective mix of a 128-bit
// counter under a 64-bit key. One block per (seed, trial, coefficient) triple
// gives draws that are reproducible under any parallel schedule.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Standard complex gaussian N_C(0,1): modulus^2 ~ Exp(1), phase uniform, so
// E|a|^2 = 1 and Re/Im are independent N(0, 1/2).
Complex standard_complex_gaussian(std::uint64_t seed, std::uint64_t trial, std::uint64_t index);

// Two independent uniforms in (0,1] x [0,1) from one Philox block.
std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t trial, std::uint64_t index);

}  // namespace polygaf
