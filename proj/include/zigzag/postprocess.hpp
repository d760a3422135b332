#pragma once

#include "zigzag/analysis.hpp"
#include "zigzag/bitstream.hpp"

namespace zigzag::postprocess {

/// XOR debias parameters: shift-register length l coprime to the pipeline
/// stage count, l >= 2.
struct DebiasConfig {
    int l;
    int stages;

    void validate() const;
};

/// Von Neumann extractor over non-overlapping pairs: 01 -> 0, 10 -> 1, 00/11
/// discarded. Output length is data-dependent.
dynamics::BitStream von_neumann(const dynamics::BitStream& bits);

/// z_n = d_n XOR z_{n-l} with a zero-initialized register; the first l
/// outputs (equal to the inputs) are dropped, so the output has length
/// input - l. Requires input length > l.
dynamics::BitStream xor_debias(const dynamics::BitStream& bits, const DebiasConfig& config);

/// Smallest l >= 2 with lambda1^l < epsilon and gcd(stages, l) = 1.
int choose_l(const analysis::MarkovModel& model, double epsilon, int stages);

/// Next register length above l that is coprime to the stage count; used for
/// the second (decorrelation) pass.
int next_coprime_length(int stages, int l);

}  // namespace zigzag::postprocess
