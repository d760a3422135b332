#include "zigzag/postprocess.hpp"

#include <numeric>

namespace zigzag::postprocess {

void DebiasConfig::validate() const {
    if (l < 2) throw std::invalid_argument("shift-register length l must be >= 2");
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    if (std::gcd(stages, l) != 1)
        throw std::invalid_argument("l must be coprime to the stage count");
}

dynamics::BitStream von_neumann(const dynamics::BitStream& bits) {
    if (bits.size() < 2) throw std::invalid_argument("need at least one pair");
    dynamics::BitStream out;
    for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
        const int a = bits[i];
        const int b = bits[i + 1];
        if (a != b) out.push_back(a);  // 01 -> 0, 10 -> 1
    }
    out.meta = bits.meta;
    out.meta["postprocess"] = "von_neumann";
    return out;
}

dynamics::BitStream xor_debias(const dynamics::BitStream& bits, const DebiasConfig& config) {
    config.validate();
    if (bits.size() <= static_cast<std::size_t>(config.l))
        throw std::invalid_argument("input shorter than the shift register");
    const std::size_t l = static_cast<std::size_t>(config.l);
    std::vector<std::uint8_t> reg(l, 0);  // z_{n-1} .. z_{n-l} ring
    dynamics::BitStream out;
    out.reserve(bits.size() - l);
    for (std::size_t n = 0; n < bits.size(); ++n) {
        const std::size_t slot = n % l;
        const int z = bits[n] ^ reg[slot];  // reg[slot] holds z_{n-l}
        reg[slot] = static_cast<std::uint8_t>(z);
        if (n >= l) out.push_back(z);  // the first l outputs echo the input
    }
    out.meta = bits.meta;
    out.meta["postprocess"] = "xor_debias";
    out.meta["l"] = config.l;
    return out;
}

int choose_l(const analysis::MarkovModel& model, double epsilon, int stages) {
    if (!(model.lambda1 < 1.0)) throw std::invalid_argument("lambda1 must be below 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    const double lam = model.lambda1;
    double pw = lam * lam;  // lambda^l starting at l = 2
    for (int l = 2; l <= 1000000; ++l) {
        if (pw < epsilon && std::gcd(stages, l) == 1) return l;
        pw *= lam;
    }
    throw std::runtime_error("no admissible register length below 10^6");
}

int next_coprime_length(int stages, int l) {
    if (stages < 1 || l < 2) throw std::invalid_argument("bad arguments");
    for (int cand = l + 1;; ++cand)
        if (std::gcd(stages, cand) == 1) return cand;
}

}  // namespace zigzag::postprocess
