#ifndef MPROX_RNG_HPP
#define MPROX_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace mprox {

/// A named sub-stream of the run's global seed. The same (seed, label) pair
/// always yields the same draw sequence, and distinct labels are decorrelated,
/// so adding a consumer does not perturb existing ones. Variate generation is
/// hand-rolled from the raw mt19937_64 output to stay bit-identical across
/// standard library implementations.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 gen_;
};

} // namespace mprox

#endif
