#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace erobot {

/// The single seeded generator of a session. Counts raw engine draws so a
/// snapshot can store (seed, draws) and resume the exact stream.
class SessionRng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit SessionRng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    result_type operator()()
    {
        ++draws_;
        return engine_();
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return draws_; }

    /// Reseeds and fast-forwards to the given draw count.
    void restore(std::uint64_t seed, std::uint64_t draws);

    /// Uniform index in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);
    /// Uniform real in [lo, hi).
    double uniform_real(double lo, double hi);

private:
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

} // namespace erobot
