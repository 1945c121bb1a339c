#include "erobot/rng.hpp"

#include "erobot/symbol.hpp"

namespace erobot {

void SessionRng::restore(std::uint64_t seed, std::uint64_t draws)
{
    seed_ = seed;
    engine_.seed(seed);
    engine_.discard(draws);
    draws_ = draws;
}

std::size_t SessionRng::uniform_index(std::size_t n)
{
    if (n == 0) throw ContractViolation("uniform_index over an empty range");
    if (n == 1) return 0;
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(*this);
}

double SessionRng::uniform_real(double lo, double hi)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(*this);
}

} // namespace erobot
