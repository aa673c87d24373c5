#include "fragsim/rng.hpp"

#include <cmath>

namespace fragsim {

double Rng::exponential() noexcept { return -std::log(1.0 - uniform()); }

}  // namespace fragsim
