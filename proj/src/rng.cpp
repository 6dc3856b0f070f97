#include "beamhop/rng.hpp"

#include <cmath>

namespace beamhop {

int poisson_sample(SplitMix64& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int count = -1;
    double product = 1.0;
    do {
        product *= rng.next_double();
        ++count;
    } while (product > limit);
    return count;
}

}  // namespace beamhop
