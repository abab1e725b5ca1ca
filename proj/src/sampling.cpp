#include "fpt/sampling.hpp"

#include <cmath>

namespace fpt {

double SplitMix64::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    SplitMix64 mix(seed ^ (stream * 0xd1342543de82ef95ULL) ^ (index * 0x2545f4914f6cdd1dULL));
    mix.next();
    return mix.next();
}

Vector sample_direction(Eigen::Index d, SplitMix64& rng) {
    Vector v(d);
    double n = 0.0;
    do {
        for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
        n = v.norm();
    } while (n == 0.0);
    return v / n;
}

Vector sample_in_region(const Region& region, SplitMix64& rng) {
    const Eigen::Index d = region.dimension();
    if (region.kind() == Region::Kind::Ball) {
        const Vector dir = sample_direction(d, rng);
        const double r = region.radius() * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
        return region.center() + r * dir;
    }
    Vector x(d);
    for (Eigen::Index i = 0; i < d; ++i)
        x(i) = region.center()(i) + region.halfwidths()(i) * rng.uniform(-1.0, 1.0);
    return x;
}

}  // namespace fpt
