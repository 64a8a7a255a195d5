#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace feedaudit {

// SplitMix64 step; also used to expand seeds for the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Documented per-run / per-rep stream derivation: two rounds of SplitMix64
// over (master, a, b). Identical tuples always map to identical streams, so
// results do not depend on scheduling or worker count.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = master;
    std::uint64_t m = splitmix64(s);
    s = m ^ (a * 0xA24BAED4963EE407ULL);
    m = splitmix64(s);
    s = m ^ (b * 0x9FB21C651E98DF25ULL);
    return splitmix64(s);
}

std::uint64_t fnv1a64(std::string_view bytes);

// xoshiro256++ with explicit distribution methods. The standard library
// engines are portable but its distributions are not specified bit-for-bit,
// so every draw the toolkit makes goes through this class.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    // uniform in [0, 1)
    double uniform();
    double uniform(double lo, double hi);
    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n);

    double normal();  // standard normal, Marsaglia polar
    double normal(double mean, double sd);
    double lognormal(double mu, double sigma);
    double gamma(double shape);  // scale 1, Marsaglia-Tsang
    double beta(double a, double b);
    std::int64_t poisson(double lambda);
    std::int64_t binomial(std::int64_t n, double p);

private:
    std::array<std::uint64_t, 4> s_{};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Inverse-CDF samplers used where common random numbers are required
// (sensitivity analysis): the same u maps monotonically through the
// parameter, so s(delta) inherits monotonicity exactly.
std::int64_t poisson_icdf(double lambda, double u);
std::int64_t binomial_icdf(std::int64_t n, double p, double u);

}  // namespace feedaudit
