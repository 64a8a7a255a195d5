#include "feedaudit/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace feedaudit {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

Rng::Rng(std::uint64_t seed) {
    // expand one 64-bit seed into the full xoshiro state
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

double Rng::normal(double mean, double sd) {
    return mean + sd * normal();
}

double Rng::lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
}

double Rng::gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("Rng::gamma: shape must be positive");
    if (shape < 1.0) {
        const double u = uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double a, double b) {
    const double ga = gamma(a);
    const double gb = gamma(b);
    return ga / (ga + gb);
}

std::int64_t Rng::poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("Rng::poisson: lambda must be non-negative");
    if (lambda == 0.0) return 0;
    if (lambda < 30.0) {
        // Knuth product method
        const double l = std::exp(-lambda);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > l);
        return k - 1;
    }
    // Atkinson's logistic envelope for large lambda
    const double c = 0.767 - 3.36 / lambda;
    const double beta_ = M_PI / std::sqrt(3.0 * lambda);
    const double alpha = beta_ * lambda;
    const double k = std::log(c) - lambda - std::log(beta_);
    for (;;) {
        const double u = uniform();
        if (u <= 0.0 || u >= 1.0) continue;
        const double x = (alpha - std::log((1.0 - u) / u)) / beta_;
        const auto n = static_cast<std::int64_t>(std::floor(x + 0.5));
        if (n < 0) continue;
        const double v = uniform();
        const double y = alpha - beta_ * x;
        const double t = 1.0 + std::exp(y);
        const double lhs = y + std::log(v / (t * t));
        const double rhs = k + n * std::log(lambda) - std::lgamma(static_cast<double>(n) + 1.0);
        if (lhs <= rhs) return n;
    }
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
    if (n < 0) throw std::invalid_argument("Rng::binomial: n must be non-negative");
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n <= 64) {
        std::int64_t k = 0;
        for (std::int64_t i = 0; i < n; ++i)
            if (uniform() < p) ++k;
        return k;
    }
    // Exact recursive beta split; O(log n) beta draws for any n.
    const std::int64_t i = (n + 1) / 2;
    const double v = beta(static_cast<double>(i), static_cast<double>(n + 1 - i));
    if (v <= p) return i + binomial(n - i, (p - v) / (1.0 - v));
    return binomial(i - 1, p / v);
}

std::int64_t poisson_icdf(double lambda, double u) {
    if (lambda < 0.0) throw std::invalid_argument("poisson_icdf: lambda must be non-negative");
    if (lambda == 0.0) return 0;
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    std::int64_t k = 0;
    // u < 1 always (uniform() excludes 1); cap guards pathological lambda
    const std::int64_t cap = static_cast<std::int64_t>(lambda + 12.0 * std::sqrt(lambda) + 64.0);
    while (cdf < u && k < cap) {
        ++k;
        pmf *= lambda / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

std::int64_t binomial_icdf(std::int64_t n, double p, double u) {
    if (n < 0) throw std::invalid_argument("binomial_icdf: n must be non-negative");
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const double q = 1.0 - p;
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cdf = pmf;
    std::int64_t k = 0;
    const double ratio = p / q;
    while (cdf < u && k < n) {
        ++k;
        pmf *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

}  // namespace feedaudit
