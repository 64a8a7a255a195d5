#include "feedaudit/sensitivity.hpp"

#include <cmath>
#include <limits>

#include "feedaudit/stats.hpp"

namespace feedaudit {

void SensitivitySpec::validate() const {
    if (mc_trials < 1) throw InvalidSpec("sensitivity mc_trials must be >= 1");
    if (search_tolerance <= 0.0) throw InvalidSpec("sensitivity search_tolerance must be positive");
    if (!std::isfinite(target_skew) || target_skew < -1.0 || target_skew > 1.0)
        throw InvalidSpec("sensitivity target_skew outside [-1,1]");
    if (base.family == DistFamily::Binomial && (base.p1 < 1.0 || base.p2 < 0.0 || base.p2 > 1.0))
        throw InvalidSpec("binomial base needs n >= 1 and p in [0,1]");
    if (base.family == DistFamily::Lognormal && base.p1 <= 0.0)
        throw InvalidSpec("lognormal base needs a positive mean");
    if (base.family == DistFamily::Poisson && base.p1 < 0.0)
        throw InvalidSpec("poisson base needs a non-negative rate");
}

SensitivityEvaluator::SensitivityEvaluator(std::span<const Alignment> pool,
                                           const SensitivitySpec& spec, Rng& rng)
    : pool_(pool.begin(), pool.end()), spec_(spec) {
    spec_.validate();
    if (pool_.empty()) throw EmptyPool("sensitivity pool is empty");
    bool any_rep = false, any_other = false;
    for (Alignment a : pool_) (a == Alignment::RepAligned ? any_rep : any_other) = true;
    if (!any_rep || !any_other)
        throw DegenerateSample("sensitivity pool needs Rep items and at least one other item");

    const std::size_t n = pool_.size() * static_cast<std::size_t>(spec_.mc_trials);
    uniforms_.resize(n);
    normals_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        uniforms_[i] = rng.uniform();
        normals_[i] = rng.normal();
    }

    const double m = spec_.base.mean();
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (spec_.base.family) {
        case DistFamily::Normal:
            lo_bound_ = -inf;
            hi_bound_ = inf;
            break;
        case DistFamily::Lognormal:
            lo_bound_ = -m * (1.0 - 1e-9);  // keeps the shifted mean positive
            hi_bound_ = inf;
            break;
        case DistFamily::Poisson:
            lo_bound_ = -m;
            hi_bound_ = inf;
            break;
        case DistFamily::Binomial:
            lo_bound_ = -spec_.base.p2 * spec_.base.p1;          // p drops to 0
            hi_bound_ = (1.0 - spec_.base.p2) * spec_.base.p1;   // p reaches 1
            break;
    }
}

double SensitivityEvaluator::expected_skew(double delta) const {
    const DistSpec shifted = spec_.base.with_mean_shift(delta);
    double total_skew = 0.0;
    std::size_t idx = 0;
    for (int t = 0; t < spec_.mc_trials; ++t) {
        double rep = 0.0, dem = 0.0, other = 0.0;
        for (std::size_t i = 0; i < pool_.size(); ++i, ++idx) {
            const DistSpec& d = pool_[i] == Alignment::RepAligned ? shifted : spec_.base;
            const double w = d.sample_icdf(uniforms_[idx], normals_[idx]);
            if (pool_[i] == Alignment::RepAligned)
                rep += w;
            else if (pool_[i] == Alignment::DemAligned)
                dem += w;
            else
                other += w;
        }
        const double sum = rep + dem + other;
        total_skew += sum > 0.0 ? (rep - dem) / sum : 0.0;
    }
    return total_skew / static_cast<double>(spec_.mc_trials);
}

SensitivityResult sensitivity_required_scaling(std::span<const Alignment> pool,
                                               const SensitivitySpec& spec,
                                               double observed_metric_gap, Rng& rng) {
    if (observed_metric_gap == 0.0)
        throw InvalidSpec("sensitivity needs a non-zero observed metric gap");

    SensitivityEvaluator eval(pool, spec, rng);
    int evals = 0;
    auto s = [&](double delta) {
        ++evals;
        return eval.expected_skew(delta);
    };

    const double s0 = s(0.0);
    double lo = 0.0, hi = 0.0;
    double s_lo = s0, s_hi = s0;
    if (spec.target_skew >= s0) {
        // expand upward until the target is bracketed
        double step = std::fabs(observed_metric_gap);
        for (int i = 0; s_hi < spec.target_skew; ++i) {
            if (i >= 80 || hi >= eval.upper_delta_bound())
                throw Unreachable("target skew above the attainable range for this family");
            hi = std::min(eval.upper_delta_bound(), hi + step);
            step *= 2.0;
            const double v = s(hi);
            if (v + 1e-12 < s_hi)
                throw NonMonotone("sampled skew fell while expanding; increase mc_trials");
            s_hi = v;
        }
    } else {
        double step = std::fabs(observed_metric_gap);
        for (int i = 0; s_lo > spec.target_skew; ++i) {
            if (i >= 80 || lo <= eval.lower_delta_bound())
                throw Unreachable("target skew below the attainable range for this family");
            lo = std::max(eval.lower_delta_bound(), lo - step);
            step *= 2.0;
            const double v = s(lo);
            if (v - 1e-12 > s_lo)
                throw NonMonotone("sampled skew rose while contracting; increase mc_trials");
            s_lo = v;
        }
    }

    double mid = 0.5 * (lo + hi), s_mid = s0;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        s_mid = s(mid);
        if (std::fabs(s_mid - spec.target_skew) < spec.search_tolerance) {
            SensitivityResult result;
            result.delta_star = mid;
            result.skew_at_delta = s_mid;
            result.k = mid / observed_metric_gap;
            result.evaluations = evals;
            return result;
        }
        if (s_mid < spec.target_skew)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, std::fabs(mid))) break;
    }
    throw NonMonotone(
        "bisection cannot resolve the target at this tolerance; increase mc_trials or loosen "
        "search_tolerance");
}

}  // namespace feedaudit
