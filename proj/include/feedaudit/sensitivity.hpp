#pragma once

#include <span>
#include <vector>

#include "feedaudit/pool.hpp"

namespace feedaudit {

struct Unreachable : DataError {
    using DataError::DataError;
};
struct NonMonotone : DataError {
    using DataError::DataError;
};

struct SensitivitySpec {
    DistSpec base;  // the Dem-arm latent-metric distribution
    double target_skew = 0.0;
    int mc_trials = 200;
    double search_tolerance = 1e-3;

    void validate() const;
};

// s(delta): expected sampled skew when Rep items draw the latent metric from
// the base family with its mean shifted by delta while everything else draws
// from the base. Metric draws reuse one set of common random numbers, so
// s is exactly non-decreasing in delta.
class SensitivityEvaluator {
public:
    SensitivityEvaluator(std::span<const Alignment> pool, const SensitivitySpec& spec, Rng& rng);

    double expected_skew(double delta) const;  // s(delta)
    double lower_delta_bound() const { return lo_bound_; }
    double upper_delta_bound() const { return hi_bound_; }

private:
    std::vector<Alignment> pool_;
    SensitivitySpec spec_;
    std::vector<double> uniforms_;  // trial-major CRN draws
    std::vector<double> normals_;
    double lo_bound_ = 0.0;
    double hi_bound_ = 0.0;
};

struct SensitivityResult {
    double k = 0.0;           // delta_star / observed_metric_gap
    double delta_star = 0.0;  // mean shift matching the target skew
    double skew_at_delta = 0.0;
    int evaluations = 0;
};

// Bisection over delta for |s(delta) - target| < tolerance; k carries the
// sign of delta_star / observed_metric_gap.
SensitivityResult sensitivity_required_scaling(std::span<const Alignment> pool,
                                               const SensitivitySpec& spec,
                                               double observed_metric_gap, Rng& rng);

}  // namespace feedaudit
