#pragma once

#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct ZeroVariance : DataError {
    using DataError::DataError;
};

// First principal component of the column covariance matrix by power
// iteration (residual below 1e-10), sign-flipped so the loading sum is
// positive, then normalized to sum to 1. Input columns are expected to be
// min-max normalized already.
std::vector<double> pca_first_component_weights(const std::vector<std::vector<double>>& columns);

}  // namespace feedaudit
