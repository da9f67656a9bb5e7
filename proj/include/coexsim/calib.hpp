#pragma once

#include <cstdint>
#include <vector>

#include "coexsim/raman.hpp"

// Extraction of the Stokes/anti-Stokes slope coefficients from photon-count
// datasets by weighted linear least squares.

namespace coexsim {

struct CountRecord {
    ChannelPlan plan;
    double z_km = 0.0;
    double counts_per_gate = 0.0;
    std::int64_t n_gates = 1;
};

struct FitResult {
    double s_hat = 0.0;  // km^-1, per channel separation at ref bandwidth
    double a_hat = 0.0;
    double s_sigma = 0.0;  // standard errors
    double a_sigma = 0.0;
    double dark_hat = 0.0;      // fitted intercept (only when fit_intercept)
    double residual_norm = 0.0; // weighted residual norm
    bool s_identifiable = true;
    bool a_identifiable = true;
};

struct FitOptions {
    bool weighted = true;       // inverse-variance Poisson weights; OLS otherwise
    bool fit_intercept = false; // fit the dark term instead of subtracting it
    double ref_bandwidth_hz = 10e9;
};

class IdentifiabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Fits counts = dark + s * X_s + a * X_a, where X_s / X_a are the propagation
// kernels summed over channels below/above the quantum channel. All records
// must share one direction and span at least two fiber lengths. If exactly
// one side of the quantum channel is populated, the other slope is reported
// with identifiable = false; if neither is, an IdentifiabilityError is thrown.
FitResult fit_slopes(const std::vector<CountRecord>& records, const DetectionParams& det,
                     const FiberParams& fiber, double p_dark_background,
                     const FitOptions& options = {});

}  // namespace coexsim
