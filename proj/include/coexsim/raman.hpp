#pragma once

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coexsim/units.hpp"

// Spontaneous-Raman-scattering photon counts per detection gate in the
// quantum channel, for single and multiple classical channels, in co- and
// counter-propagating configurations.

namespace coexsim {

enum class Direction { co, counter };

inline const char* to_string(Direction d) { return d == Direction::co ? "co" : "counter"; }

inline Direction direction_from_string(const std::string& s) {
    if (s == "co") return Direction::co;
    if (s == "counter") return Direction::counter;
    throw std::invalid_argument("unknown direction '" + s + "' (expected co|counter)");
}

// Per-channel slope coefficients of the v-shaped linear SRS model.
// s applies to data channels below the quantum channel (i < i_q),
// a to channels above it (i > i_q). Normalized to ref_bandwidth.
struct RamanSlopes {
    double s_per_km = 0.0;
    double a_per_km = 0.0;
    double ref_bandwidth_hz = 10e9;
    Direction direction = Direction::co;

    // Measured defaults, 10 GHz reference bandwidth.
    static RamanSlopes measured(Direction d) {
        if (d == Direction::co) return {6.9e-12, 11.5e-12, 10e9, d};
        return {6.8e-12, 10.8e-12, 10e9, d};
    }
};

struct ChannelPlan {
    ItuChannel quantum_channel{39};
    std::vector<std::pair<ItuChannel, Power>> data_channels;
    Direction direction = Direction::co;

    void validate() const {
        for (const auto& [ch, p] : data_channels) {
            if (ch == quantum_channel)
                throw std::invalid_argument("data channel coincides with quantum channel " +
                                            std::to_string(ch.index));
            if (p.watts < 0.0) throw std::invalid_argument("negative channel power");
        }
    }
};

struct DetectionParams {
    double eta = 0.045;                 // end-to-end detection efficiency
    double tau_s = 1e-9;                // detection gate length
    double filter_bandwidth_hz = 10e9;  // quantum-channel filter FWHM
    double p_dark = 0.85e-6;            // per gate per detector

    void validate() const {
        if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0,1]");
        if (!(tau_s > 0.0)) throw std::invalid_argument("tau must be > 0");
        if (!(filter_bandwidth_hz > 0.0)) throw std::invalid_argument("filter bandwidth must be > 0");
        if (!(p_dark >= 0.0 && p_dark < 1.0)) throw std::invalid_argument("p_dark must be in [0,1)");
    }
};

struct FiberParams {
    double alpha_mean_per_km = 0.0484;  // average attenuation
    double alpha_q_per_km = 0.0484;     // attenuation at the quantum channel
    double excess_loss_db = 0.0;        // lumped non-fiber loss

    void validate() const {
        if (!(alpha_mean_per_km > 0.0)) throw std::invalid_argument("alpha_mean must be > 0");
        if (excess_loss_db < 0.0) throw std::invalid_argument("excess_loss_db must be >= 0");
    }
};

// Linear model is only trusted near the quantum channel; beyond this the
// measured spectrum shows non-linear structure.
inline constexpr int slope_model_validity_channels = 15;

// Per-km SRS coefficient for one data channel: slope x channel separation,
// scaled linearly from the reference filter bandwidth.
inline double beta_coefficient(const RamanSlopes& slopes, ItuChannel ch, ItuChannel q,
                               double bandwidth_hz) {
    if (ch == q) throw std::invalid_argument("data channel equals quantum channel");
    const int sep = std::abs(ch.index - q.index);
    if (sep > slope_model_validity_channels) {
        std::cerr << "warning: channel separation " << sep
                  << " exceeds linear slope-model validity (+-" << slope_model_validity_channels
                  << " channels)\n";
    }
    const double slope = ch.index < q.index ? slopes.s_per_km : slopes.a_per_km;
    return slope * sep * (bandwidth_hz / slopes.ref_bandwidth_hz);
}

// Distance kernel of the scattered-power accumulation, km. Co-propagating
// noise walks with the signal (z exp(-az)); counter-propagating noise
// integrates the backward round trip and saturates at 1/(2a).
inline double propagation_kernel(Direction d, double z_km, double alpha_per_km) {
    if (d == Direction::co) return z_km * std::exp(-alpha_per_km * z_km);
    return (1.0 - std::exp(-2.0 * alpha_per_km * z_km)) / (2.0 * alpha_per_km);
}

// Counts per detection gate from one classical channel with SRS coefficient
// beta (km^-1) at launch power p0.
inline double srs_counts_single(Direction d, Power p0, double z_km, double beta_per_km,
                                const FiberParams& fiber, const DetectionParams& det,
                                OpticalFrequency f_q) {
    if (z_km < 0.0) throw std::invalid_argument("fiber length must be >= 0");
    fiber.validate();
    det.validate();
    const double kernel = propagation_kernel(d, z_km, fiber.alpha_mean_per_km);
    const double excess = db_to_linear(-fiber.excess_loss_db);
    return p0.watts * beta_per_km * kernel * excess * det.eta * det.tau_s / photon_energy(f_q);
}

// Counts per gate summed over all channels of the plan.
inline double srs_counts_multi(const ChannelPlan& plan, double z_km, const RamanSlopes& slopes,
                               const FiberParams& fiber, const DetectionParams& det) {
    if (plan.direction != slopes.direction)
        throw std::invalid_argument("plan/slopes direction mismatch");
    plan.validate();
    const OpticalFrequency f_q = channel_to_frequency(plan.quantum_channel);
    double total = 0.0;
    for (const auto& [ch, p0] : plan.data_channels) {
        const double beta = beta_coefficient(slopes, ch, plan.quantum_channel, det.filter_bandwidth_hz);
        total += srs_counts_single(plan.direction, p0, z_km, beta, fiber, det, f_q);
    }
    return total;
}

}  // namespace coexsim
