#pragma once

#include <string>
#include <vector>

#include "coexsim/qkd.hpp"
#include "coexsim/raman.hpp"

// Sweep drivers: key-rate-vs-distance curves, maximum achievable distance,
// and max-distance-vs-per-channel-power sweeps.

namespace coexsim {

// Fixed parameters shared by every point of a sweep.
struct SweepSettings {
    ChannelPlan plan;
    RamanSlopes slopes;
    FiberParams fiber;
    DetectionParams det;
    QkdSystemParams qkd;
    ModulationFormat modulation = ModulationFormat::psk();
};

struct SweepResult {
    std::string abscissa_name;
    std::vector<double> grid;
    std::vector<KeyRatePoint> points;        // keyrate sweeps
    std::vector<double> max_distance_km;     // power sweeps
    std::vector<bool> feasible;              // power sweeps
};

struct MaxDistanceResult {
    double length_km = 0.0;
    bool feasible = false;  // false when R(0) <= 0
};

class AmbiguousRootError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// SRS noise per gate for the settings at distance L.
double srs_at(const SweepSettings& s, double length_km);

// Full key-rate evaluation with SRS recomputed at the given distance.
KeyRatePoint key_rate_at(const SweepSettings& s, double length_km);

// R(L) sampled on [start, stop] with the given step.
SweepResult keyrate_curve(const SweepSettings& s, double start_km, double stop_km, double step_km);

// Largest L with R(L) > 0: coarse 1 km scan over [0, 200] verifying a single
// sign change, then bisection to 0.01 km. R(0) <= 0 is reported as
// infeasible; more than one sign change throws AmbiguousRootError.
MaxDistanceResult max_distance(const SweepSettings& s, double coarse_stop_km = 200.0,
                               double coarse_step_km = 1.0, double tol_km = 0.01);

// max_distance per point of a uniform per-channel power grid (dBm).
SweepResult max_distance_vs_power(const SweepSettings& s, const std::vector<double>& power_dbm_grid);

// Helper building a uniform grid including the endpoint (within half a step).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace coexsim
