#include "coexsim/scan.hpp"

#include <cmath>

namespace coexsim {

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("invalid grid range");
    std::vector<double> grid;
    const long n = std::lround((stop - start) / step);
    for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    if (grid.empty() || grid.back() < stop - step / 2.0) grid.push_back(stop);
    return grid;
}

double srs_at(const SweepSettings& s, double length_km) {
    return srs_counts_multi(s.plan, length_km, s.slopes, s.fiber, s.det);
}

KeyRatePoint key_rate_at(const SweepSettings& s, double length_km) {
    return evaluate_key_rate(s.qkd, s.modulation, srs_at(s, length_km), length_km);
}

SweepResult keyrate_curve(const SweepSettings& s, double start_km, double stop_km, double step_km) {
    SweepResult result;
    result.abscissa_name = "length_km";
    result.grid = make_grid(start_km, stop_km, step_km);
    result.points.reserve(result.grid.size());
    for (double l : result.grid) result.points.push_back(key_rate_at(s, l));
    return result;
}

MaxDistanceResult max_distance(const SweepSettings& s, double coarse_stop_km,
                               double coarse_step_km, double tol_km) {
    if (key_rate_at(s, 0.0).r <= 0.0) return {0.0, false};

    // Coarse scan; the positive region must be a single prefix.
    const std::vector<double> grid = make_grid(0.0, coarse_stop_km, coarse_step_km);
    double last_positive = 0.0;
    bool seen_negative = false;
    bool have_bracket = false;
    double bracket_hi = coarse_stop_km;
    for (double l : grid) {
        const bool positive = key_rate_at(s, l).r > 0.0;
        if (positive && seen_negative)
            throw AmbiguousRootError("multiple sign changes of R(L) detected in coarse scan");
        if (positive) {
            last_positive = l;
        } else if (!seen_negative) {
            seen_negative = true;
            have_bracket = true;
            bracket_hi = l;
        }
    }
    if (!have_bracket) return {coarse_stop_km, true};  // still positive at the scan end

    double lo = last_positive;
    double hi = bracket_hi;
    while (hi - lo > tol_km) {
        const double mid = 0.5 * (lo + hi);
        if (key_rate_at(s, mid).r > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, true};
}

SweepResult max_distance_vs_power(const SweepSettings& s,
                                  const std::vector<double>& power_dbm_grid) {
    SweepResult result;
    result.abscissa_name = "power_dbm";
    result.grid = power_dbm_grid;
    for (double dbm : power_dbm_grid) {
        SweepSettings point = s;
        for (auto& [ch, p] : point.plan.data_channels) p = dbm_to_watts(dbm);
        const MaxDistanceResult md = max_distance(point);
        result.max_distance_km.push_back(md.length_km);
        result.feasible.push_back(md.feasible);
    }
    return result;
}

}  // namespace coexsim
