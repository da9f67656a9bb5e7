#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Unit-safe conversions among ITU-T 100 GHz grid channel numbers, optical
// frequency, wavelength, power and photon energy.

namespace coexsim {

namespace constants {
inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
}  // namespace constants

// Grid anchor: f = 190.0 THz + n x 100 GHz, so that channel 39 sits at
// 193.9 THz (1546.12 nm).
inline constexpr double grid_anchor_hz = 190.0e12;
inline constexpr double grid_spacing_hz = 100.0e9;

struct GridRange {
    int lo = 1;
    int hi = 80;
};

struct ItuChannel {
    int index = 0;

    friend bool operator==(ItuChannel a, ItuChannel b) { return a.index == b.index; }
};

struct OpticalFrequency {
    double hz = 0.0;
};

struct Power {
    double watts = 0.0;
};

inline void validate_channel(ItuChannel ch, GridRange range = {}) {
    if (ch.index < range.lo || ch.index > range.hi) {
        throw std::invalid_argument("ITU channel " + std::to_string(ch.index) +
                                    " outside grid range [" + std::to_string(range.lo) + ", " +
                                    std::to_string(range.hi) + "]");
    }
}

inline OpticalFrequency channel_to_frequency(ItuChannel ch, GridRange range = {}) {
    validate_channel(ch, range);
    return {grid_anchor_hz + static_cast<double>(ch.index) * grid_spacing_hz};
}

inline ItuChannel frequency_to_channel(OpticalFrequency f, GridRange range = {}) {
    const double n = (f.hz - grid_anchor_hz) / grid_spacing_hz;
    const ItuChannel ch{static_cast<int>(std::lround(n))};
    validate_channel(ch, range);
    return ch;
}

inline Power dbm_to_watts(double dbm) {
    if (std::isnan(dbm)) throw std::invalid_argument("NaN power in dBm");
    return {1e-3 * std::pow(10.0, dbm / 10.0)};
}

inline double watts_to_dbm(Power p) {
    if (p.watts <= 0.0) throw std::invalid_argument("non-positive power has no dBm value");
    return 10.0 * std::log10(p.watts / 1e-3);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Photon energy h*f in joules.
inline double photon_energy(OpticalFrequency f) {
    if (f.hz <= 0.0) throw std::invalid_argument("photon energy requires f > 0");
    return constants::planck_h * f.hz;
}

inline double wavelength_m(OpticalFrequency f) {
    if (f.hz <= 0.0) throw std::invalid_argument("wavelength requires f > 0");
    return constants::speed_of_light / f.hz;
}

}  // namespace coexsim
