#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Decoy-state BB84 key-rate model in the infinite-decoy limit: channel
// transmittance, photon-number yields, gain, QBER and the secure-rate lower
// bound, with SRS noise folded into the vacuum yield.

namespace coexsim {

// Error-correction inefficiency f(E): piecewise-linear over a user table,
// constant fallback when the table is empty. The fallback value is a common
// convention, not a measured quantity.
struct ErrorCorrectionInefficiency {
    std::vector<std::pair<double, double>> table;  // (qber, f) sorted by qber
    double fallback = 1.22;

    double operator()(double e) const {
        if (table.empty()) return fallback;
        if (e <= table.front().first) return table.front().second;
        if (e >= table.back().first) return table.back().second;
        for (std::size_t i = 1; i < table.size(); ++i) {
            if (e <= table[i].first) {
                const auto& [x0, y0] = table[i - 1];
                const auto& [x1, y1] = table[i];
                return y0 + (y1 - y0) * (e - x0) / (x1 - x0);
            }
        }
        return table.back().second;
    }
};

struct QkdSystemParams {
    double mu = 0.50;              // mean photons per signal interval
    double eta_bob = 0.045;        // Bob apparatus transmittance (lumped with detector by default)
    double eta_spd = 1.0;          // detector efficiency
    double p_dark = 0.85e-6;       // per gate per detector
    double misalignment = 0.033;   // gamma
    double alpha_per_km = 0.0484;  // fiber attenuation at the quantum channel
    ErrorCorrectionInefficiency f_ec;

    void validate() const {
        if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
        if (!(eta_bob > 0.0 && eta_bob <= 1.0)) throw std::invalid_argument("eta_bob in (0,1]");
        if (!(eta_spd > 0.0 && eta_spd <= 1.0)) throw std::invalid_argument("eta_spd in (0,1]");
        if (!(p_dark >= 0.0 && p_dark < 1.0)) throw std::invalid_argument("p_dark in [0,1)");
        if (!(misalignment >= 0.0 && misalignment < 0.5))
            throw std::invalid_argument("misalignment in [0,0.5)");
        if (!(alpha_per_km > 0.0)) throw std::invalid_argument("alpha must be > 0");
    }
};

enum class ModulationKind { psk, ook_rz };

// Duty-cycle factor scaling the SRS contribution to the vacuum yield.
struct ModulationFormat {
    ModulationKind kind = ModulationKind::psk;
    double kappa = 1.0;

    static ModulationFormat psk() { return {ModulationKind::psk, 1.0}; }
    static ModulationFormat ook_rz() { return {ModulationKind::ook_rz, 0.25}; }
};

inline ModulationFormat modulation_from_string(const std::string& s) {
    if (s == "psk") return ModulationFormat::psk();
    if (s == "ook-rz" || s == "ook_rz") return ModulationFormat::ook_rz();
    throw std::invalid_argument("unknown modulation '" + s + "' (expected psk|ook-rz)");
}

struct KeyRatePoint {
    double length_km = 0.0;
    double q = 0.0;   // overall gain
    double e = 0.0;   // QBER
    double y0 = 0.0;  // vacuum yield
    double r = 0.0;   // secure bits per signal interval, unclamped
    bool saturated_error = false;
};

inline double transmittance(const QkdSystemParams& p, double length_km) {
    if (length_km < 0.0) throw std::invalid_argument("length must be >= 0");
    return std::exp(-p.alpha_per_km * length_km) * p.eta_bob * p.eta_spd;
}

// Y0 = 2 P_dark + kappa P_srs: two detectors, unpolarized noise.
inline double vacuum_yield(double p_dark, double kappa, double p_srs) {
    return 2.0 * p_dark + kappa * p_srs;
}

inline double yield_n(double y0, double eta, int n) {
    if (n < 0) throw std::invalid_argument("photon number must be >= 0");
    return y0 + 1.0 - std::pow(1.0 - eta, n);
}

inline double gain(double y0, double eta, double mu) { return y0 + 1.0 - std::exp(-mu * eta); }

inline double qber(double y0, double eta, double mu, double misalignment) {
    const double q = gain(y0, eta, mu);
    if (q <= 0.0) throw std::domain_error("QBER undefined at zero gain");
    return (0.5 * y0 + misalignment * (1.0 - std::exp(-mu * eta))) / q;
}

inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy domain is [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Secure-rate lower bound per signal interval. Negative values are returned
// as-is; clamping is the caller's choice.
inline KeyRatePoint evaluate_key_rate(const QkdSystemParams& p, const ModulationFormat& mod,
                                      double p_srs, double length_km) {
    p.validate();
    KeyRatePoint pt;
    pt.length_km = length_km;
    const double eta = transmittance(p, length_km);
    pt.y0 = vacuum_yield(p.p_dark, mod.kappa, p_srs);
    pt.q = gain(pt.y0, eta, p.mu);
    pt.e = qber(pt.y0, eta, p.mu, p.misalignment);
    const double y1 = yield_n(pt.y0, eta, 1);
    const double q1 = y1 * p.mu * std::exp(-p.mu);
    const double e1 = std::min((0.5 * pt.y0 + p.misalignment * eta) / y1, 1.0);
    const double e_clamped = std::min(pt.e, 1.0);
    pt.r = 0.5 * (q1 * (1.0 - binary_entropy(e1)) -
                  pt.q * p.f_ec(e_clamped) * binary_entropy(e_clamped));
    pt.saturated_error = pt.e >= 0.5;
    return pt;
}

inline double secure_key_rate(const QkdSystemParams& p, const ModulationFormat& mod, double p_srs,
                              double length_km) {
    return evaluate_key_rate(p, mod, p_srs, length_km).r;
}

}  // namespace coexsim
