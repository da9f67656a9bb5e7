#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "coexsim/units.hpp"

// Four-wave-mixing relevance estimates: nonlinear parameter, the gamma*P0*L
// negligibility test, propagation-constant mismatch for a DWDM channel
// triple, and the phase-match efficiency factor.

namespace coexsim {

struct NonlinearParams {
    double n2_m2_per_w = 2.6e-20;  // nonlinear index
    double a_eff_m2 = 50e-12;      // effective area

    void validate() const {
        if (!(n2_m2_per_w > 0.0 && a_eff_m2 > 0.0))
            throw std::invalid_argument("nonlinear params must be > 0");
    }
};

struct DispersionParams {
    double d_c_s_per_m2 = 16e-6;    // 16 ps km^-1 nm^-1
    double d_slope_s_per_m3 = 0.0;  // dD_c/dlambda; default 0, user-overridable
    double lambda_eval_m = 1550e-9;

    static double dc_from_ps_km_nm(double v) { return v * 1e-12 / (1e3 * 1e-9); }
    static double slope_from_ps_km_nm2(double v) { return v * 1e-12 / (1e3 * 1e-18); }
};

// gamma = n2 * omega / (c * A_eff), W^-1 m^-1.
inline double nonlinear_gamma(const NonlinearParams& nl, OpticalFrequency f) {
    nl.validate();
    if (f.hz < 0.0) throw std::invalid_argument("negative frequency");
    const double omega = 2.0 * std::numbers::pi * f.hz;
    return nl.n2_m2_per_w * omega / (constants::speed_of_light * nl.a_eff_m2);
}

struct NegligibilityResult {
    bool negligible = false;
    double margin = 0.0;  // 0.1 - gamma*P0*L
    double product = 0.0;
};

// FWM is treated as negligible while gamma*P0*L stays strictly below 0.1.
inline NegligibilityResult fwm_negligible(double gamma_per_w_m, Power p0, double length_m) {
    if (gamma_per_w_m < 0.0 || p0.watts < 0.0 || length_m < 0.0)
        throw std::invalid_argument("fwm_negligible requires non-negative inputs");
    const double product = gamma_per_w_m * p0.watts * length_m;
    return {product < 0.1, 0.1 - product, product};
}

// Propagation-constant mismatch for waves i, j, k generating f_i + f_j - f_k,
// in the mixed frequency/dispersion-parameter form:
//   dk = (2 pi lam_k^2 / c) dF_ik dF_jk [ D_c + (lam_k^2 / 2c) dF_eq dD_c/dlam ]
// with dF_eq = sqrt(dF_ik dF_jk).
inline double delta_k(const DispersionParams& disp, OpticalFrequency f_i, OpticalFrequency f_j,
                      OpticalFrequency f_k) {
    if (!(f_i.hz > 0.0 && f_j.hz > 0.0 && f_k.hz > 0.0))
        throw std::invalid_argument("frequencies must be positive");
    const double c = constants::speed_of_light;
    const double lam_k = c / f_k.hz;
    const double df_ik = std::abs(f_i.hz - f_k.hz);
    const double df_jk = std::abs(f_j.hz - f_k.hz);
    const double df_eq = std::sqrt(df_ik * df_jk);
    const double bracket =
        disp.d_c_s_per_m2 + (lam_k * lam_k / (2.0 * c)) * df_eq * disp.d_slope_s_per_m3;
    return (2.0 * std::numbers::pi * lam_k * lam_k / c) * df_ik * df_jk * bracket;
}

// Phase-match efficiency factor. The default uses the canonical
// sin^2(dk L / 2) argument; strict_sin_arg restores sin^2(dk L).
inline double fwm_efficiency(double alpha_per_m, double dk_per_m, double length_m,
                             bool strict_sin_arg = false) {
    if (!(alpha_per_m > 0.0 && length_m > 0.0))
        throw std::invalid_argument("fwm_efficiency requires alpha > 0 and L > 0");
    const double a2 = alpha_per_m * alpha_per_m;
    const double prefactor = a2 / (a2 + dk_per_m * dk_per_m);
    const double arg = strict_sin_arg ? dk_per_m * length_m : dk_per_m * length_m / 2.0;
    const double s = std::sin(arg);
    const double decay = std::exp(-alpha_per_m * length_m);
    const double denom = (1.0 - decay) * (1.0 - decay);
    return prefactor * (1.0 + 4.0 * decay * s * s / denom);
}

inline double alpha_per_m_from_db_per_km(double db_per_km) {
    return db_per_km * std::numbers::ln10 / 10.0 / 1000.0;
}

}  // namespace coexsim
