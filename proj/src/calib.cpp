#include "coexsim/calib.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace coexsim {

namespace {

constexpr double kCountsFloor = 1e-15;

struct DesignRow {
    double x_s = 0.0;
    double x_a = 0.0;
    double y = 0.0;
    double w = 1.0;

    auto key() const { return std::tie(y, x_s, x_a, w); }
};

}  // namespace

FitResult fit_slopes(const std::vector<CountRecord>& records, const DetectionParams& det,
                     const FiberParams& fiber, double p_dark_background,
                     const FitOptions& options) {
    if (records.empty()) throw std::invalid_argument("no records to fit");
    det.validate();
    fiber.validate();

    const Direction direction = records.front().plan.direction;
    std::set<double> lengths;
    for (const auto& rec : records) {
        if (rec.plan.direction != direction)
            throw std::invalid_argument("records mix co- and counter-propagating data");
        if (rec.z_km < 0.0 || rec.counts_per_gate < 0.0)
            throw std::invalid_argument("negative length or counts in record");
        lengths.insert(rec.z_km);
    }
    if (lengths.size() < 2)
        throw std::invalid_argument("records must span at least two distinct fiber lengths");

    const double excess = db_to_linear(-fiber.excess_loss_db);
    const double bw_scale = det.filter_bandwidth_hz / options.ref_bandwidth_hz;

    std::vector<DesignRow> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) {
        rec.plan.validate();
        const double hv = photon_energy(channel_to_frequency(rec.plan.quantum_channel));
        const double kernel = propagation_kernel(direction, rec.z_km, fiber.alpha_mean_per_km);
        const double gain = kernel * excess * det.eta * det.tau_s / hv;
        DesignRow row;
        for (const auto& [ch, p0] : rec.plan.data_channels) {
            const int sep = std::abs(ch.index - rec.plan.quantum_channel.index);
            const double x = sep * bw_scale * p0.watts * gain;
            if (ch.index < rec.plan.quantum_channel.index)
                row.x_s += x;
            else
                row.x_a += x;
        }
        row.y = options.fit_intercept ? rec.counts_per_gate
                                      : rec.counts_per_gate - p_dark_background;
        if (options.weighted) {
            const double n = rec.n_gates > 0 ? static_cast<double>(rec.n_gates) : 1.0;
            row.w = n / std::max(rec.counts_per_gate, kCountsFloor);
        }
        rows.push_back(row);
    }

    // Canonical row order so the result is independent of record permutation.
    std::sort(rows.begin(), rows.end(),
              [](const DesignRow& a, const DesignRow& b) { return a.key() < b.key(); });

    const bool has_s = std::any_of(rows.begin(), rows.end(),
                                   [](const DesignRow& r) { return r.x_s != 0.0; });
    const bool has_a = std::any_of(rows.begin(), rows.end(),
                                   [](const DesignRow& r) { return r.x_a != 0.0; });
    if (!has_s && !has_a)
        throw IdentifiabilityError(
            "neither slope identifiable: no channels on either side of the quantum channel");

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::Index k = 0;
    const Eigen::Index col_s = has_s ? k++ : -1;
    const Eigen::Index col_a = has_a ? k++ : -1;
    const Eigen::Index col_0 = options.fit_intercept ? k++ : -1;

    Eigen::MatrixXd design(n, k);
    Eigen::VectorXd y(n), sw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (col_s >= 0) design(i, col_s) = rows[i].x_s;
        if (col_a >= 0) design(i, col_a) = rows[i].x_a;
        if (col_0 >= 0) design(i, col_0) = 1.0;
        y(i) = rows[i].y;
        sw(i) = std::sqrt(rows[i].w);
    }

    const Eigen::MatrixXd xw = sw.asDiagonal() * design;
    const Eigen::VectorXd yw = sw.asDiagonal() * y;

    const Eigen::MatrixXd normal = xw.transpose() * xw;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw IdentifiabilityError("rank-deficient design matrix");
    const Eigen::VectorXd theta = ldlt.solve(xw.transpose() * yw);
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(k, k));

    const Eigen::VectorXd resid = yw - xw * theta;
    const double rss = resid.squaredNorm();
    const Eigen::Index dof = n - k;
    // Weighted fits use the true Poisson inverse-variance weights, so the
    // unscaled covariance applies; OLS scales by the residual variance.
    const double var_scale = options.weighted ? 1.0 : (dof > 0 ? rss / dof : 0.0);

    FitResult result;
    result.residual_norm = std::sqrt(rss);
    if (col_s >= 0) {
        result.s_hat = theta(col_s);
        result.s_sigma = std::sqrt(std::max(cov(col_s, col_s) * var_scale, 0.0));
    } else {
        result.s_identifiable = false;
    }
    if (col_a >= 0) {
        result.a_hat = theta(col_a);
        result.a_sigma = std::sqrt(std::max(cov(col_a, col_a) * var_scale, 0.0));
    } else {
        result.a_identifiable = false;
    }
    if (col_0 >= 0) result.dark_hat = theta(col_0);
    if (!std::isfinite(result.s_hat) || !std::isfinite(result.a_hat))
        throw IdentifiabilityError("fit produced non-finite slope estimates");
    return result;
}

}  // namespace coexsim
