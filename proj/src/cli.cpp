#include "coexsim/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "coexsim/calib.hpp"
#include "coexsim/csv.hpp"
#include "coexsim/fwm.hpp"
#include "coexsim/plan_io.hpp"
#include "coexsim/scan.hpp"

namespace coexsim::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
};

// "start:stop:step" or a single value.
Range parse_range(const std::string& text) {
    Range r;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        r.start = r.stop = std::stod(text);
        return r;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("range must be <start>:<stop>:<step>");
    r.start = std::stod(text.substr(0, c1));
    r.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    r.step = std::stod(text.substr(c2 + 1));
    if (!(r.step > 0.0) || r.stop < r.start) throw ConfigError("invalid range '" + text + "'");
    return r;
}

struct ParamBundle {
    DetectionParams det;
    FiberParams fiber;
    QkdSystemParams qkd;
    RamanSlopes slopes;  // direction-matched defaults, set after --direction
};

void apply_override(ParamBundle& p, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value");
    const std::string key = assignment.substr(0, eq);
    const double v = std::stod(assignment.substr(eq + 1));
    if (key == "det.eta") p.det.eta = v;
    else if (key == "det.gate_ns") p.det.tau_s = v * 1e-9;
    else if (key == "det.bandwidth_ghz") p.det.filter_bandwidth_hz = v * 1e9;
    else if (key == "det.p_dark") p.det.p_dark = v;
    else if (key == "fiber.alpha_per_km") p.fiber.alpha_mean_per_km = v;
    else if (key == "fiber.alpha_q_per_km") p.fiber.alpha_q_per_km = v;
    else if (key == "fiber.excess_loss_db") p.fiber.excess_loss_db = v;
    else if (key == "qkd.mu") p.qkd.mu = v;
    else if (key == "qkd.eta_det") p.qkd.eta_bob = v;
    else if (key == "qkd.p_dark") p.qkd.p_dark = v;
    else if (key == "qkd.misalignment") p.qkd.misalignment = v;
    else if (key == "qkd.alpha_per_km") p.qkd.alpha_per_km = v;
    else if (key == "qkd.f_ec") p.qkd.f_ec = {.table = {}, .fallback = v};
    else if (key == "slopes.s_per_km") p.slopes.s_per_km = v;
    else if (key == "slopes.a_per_km") p.slopes.a_per_km = v;
    else if (key == "slopes.ref_bandwidth_ghz") p.slopes.ref_bandwidth_hz = v * 1e9;
    else throw ConfigError("unknown override key '" + key + "'");
}

std::string join_args(const std::vector<std::string>& args) {
    std::string out = "coexsim";
    for (const auto& a : args) out += " " + a;
    return out;
}

struct OutputFile {
    std::ofstream file;
    std::ostream* stream = nullptr;

    explicit OutputFile(const std::string& path) {
        if (path == "-") {
            stream = &std::cout;
        } else {
            file.open(path, std::ios::binary);
            if (!file) throw ConfigError("cannot open output file '" + path + "'");
            stream = &file;
        }
    }
};

void echo_params(CsvWriter& csv, const ParamBundle& p) {
    csv.comment("det.eta=" + fmt_double(p.det.eta) + " det.gate_ns=" + fmt_double(p.det.tau_s * 1e9) +
                " det.bandwidth_ghz=" + fmt_double(p.det.filter_bandwidth_hz / 1e9) +
                " det.p_dark=" + fmt_double(p.det.p_dark));
    csv.comment("fiber.alpha_per_km=" + fmt_double(p.fiber.alpha_mean_per_km) +
                " fiber.excess_loss_db=" + fmt_double(p.fiber.excess_loss_db));
    csv.comment("slopes.s_per_km=" + fmt_double(p.slopes.s_per_km) +
                " slopes.a_per_km=" + fmt_double(p.slopes.a_per_km) +
                " slopes.ref_bandwidth_ghz=" + fmt_double(p.slopes.ref_bandwidth_hz / 1e9));
    csv.comment("qkd.mu=" + fmt_double(p.qkd.mu) + " qkd.eta_det=" +
                fmt_double(p.qkd.eta_bob * p.qkd.eta_spd) + " qkd.p_dark=" + fmt_double(p.qkd.p_dark) +
                " qkd.misalignment=" + fmt_double(p.qkd.misalignment) + " qkd.alpha_per_km=" +
                fmt_double(p.qkd.alpha_per_km));
}

// Common per-subcommand state bound to CLI11 options.
struct CommonOptions {
    std::string plan = "A";
    std::string direction = "co";
    std::string modulation = "psk";
    std::string output;
    double power_dbm = 0.0;
    double bandwidth_ghz = 10.0;
    double gate_ns = 1.0;
    std::vector<std::string> overrides;

    ParamBundle resolve() const {
        ParamBundle p;
        p.det.filter_bandwidth_hz = bandwidth_ghz * 1e9;
        p.det.tau_s = gate_ns * 1e-9;
        p.slopes = RamanSlopes::measured(direction_from_string(direction));
        for (const auto& o : overrides) apply_override(p, o);
        return p;
    }

    ChannelPlan load(const ParamBundle&) const {
        return load_plan(plan, direction_from_string(direction), dbm_to_watts(power_dbm));
    }
};

void add_common(CLI::App* cmd, CommonOptions& opt, const std::string& default_output) {
    opt.output = default_output;
    cmd->add_option("--plan", opt.plan, "Preset A..G or plan file path");
    cmd->add_option("--direction", opt.direction, "co|counter")
        ->check(CLI::IsMember({"co", "counter"}));
    cmd->add_option("--power-dbm", opt.power_dbm, "Per-channel launch power [dBm]");
    cmd->add_option("--bandwidth-ghz", opt.bandwidth_ghz, "Quantum-channel filter FWHM [GHz]");
    cmd->add_option("--gate-ns", opt.gate_ns, "Detection gate length [ns]");
    cmd->add_option("--output", opt.output, "Output CSV path ('-' for stdout)");
    cmd->add_option("--set", opt.overrides, "Parameter override key=value (repeatable)");
}

int cmd_noise(const CommonOptions& opt, const std::string& length_range,
              const std::vector<std::string>& argv) {
    const ParamBundle p = opt.resolve();
    const ChannelPlan plan = opt.load(p);
    const Range r = parse_range(length_range);

    OutputFile out(opt.output);
    CsvWriter csv(*out.stream);
    csv.comment(join_args(argv));
    csv.comment("plan: " + describe_plan(plan));
    echo_params(csv, p);
    csv.header({"length_km", "counts_per_gate"});
    for (double z : make_grid(r.start, r.stop, r.step))
        csv.row({z, srs_counts_multi(plan, z, p.slopes, p.fiber, p.det)});
    std::cout << "noise: wrote " << opt.output << " (" << describe_plan(plan) << ")\n";
    return kExitOk;
}

std::vector<CountRecord> parse_count_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open records file '" + path + "'");
    std::vector<CountRecord> records;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string plan_id, direction, field;
        std::getline(ls, plan_id, ',');
        std::getline(ls, direction, ',');
        CountRecord rec;
        try {
            std::getline(ls, field, ',');
            rec.z_km = std::stod(field);
            std::getline(ls, field, ',');
            rec.counts_per_gate = std::stod(field);
            std::getline(ls, field, ',');
            rec.n_gates = std::stoll(field);
            rec.plan = load_plan(plan_id, direction_from_string(direction), dbm_to_watts(0.0));
        } catch (const std::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw ConfigError(path + ": no count records found");
    return records;
}

int cmd_fit(const CommonOptions& opt, const std::string& records_path, double records_power_dbm,
            double dark, bool unweighted, bool fit_intercept,
            const std::vector<std::string>& argv) {
    const ParamBundle p = opt.resolve();
    std::vector<CountRecord> records = parse_count_records(records_path);
    const Power per_channel = dbm_to_watts(records_power_dbm);
    for (auto& rec : records)
        for (auto& [ch, pw] : rec.plan.data_channels) pw = per_channel;

    FitOptions fopt;
    fopt.weighted = !unweighted;
    fopt.fit_intercept = fit_intercept;
    fopt.ref_bandwidth_hz = p.slopes.ref_bandwidth_hz;
    const FitResult fit = fit_slopes(records, p.det, p.fiber, dark, fopt);

    OutputFile out(opt.output);
    CsvWriter csv(*out.stream);
    csv.comment(join_args(argv));
    echo_params(csv, p);
    csv.header({"s_per_km", "a_per_km", "s_sigma", "a_sigma", "dark_hat", "residual_norm",
                "s_identifiable", "a_identifiable"});
    csv.row({fit.s_hat, fit.a_hat, fit.s_sigma, fit.a_sigma, fit.dark_hat, fit.residual_norm,
             fit.s_identifiable ? 1.0 : 0.0, fit.a_identifiable ? 1.0 : 0.0});

    std::cout << "fit: s = " << fmt_double(fit.s_hat) << " +- " << fmt_double(fit.s_sigma)
              << " km^-1, a = " << fmt_double(fit.a_hat) << " +- " << fmt_double(fit.a_sigma)
              << " km^-1";
    if (!fit.s_identifiable) std::cout << " (s unidentifiable: no lower-frequency channels)";
    if (!fit.a_identifiable) std::cout << " (a unidentifiable: no higher-frequency channels)";
    std::cout << "\n";
    if (!fit.s_identifiable || !fit.a_identifiable) {
        std::cerr << "fit: rank-deficient design, one slope unidentifiable\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_fwm(const std::string& channels_arg, double dc_ps_km_nm, double slope_ps_km_nm2,
            double length_km, double alpha_db_per_km, double power_dbm, double n2, double aeff_um2,
            bool strict_sin, const std::string& output, const std::vector<std::string>& argv) {
    std::vector<int> channels;
    {
        std::istringstream ss(channels_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) channels.push_back(std::stoi(tok));
    }
    if (channels.size() != 3) throw ConfigError("--channels expects three comma-separated indices");
    for (int ch : channels) validate_channel(ItuChannel{ch});

    DispersionParams disp;
    disp.d_c_s_per_m2 = DispersionParams::dc_from_ps_km_nm(dc_ps_km_nm);
    disp.d_slope_s_per_m3 = DispersionParams::slope_from_ps_km_nm2(slope_ps_km_nm2);
    NonlinearParams nl{n2, aeff_um2 * 1e-12};
    const double alpha_m = alpha_per_m_from_db_per_km(alpha_db_per_km);
    const double length_m = length_km * 1e3;
    const Power p0 = dbm_to_watts(power_dbm);

    OutputFile out(output);
    CsvWriter csv(*out.stream);
    csv.comment(join_args(argv));
    csv.comment("dc_ps_km_nm=" + fmt_double(dc_ps_km_nm) + " slope_ps_km_nm2=" +
                fmt_double(slope_ps_km_nm2) + " length_km=" + fmt_double(length_km) +
                " alpha_db_per_km=" + fmt_double(alpha_db_per_km));
    csv.header({"i", "j", "k", "product_channel", "delta_k_per_m", "eta_fwm", "eta_ratio"});

    // All role assignments (i, j, k) over the given triple, i <= j, whose
    // product f_i + f_j - f_k lands on the validity range of the grid.
    for (int i : channels)
        for (int j : channels)
            for (int k : channels) {
                if (j < i) continue;
                const int product = i + j - k;
                if (product == k) continue;
                if (product < 1 || product > 80) continue;
                const double dk = delta_k(disp, channel_to_frequency(ItuChannel{i}),
                                          channel_to_frequency(ItuChannel{j}),
                                          channel_to_frequency(ItuChannel{k}));
                const double eff = fwm_efficiency(alpha_m, dk, length_m, strict_sin);
                const double eff0 = fwm_efficiency(alpha_m, 0.0, length_m, strict_sin);
                csv.row({static_cast<double>(i), static_cast<double>(j), static_cast<double>(k),
                         static_cast<double>(product), dk, eff, eff / eff0});
            }

    const double gamma = nonlinear_gamma(nl, channel_to_frequency(ItuChannel{channels[2]}));
    const NegligibilityResult neg = fwm_negligible(gamma, p0, length_m);
    std::cout << "fwm: gamma = " << fmt_double(gamma) << " W^-1 m^-1, gamma*P0*L = "
              << fmt_double(neg.product) << (neg.negligible ? " (negligible, " : " (NOT negligible, ")
              << "margin " << fmt_double(neg.margin) << ")\n";
    std::cout << "fwm: wrote " << output << "\n";
    return kExitOk;
}

SweepSettings make_settings(const CommonOptions& opt, const ParamBundle& p,
                            const ChannelPlan& plan) {
    SweepSettings s;
    s.plan = plan;
    s.slopes = p.slopes;
    s.fiber = p.fiber;
    s.det = p.det;
    s.qkd = p.qkd;
    s.modulation = modulation_from_string(opt.modulation);
    return s;
}

int cmd_keyrate(const CommonOptions& opt, const std::string& length_range, double clock_hz,
                const std::vector<std::string>& argv) {
    const ParamBundle p = opt.resolve();
    const ChannelPlan plan = opt.load(p);
    const SweepSettings s = make_settings(opt, p, plan);
    const Range r = parse_range(length_range);
    const SweepResult sweep = keyrate_curve(s, r.start, r.stop, r.step);

    OutputFile out(opt.output);
    CsvWriter csv(*out.stream);
    csv.comment(join_args(argv));
    csv.comment("plan: " + describe_plan(plan));
    csv.comment("modulation=" + opt.modulation +
                (clock_hz > 0.0 ? " clock_hz=" + fmt_double(clock_hz) : ""));
    echo_params(csv, p);
    csv.header({"length_km", "q", "e", "y0", "r"});
    const double rate_scale = clock_hz > 0.0 ? clock_hz : 1.0;
    for (const auto& pt : sweep.points)
        csv.row({pt.length_km, pt.q, pt.e, pt.y0, pt.r * rate_scale});
    std::cout << "keyrate: " << sweep.points.size() << " points, wrote " << opt.output << "\n";
    return kExitOk;
}

int cmd_maxdist(const CommonOptions& opt, const std::string& power_range,
                const std::vector<std::string>& argv) {
    const ParamBundle p = opt.resolve();
    const ChannelPlan plan = opt.load(p);
    const SweepSettings s = make_settings(opt, p, plan);
    const Range r = parse_range(power_range);
    const SweepResult sweep = max_distance_vs_power(s, make_grid(r.start, r.stop, r.step));

    OutputFile out(opt.output);
    CsvWriter csv(*out.stream);
    csv.comment(join_args(argv));
    csv.comment("plan: " + describe_plan(plan));
    csv.comment("modulation=" + opt.modulation);
    echo_params(csv, p);
    csv.header({"power_dbm", "max_distance_km", "feasible"});
    for (std::size_t i = 0; i < sweep.grid.size(); ++i)
        csv.row({sweep.grid[i], sweep.max_distance_km[i], sweep.feasible[i] ? 1.0 : 0.0});
    std::cout << "maxdist: " << sweep.grid.size() << " power points, wrote " << opt.output << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Quantum/classical fiber coexistence toolkit"};
    app.require_subcommand(1);

    CommonOptions noise_opt, fit_opt, keyrate_opt, maxdist_opt;
    std::string noise_length = "0:60:10";
    std::string keyrate_length = "0:200:1";
    std::string maxdist_power = "-10:0:0.5";
    double clock_hz = 0.0;

    std::string fit_records;
    double fit_power_dbm = -10.5;
    double fit_dark = 3.6e-5;
    bool fit_unweighted = false;
    bool fit_intercept = false;

    std::string fwm_channels = "37,38,39";
    double fwm_dc = 16.0, fwm_slope = 0.0, fwm_length = 7.5, fwm_alpha_db = 0.2;
    double fwm_power = 0.0, fwm_n2 = 2.6e-20, fwm_aeff = 50.0;
    bool fwm_strict = false;
    std::string fwm_output = "fwm.csv";

    auto* noise = app.add_subcommand("noise", "SRS counts per gate vs fiber length");
    add_common(noise, noise_opt, "noise.csv");
    noise->add_option("--length-km", noise_length, "Fiber length or start:stop:step [km]");

    auto* fit = app.add_subcommand("fit", "Extract Raman slopes from count records");
    add_common(fit, fit_opt, "fit.csv");
    fit->add_option("--records", fit_records, "Count-records CSV")->required();
    fit->add_option("--records-power-dbm", fit_power_dbm, "Per-channel power of the records [dBm]");
    fit->add_option("--dark", fit_dark, "Known dark/background counts per gate");
    fit->add_flag("--unweighted", fit_unweighted, "Ordinary least squares");
    fit->add_flag("--fit-intercept", fit_intercept, "Fit the dark term instead of subtracting");

    auto* fwm = app.add_subcommand("fwm", "Four-wave-mixing relevance report");
    fwm->add_option("--channels", fwm_channels, "Three ITU channels i,j,k");
    fwm->add_option("--dc-ps-km-nm", fwm_dc, "Dispersion parameter [ps km^-1 nm^-1]");
    fwm->add_option("--slope-ps-km-nm2", fwm_slope, "Dispersion slope [ps km^-1 nm^-2]");
    fwm->add_option("--length-km", fwm_length, "Fiber length [km]");
    fwm->add_option("--alpha-db-per-km", fwm_alpha_db, "Attenuation [dB/km]");
    fwm->add_option("--power-dbm", fwm_power, "Launch power for gamma*P0*L [dBm]");
    fwm->add_option("--n2", fwm_n2, "Nonlinear index [m^2/W]");
    fwm->add_option("--aeff-um2", fwm_aeff, "Effective area [um^2]");
    fwm->add_flag("--strict-sin", fwm_strict, "Use sin^2(dk L) instead of sin^2(dk L / 2)");
    fwm->add_option("--output", fwm_output, "Output CSV path ('-' for stdout)");

    auto* keyrate = app.add_subcommand("keyrate", "Secure key rate vs distance");
    add_common(keyrate, keyrate_opt, "keyrate.csv");
    keyrate_opt.modulation = "psk";
    keyrate->add_option("--modulation", keyrate_opt.modulation, "psk|ook-rz")
        ->check(CLI::IsMember({"psk", "ook-rz"}));
    keyrate->add_option("--length-km", keyrate_length, "Distance grid start:stop:step [km]");
    keyrate->add_option("--clock-hz", clock_hz, "Optional clock rate converting to bits/s");

    auto* maxdist = app.add_subcommand("maxdist", "Max achievable distance vs per-channel power");
    add_common(maxdist, maxdist_opt, "maxdist.csv");
    maxdist->add_option("--modulation", maxdist_opt.modulation, "psk|ook-rz")
        ->check(CLI::IsMember({"psk", "ook-rz"}));
    maxdist->add_option("--power-dbm-range", maxdist_power, "Power grid start:stop:step [dBm]");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (noise->parsed()) return cmd_noise(noise_opt, noise_length, args);
        if (fit->parsed())
            return cmd_fit(fit_opt, fit_records, fit_power_dbm, fit_dark, fit_unweighted,
                           fit_intercept, args);
        if (fwm->parsed())
            return cmd_fwm(fwm_channels, fwm_dc, fwm_slope, fwm_length, fwm_alpha_db, fwm_power,
                           fwm_n2, fwm_aeff, fwm_strict, fwm_output, args);
        if (keyrate->parsed()) return cmd_keyrate(keyrate_opt, keyrate_length, clock_hz, args);
        if (maxdist->parsed()) return cmd_maxdist(maxdist_opt, maxdist_power, args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

}  // namespace coexsim::cli
