#include "gasket/lab.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gasket/constants.hpp"
#include "gasket/fit.hpp"
#include "gasket/operators.hpp"
#include "gasket/paths.hpp"
#include "gasket/sausage.hpp"
#include "gasket/spectral.hpp"
#include "gasket/subordinator.hpp"

namespace fs = std::filesystem;

namespace gasket {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("input not found: " + path);
    Config cfg;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw DomainError("config parse error, expected key=value: " + t);
        cfg.items_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return cfg;
}

Config Config::parse_tokens(const std::vector<std::string>& tokens) {
    Config cfg;
    for (const auto& t : tokens) {
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw DomainError("argument parse error, expected key=value: " + t);
        cfg.items_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return items_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = items_.find(key);
    return it == items_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    auto it = items_.find(key);
    if (it == items_.end()) throw DomainError("missing required config field: " + key);
    return it->second;
}

double Config::get_num(const std::string& key, double fallback) const {
    auto it = items_.find(key);
    if (it == items_.end()) return fallback;
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size())
        throw DomainError("invalid numeric value for " + key + ": " + it->second);
    return v;
}

long Config::get_int(const std::string& key, long fallback) const {
    auto it = items_.find(key);
    if (it == items_.end()) return fallback;
    std::size_t used = 0;
    long v = std::stol(it->second, &used);
    if (used != it->second.size())
        throw DomainError("invalid integer value for " + key + ": " + it->second);
    return v;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
    auto it = items_.find(key);
    if (it == items_.end()) return fallback;
    return std::stoull(it->second);
}

void Config::set(const std::string& key, const std::string& value) { items_[key] = value; }
void Config::set_num(const std::string& key, double value) { items_[key] = format_double(value); }
void Config::set_int(const std::string& key, long long value) {
    items_[key] = std::to_string(value);
}

void Config::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write " + path);
    for (const auto& [k, v] : items_) out << k << "=" << v << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const Config& params,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write " + path);
    out << "# version=" << kLabVersion;
    for (const auto& [k, v] : params.items()) out << " " << k << "=" << v;
    out << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

namespace {

std::vector<double> time_grid(Config& cfg) {
    if (cfg.has("t_list")) {
        std::vector<double> out;
        for (const auto& s : split(cfg.require("t_list"), ',')) out.push_back(std::stod(s));
        return out;
    }
    const double t_min = cfg.get_num("t_min", 0.1);
    const double t_max = cfg.get_num("t_max", 2.0);
    const long n_t = cfg.get_int("n_t", 8);
    const std::string scale = cfg.get("t_scale", "log");
    cfg.set_num("t_min", t_min);
    cfg.set_num("t_max", t_max);
    cfg.set_int("n_t", n_t);
    cfg.set("t_scale", scale);
    if (!(t_min > 0.0 && t_max >= t_min) || n_t < 1) throw DomainError("invalid time grid");
    std::vector<double> out;
    for (long i = 0; i < n_t; ++i) {
        double f = n_t == 1 ? 0.0
                            : static_cast<double>(i) / static_cast<double>(n_t - 1);
        out.push_back(scale == "log" ? t_min * std::pow(t_max / t_min, f)
                                     : t_min + (t_max - t_min) * f);
    }
    return out;
}

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    int col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw DomainError("CSV is missing column: " + name);
    }
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("input not found: " + path);
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (table.columns.empty()) {
            for (auto& c : split(t, ',')) table.columns.push_back(trim(c));
            continue;
        }
        std::vector<double> row;
        for (auto& c : split(t, ',')) row.push_back(std::stod(c));
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw DomainError("empty CSV: " + path);
    return table;
}

// --- subcommand handlers (each resolves defaults back into cfg) -----------

void cmd_spectrum(Config& cfg, const std::string& dir) {
    const double alpha = cfg.get_num("alpha", 1.0);
    const int blowup = static_cast<int>(cfg.get_int("M", 0));
    const int depth = static_cast<int>(cfg.get_int("m", 2));
    const int pad = static_cast<int>(cfg.get_int("pad", 1));
    const double nu = cfg.get_num("nu", 0.0);
    const double a = cfg.get_num("a", 0.25);
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    const int m_s = static_cast<int>(cfg.get_int("m_s", min_sampling_depth(blowup, a)));
    cfg.set_num("alpha", alpha);
    cfg.set_int("M", blowup);
    cfg.set_int("m", depth);
    cfg.set_int("pad", pad);
    cfg.set_num("nu", nu);
    cfg.set_num("a", a);
    cfg.set_int("seed", static_cast<long long>(seed));
    cfg.set_int("m_s", m_s);

    SpectralContext ctx(blowup, depth, pad, alpha);
    Cloud cloud = sample_cloud(blowup, nu, a, m_s, derive_seed(seed, 0));
    KilledSpectrum ks = ctx.killed_spectrum(cloud);
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < ks.eigenvalues.size(); ++n)
        rows.push_back({static_cast<double>(n + 1), ks.eigenvalues[n]});
    write_csv(dir + "/eigenvalues.csv", cfg, {"n", "lambda"}, rows);
}

void cmd_ids(Config& cfg, const std::string& dir) {
    const double alpha = cfg.get_num("alpha", 1.0);
    const int blowup = static_cast<int>(cfg.get_int("M", 1));
    const int depth = static_cast<int>(cfg.get_int("m", 3));
    const int pad = static_cast<int>(cfg.get_int("pad", 1));
    const double nu = cfg.get_num("nu", 1.0);
    const double a = cfg.get_num("a", 0.25);
    const long n_clouds = cfg.get_int("n_clouds", 20);
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    const int m_s = static_cast<int>(cfg.get_int("m_s", min_sampling_depth(blowup, a)));
    const long n_lambda = cfg.get_int("n_lambda", 40);
    cfg.set_num("alpha", alpha);
    cfg.set_int("M", blowup);
    cfg.set_int("m", depth);
    cfg.set_int("pad", pad);
    cfg.set_num("nu", nu);
    cfg.set_num("a", a);
    cfg.set_int("n_clouds", n_clouds);
    cfg.set_int("seed", static_cast<long long>(seed));
    cfg.set_int("m_s", m_s);
    cfg.set_int("n_lambda", n_lambda);
    std::vector<double> t_grid = time_grid(cfg);

    SpectralContext ctx(blowup, depth, pad, alpha);
    auto spectra = ensemble_spectra(ctx, nu, a, n_clouds, seed, m_s);

    std::vector<std::vector<double>> ev_rows;
    double lam_max = 0.0;
    for (std::size_t c = 0; c < spectra.size(); ++c)
        for (std::size_t n = 0; n < spectra[c].eigenvalues.size(); ++n) {
            ev_rows.push_back({static_cast<double>(c), static_cast<double>(n + 1),
                               spectra[c].eigenvalues[n]});
            lam_max = std::max(lam_max, spectra[c].eigenvalues[n]);
        }
    write_csv(dir + "/eigenvalues.csv", cfg, {"cloud", "n", "lambda"}, ev_rows);

    std::vector<std::vector<double>> ids_rows;
    if (lam_max > 0.0) {
        double lam_min = lam_max;
        for (const auto& sp : spectra)
            if (!sp.eigenvalues.empty()) lam_min = std::min(lam_min, sp.eigenvalues.front());
        lam_min = std::max(lam_min, 1e-12);
        for (long i = 0; i < n_lambda; ++i) {
            double f = n_lambda == 1 ? 0.0
                                     : static_cast<double>(i) / static_cast<double>(n_lambda - 1);
            double lam = lam_min * std::pow(lam_max / lam_min, f);
            ids_rows.push_back({lam, ensemble_ids_cdf(spectra, lam)});
        }
    }
    write_csv(dir + "/ids.csv", cfg, {"lambda", "l"}, ids_rows);

    LaplaceCurve curve = curve_from_spectra(spectra, t_grid, nu, seed);
    std::vector<std::vector<double>> lap_rows;
    for (std::size_t i = 0; i < curve.t.size(); ++i)
        lap_rows.push_back({curve.t[i], curve.value[i], curve.stderr_[i]});
    write_csv(dir + "/laplace.csv", cfg, {"t", "value", "stderr"}, lap_rows);
}

void cmd_sausage(Config& cfg, const std::string& dir) {
    const double alpha = cfg.get_num("alpha", 1.0);
    const int blowup = static_cast<int>(cfg.get_int("M", 0));
    const int depth = static_cast<int>(cfg.get_int("m", 3));
    const double nu = cfg.get_num("nu", 1.0);
    const double a = cfg.get_num("a", 0.25);
    const double dt = cfg.get_num("dt", 0.05);
    const long n_samples = cfg.get_int("n_samples", 200);
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    const long sensitivity = cfg.get_int("sensitivity", 1);
    const long kill = cfg.get_int("kill_at_boundary", 0);

    LevelGraph g = build_graph(blowup, depth);
    const int cell_depth =
        static_cast<int>(cfg.get_int("cell_depth", min_sampling_depth(blowup, a)));
    const int x0 = static_cast<int>(cfg.get_int("x0", g.index_of({0, 0})));
    cfg.set_num("alpha", alpha);
    cfg.set_int("M", blowup);
    cfg.set_int("m", depth);
    cfg.set_num("nu", nu);
    cfg.set_num("a", a);
    cfg.set_num("dt", dt);
    cfg.set_int("n_samples", n_samples);
    cfg.set_int("seed", static_cast<long long>(seed));
    cfg.set_int("sensitivity", sensitivity);
    cfg.set_int("kill_at_boundary", kill);
    cfg.set_int("cell_depth", cell_depth);
    cfg.set_int("x0", x0);
    std::vector<double> t_grid = time_grid(cfg);

    std::vector<std::vector<double>> rows;
    for (double t : t_grid) {
        SausageEstimate est = sausage_functional(g, x0, t, nu, a, alpha, dt, cell_depth,
                                                 n_samples, seed, kill != 0);
        std::vector<double> row{t,      est.mean,        est.stderr_,
                                static_cast<double>(est.n_samples), est.mean_volume,
                                est.volume_stderr};
        if (sensitivity != 0) {
            SausageEstimate half = sausage_functional(g, x0, t, nu, a, alpha, 0.5 * dt,
                                                      cell_depth, n_samples, seed, kill != 0);
            double rel = est.mean_volume == 0.0
                             ? 0.0
                             : std::abs(half.mean_volume - est.mean_volume) / est.mean_volume;
            row.push_back(half.mean_volume);
            row.push_back(rel);
            row.push_back(rel <= 0.02 ? 1.0 : 0.0);  // resolved flag
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::string> cols{"t", "mean", "stderr", "n", "mean_volume", "volume_stderr"};
    if (sensitivity != 0) {
        cols.push_back("mean_volume_half_dt");
        cols.push_back("volume_rel_change");
        cols.push_back("dt_resolved");
    }
    write_csv(dir + "/sausage.csv", cfg, cols, rows);
}

void cmd_survival(Config& cfg, const std::string& dir) {
    const double alpha = cfg.get_num("alpha", 1.0);
    const int blowup = static_cast<int>(cfg.get_int("M", 1));
    const int depth = static_cast<int>(cfg.get_int("m", 3));
    const double nu = cfg.get_num("nu", 1.0);
    const double a = cfg.get_num("a", 0.25);
    const double dt = cfg.get_num("dt", 0.05);
    const long n_samples = cfg.get_int("n_samples", 200);
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    const std::uint64_t cloud_seed = cfg.get_seed("cloud_seed", derive_seed(seed, 0));
    const int m_s = static_cast<int>(cfg.get_int("m_s", min_sampling_depth(blowup, a)));

    LevelGraph g = build_graph(blowup, depth);
    // Default start: an interior vertex nearest the centroid-side corner of
    // the middle cell, falling back to the origin if needed.
    int default_x0 = g.index_of({g.extent / 2, 0});
    if (default_x0 < 0) default_x0 = 0;
    const int x0 = static_cast<int>(cfg.get_int("x0", default_x0));
    cfg.set_num("alpha", alpha);
    cfg.set_int("M", blowup);
    cfg.set_int("m", depth);
    cfg.set_num("nu", nu);
    cfg.set_num("a", a);
    cfg.set_num("dt", dt);
    cfg.set_int("n_samples", n_samples);
    cfg.set_int("seed", static_cast<long long>(seed));
    cfg.set_int("cloud_seed", static_cast<long long>(cloud_seed));
    cfg.set_int("m_s", m_s);
    cfg.set_int("x0", x0);
    std::vector<double> t_grid = time_grid(cfg);

    Cloud cloud = sample_cloud(blowup, nu, a, m_s, cloud_seed);
    std::vector<std::vector<double>> rows;
    for (double t : t_grid) {
        SausageEstimate est = survival_probability(g, x0, t, cloud, alpha, dt, n_samples, seed);
        rows.push_back({t, est.mean, est.stderr_, static_cast<double>(est.n_samples)});
    }
    write_csv(dir + "/survival.csv", cfg, {"t", "mean", "stderr", "n"}, rows);
}

void cmd_enlarge_check(Config& cfg, const std::string& dir) {
    const double alpha = cfg.get_num("alpha", 1.0);
    const int blowup = static_cast<int>(cfg.get_int("M", 1));
    const int depth = static_cast<int>(cfg.get_int("m", 3));
    const int pad = static_cast<int>(cfg.get_int("pad", 1));
    const double nu = cfg.get_num("nu", 1.0);
    const double a = cfg.get_num("a", 0.1);
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    const int m_s = static_cast<int>(cfg.get_int("m_s", min_sampling_depth(blowup, a)));
    ClassifyParams p;
    p.R = cfg.get_num("R", 10.0);
    p.b = cfg.get_num("b", 2.0 * a);
    p.delta = cfg.get_num("delta", 0.5);
    p.kappa = cfg.get_num("kappa", 6.0);
    p.R0 = cfg.get_num("R0", 1.0);
    const double cutoff = cfg.get_num("K", 5.0);
    const double slack = cfg.get_num("slack", 0.5);
    std::vector<double> eps_list;
    for (const auto& s : split(cfg.get("eps_list", "0.5,0.25,0.125"), ','))
        eps_list.push_back(std::stod(s));
    cfg.set_num("alpha", alpha);
    cfg.set_int("M", blowup);
    cfg.set_int("m", depth);
    cfg.set_int("pad", pad);
    cfg.set_num("nu", nu);
    cfg.set_num("a", a);
    cfg.set_int("seed", static_cast<long long>(seed));
    cfg.set_int("m_s", m_s);
    cfg.set_num("R", p.R);
    cfg.set_num("b", p.b);
    cfg.set_num("delta", p.delta);
    cfg.set_num("kappa", p.kappa);
    cfg.set_num("R0", p.R0);
    cfg.set_num("K", cutoff);
    cfg.set_num("slack", slack);
    cfg.set("eps_list", cfg.get("eps_list", "0.5,0.25,0.125"));

    SpectralContext ctx(blowup, depth, pad, alpha);
    Cloud cloud = sample_cloud(blowup, nu, a, m_s, derive_seed(seed, 0));
    std::vector<std::vector<double>> rows;
    for (double eps : eps_list) {
        ClassifyParams pe = p;
        pe.eps = eps;
        EnlargementReport rep = check_enlargement(ctx, cloud, pe, cutoff, slack);
        rows.push_back({eps, rep.lambda_theta, rep.lambda_b,
                        static_cast<double>(rep.n_good), static_cast<double>(rep.n_centers),
                        rep.holds ? 1.0 : 0.0});
    }
    write_csv(dir + "/enlarge.csv", cfg,
              {"eps", "lambda_theta", "lambda_b", "n_good", "n_centers", "holds"}, rows);
}

void cmd_fit(Config& cfg, const std::string& dir) {
    const std::string input = cfg.require("input");
    const double alpha = cfg.get_num("alpha", 1.0);
    const FractalConstants fc = constants(alpha);
    const double gamma = cfg.get_num("gamma", fc.d_f / fc.d_alpha);
    cfg.set_num("alpha", alpha);
    cfg.set_num("gamma", gamma);

    CsvTable lap = read_csv(input);
    LaplaceCurve curve;
    const int tc = lap.col("t"), vc = lap.col("value");
    for (const auto& row : lap.rows) {
        curve.t.push_back(row[static_cast<std::size_t>(tc)]);
        curve.value.push_back(row[static_cast<std::size_t>(vc)]);
    }
    FitReport rep = fit_stretched_exponential(curve, gamma);

    std::vector<std::vector<double>> rows;
    rows.push_back({rep.gamma, rep.c_hat, rep.intercept, rep.r2, rep.t_lo, rep.t_hi});
    write_csv(dir + "/fit.csv", cfg, {"gamma", "c_hat", "intercept", "r2", "t_lo", "t_hi"},
              rows);

    std::ofstream md(dir + "/report.md");
    md << "# Asymptotics fit\n\n";
    md << "Input: `" << input << "`\n\n";
    md << "| quantity | value |\n|---|---|\n";
    md << "| gamma | " << format_double(rep.gamma) << " |\n";
    md << "| c_hat | " << format_double(rep.c_hat) << " |\n";
    md << "| R^2 | " << format_double(rep.r2) << " |\n";
    md << "| window | [" << format_double(rep.t_lo) << ", " << format_double(rep.t_hi)
       << "] |\n";
    md << "| tauberian exponent | " << format_double(tauberian_convert(rep.gamma)) << " |\n";

    if (cfg.has("ids_input")) {
        CsvTable ids = read_csv(cfg.require("ids_input"));
        const int lc = ids.col("lambda"), llc = ids.col("l");
        std::vector<double> lam, lval;
        for (const auto& row : ids.rows) {
            lam.push_back(row[static_cast<std::size_t>(lc)]);
            lval.push_back(row[static_cast<std::size_t>(llc)]);
        }
        FitReport lif = lifschitz_slope(lam, lval, alpha);
        std::vector<std::vector<double>> lrows;
        lrows.push_back({lif.slope, lif.slope_ci, lif.r2, lif.t_lo, lif.t_hi,
                         lif.stretched ? 1.0 : 0.0});
        write_csv(dir + "/lifschitz.csv", cfg,
                  {"slope", "slope_ci", "r2", "lambda_lo", "lambda_hi", "stretched"}, lrows);
        md << "| lifschitz slope | " << format_double(lif.slope) << " +- "
           << format_double(lif.slope_ci) << " |\n";
        md << "| stretched tail | " << (lif.stretched ? "yes" : "no") << " |\n";
    }
}

void cmd_selftest(Config& cfg, const std::string& dir) {
    const double perturb = cfg.get_num("renorm_perturbation", 1.0);
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    cfg.set_num("renorm_perturbation", perturb);
    cfg.set_int("seed", static_cast<long long>(seed));
    SelftestResult res = run_selftest(perturb, seed);
    std::ofstream out(dir + "/selftest.txt");
    for (const auto& [name, ok] : res.checks) {
        std::string line = std::string(ok ? "PASS" : "FAIL") + " " + name;
        std::cout << line << "\n";
        out << line << "\n";
    }
    if (!res.all_pass) throw NumericError("selftest failed");
}

}  // namespace

int run_command(const std::string& command, Config cfg, const std::string& out_dir) {
    try {
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot create output directory: " << e.what() << "\n";
        return 2;
    }
    // Keys that steer the harness itself do not belong in the manifest.
    Config clean;
    for (const auto& [k, v] : cfg.items())
        if (k != "config" && k != "out" && k != "command" && k != "version") clean.set(k, v);
    cfg = clean;

    try {
        if (command == "spectrum")
            cmd_spectrum(cfg, out_dir);
        else if (command == "ids")
            cmd_ids(cfg, out_dir);
        else if (command == "sausage")
            cmd_sausage(cfg, out_dir);
        else if (command == "survival")
            cmd_survival(cfg, out_dir);
        else if (command == "enlarge-check")
            cmd_enlarge_check(cfg, out_dir);
        else if (command == "fit")
            cmd_fit(cfg, out_dir);
        else if (command == "selftest")
            cmd_selftest(cfg, out_dir);
        else
            throw DomainError("unknown command: " + command);
        cfg.set("command", command);
        cfg.set("version", kLabVersion);
        cfg.write_file(out_dir + "/manifest.txt");
        return 0;
    } catch (const std::exception& e) {
        std::ofstream err(out_dir + "/error.txt");
        err << "command=" << command << "\nerror=" << e.what() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

SelftestResult run_selftest(double renorm_perturbation, std::uint64_t seed) {
    SelftestResult res;
    auto check = [&](const std::string& name, auto&& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception&) {
            ok = false;
        }
        res.checks.emplace_back(name, ok);
        if (!ok) res.all_pass = false;
    };

    check("graph-vertex-count", [] {
        return build_graph(0, 3).vertices.size() == 42 && build_graph(0, 1).vertices.size() == 6;
    });

    check("blowup-isomorphism", [] {
        LevelGraph g1 = build_graph(1, 3), g0 = build_graph(0, 3);
        return g1.vertices == g0.vertices && g1.edges == g0.edges;
    });

    check("eigenvalue-ratio-5", [&] {
        LevelGraph g1 = build_graph(1, 3), g0 = build_graph(0, 3);
        double l1 = spectrum(dirichlet_restrict(laplacian(g1, renorm_perturbation),
                                                g1.interior_vertices()),
                             1)
                        .front();
        double l0 = spectrum(dirichlet_restrict(laplacian(g0), g0.interior_vertices()), 1)
                        .front();
        return std::abs(l0 / l1 - 5.0) <= 5.0 * 1e-10;
    });

    check("kernel-scaling", [&] {
        auto rep = kernel_scaling_check(build_graph(1, 3), build_graph(0, 3), 1.0, 0.3,
                                        renorm_perturbation);
        return rep.max_deviation <= 1e-10;
    });

    if (renorm_perturbation == 1.0) {
        check("negative-control-perturbed-scaling", [] {
            auto rep = kernel_scaling_check(build_graph(1, 3), build_graph(0, 3), 1.0, 0.3,
                                            1.01);
            return rep.max_deviation > 1e-6;
        });
    }

    check("subordinator-laplace", [&] {
        for (std::uint64_t s : {seed, seed + 77}) {  // seed-independence
            Rng rng(s);
            const double u = 1.0, beta = 0.5;
            double mean = 0.0, m2 = 0.0;
            const long n = 20000;
            for (long i = 1; i <= n; ++i) {
                double v = std::exp(-u * sample_unit_subordinator(beta, rng));
                double d = v - mean;
                mean += d / static_cast<double>(i);
                m2 += d * (v - mean);
            }
            double se = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
            if (std::abs(mean - std::exp(-std::pow(u, beta))) > 3.0 * se) return false;
        }
        return true;
    });

    check("subordinator-density-normalization", [] {
        // Trapezoid integral of the Talbot-inverted density for alpha = 1.2.
        double integral = 0.0, prev_u = 1e-4, prev_f = unit_subordinator_density(1.2, prev_u);
        for (int i = 1; i <= 400; ++i) {
            double u = 1e-4 * std::pow(1e6 / 1e-4, i / 400.0);
            double f = unit_subordinator_density(1.2, u);
            integral += 0.5 * (f + prev_f) * (u - prev_u);
            prev_u = u;
            prev_f = f;
        }
        return std::abs(integral - 1.0) < 5e-3;
    });

    SpectralContext ctx(1, 3, 1, 1.0);

    check("trace-identity", [&] {
        for (int c = 0; c < 5; ++c) {
            Cloud cloud = sample_cloud(1, 1.0, 0.3, 5, derive_seed(seed, 100 + c));
            KilledSpectrum ks = ctx.killed_spectrum(cloud);
            if (ks.eigenvalues.empty()) continue;
            auto keep = ctx.free_interior(cloud, cloud.radius);
            SymmetricOperator h = dirichlet_restrict(ctx.stable_interior(), keep);
            std::vector<double> w(keep.size(), 1.0);
            Eigen::MatrixXd k = heat_kernel_mu(h, w, 0.7);
            double tr = k.trace();
            double ev_sum = 0.0;
            for (double lam : ks.eigenvalues) ev_sum += std::exp(-lam * 0.7);
            if (std::abs(tr - ev_sum) > 1e-10 * (1.0 + ev_sum)) return false;
        }
        return true;
    });

    check("chen-song", [&] {
        for (int c = 0; c < 5; ++c) {
            Cloud cloud = sample_cloud(1, 1.0, 0.3, 5, derive_seed(seed, 200 + c));
            KilledSpectrum st = ctx.killed_spectrum(cloud);
            auto bm = ctx.killed_brownian_spectrum(cloud);
            if (st.eigenvalues.empty()) continue;
            if (st.eigenvalues.front() > std::pow(bm.front(), 0.5) + 1e-10) return false;
        }
        return true;
    });

    check("nu-monotonicity-thinning", [&] {
        Cloud full = sample_cloud(1, 1.5, 0.3, 5, derive_seed(seed, 300));
        Cloud thin = thin_cloud(full, 0.5, derive_seed(seed, 301));
        EmpiricalIDS lf{ctx.killed_spectrum(full)};
        EmpiricalIDS lt{ctx.killed_spectrum(thin)};
        for (double t : {0.5, 1.0, 2.0})
            if (laplace_transform(lt, t) + 1e-12 < laplace_transform(lf, t)) return false;
        return true;
    });

    check("interlacing-add-center", [&] {
        Cloud cloud = sample_cloud(1, 1.0, 0.3, 5, derive_seed(seed, 400));
        Cloud more = cloud;
        Address extra;
        extra.blowup = 1;
        extra.digits = {1, 0, 2, 1, 0};
        more.centers.push_back(extra);
        auto a = ctx.killed_spectrum(cloud).eigenvalues;
        auto b = ctx.killed_spectrum(more).eigenvalues;
        for (std::size_t n = 0; n < b.size(); ++n)
            if (b[n] + 1e-10 < a[n]) return false;
        return true;
    });

    check("b-le-a", [&] {
        auto rep = averaged_survival_vs_trace(0, 3, 1, 1.0, 0.2, 1.0, {0.3, 1.0, 3.0}, 5, seed);
        return rep.holds;
    });

    check("scaling-consistency-laplace", [&] {
        SpectralContext c1(1, 3, 1, 1.0), c0(0, 3, 1, 1.0);
        Cloud empty1 = sample_cloud(1, 0.0, 0.25, min_sampling_depth(1, 0.25), 0);
        Cloud empty0 = sample_cloud(0, 0.0, 0.25, min_sampling_depth(0, 0.25), 0);
        EmpiricalIDS l1{c1.killed_spectrum(empty1)}, l0{c0.killed_spectrum(empty0)};
        const double scale = std::pow(5.0, 0.5);
        for (double t : {0.5, 1.0, 2.0}) {
            double lhs = laplace_transform(l1, t);
            double rhs = laplace_transform(l0, t / scale) / 3.0;
            if (std::abs(lhs - rhs) > 1e-10 * (1.0 + rhs)) return false;
        }
        return true;
    });

    check("laplace-log-convexity", [&] {
        Cloud empty = sample_cloud(1, 0.0, 0.25, min_sampling_depth(1, 0.25), 0);
        EmpiricalIDS ids{ctx.killed_spectrum(empty)};
        std::vector<double> logs;
        for (int i = 0; i <= 20; ++i) logs.push_back(std::log(laplace_transform(ids, 0.2 + 0.15 * i)));
        for (std::size_t i = 1; i + 1 < logs.size(); ++i)
            if (logs[i + 1] - 2.0 * logs[i] + logs[i - 1] < -1e-8) return false;
        return true;
    });

    check("tauberian-exponents", [] {
        for (double alpha : {0.5, 1.0, 1.5}) {
            FractalConstants fc = constants(alpha);
            if (std::abs(tauberian_convert(fc.d_f / fc.d_alpha) - fc.d_s / alpha) > 1e-12)
                return false;
        }
        return true;
    });

    check("m0-arithmetic", [] {
        FractalConstants fc = constants(1.0);
        return m0_scale(1.0, 1.0, 1.0) == 0 && m0_scale(1000.0, 1.0, 1.0) == 3 &&
               m0_scale(std::pow(2.0, fc.d_alpha), 1.0, 1.0) == 1;
    });

    check("fubini-sausage-vs-survival", [&] {
        LevelGraph g = build_graph(1, 3);
        const double nu = 1.0, a = 0.3, alpha = 1.0, t = 0.3, dt = 0.03;
        const int m_s = min_sampling_depth(1, a);
        const int x0 = g.index_of({2, 2});
        SausageEstimate saus = sausage_functional(g, x0, t, nu, a, alpha, dt, m_s, 400,
                                                  derive_seed(seed, 500), true);
        double mean = 0.0, m2 = 0.0;
        const long n_clouds = 25;
        for (long c = 0; c < n_clouds; ++c) {
            Cloud cloud = sample_cloud(1, nu, a, m_s, derive_seed(seed, 600 + static_cast<std::uint64_t>(c)));
            SausageEstimate sv = survival_probability(g, x0, t, cloud, alpha, dt, 60,
                                                      derive_seed(seed, 700 + static_cast<std::uint64_t>(c)));
            double d = sv.mean - mean;
            mean += d / static_cast<double>(c + 1);
            m2 += d * (sv.mean - mean);
        }
        double se = std::sqrt(m2 / static_cast<double>(n_clouds - 1) /
                              static_cast<double>(n_clouds));
        double joint = std::sqrt(se * se + saus.stderr_ * saus.stderr_);
        return std::abs(mean - saus.mean) <= 3.0 * joint + 1e-9;
    });

    check("replay-determinism", [&] {
        fs::path base = fs::temp_directory_path() / "gasketlab_selftest";
        fs::remove_all(base);
        Config c = Config::parse_tokens({"M=0", "m=2", "alpha=1", "nu=0", "a=0.25"});
        if (run_command("spectrum", c, (base / "run1").string()) != 0) return false;
        Config replay = Config::parse_file((base / "run1" / "manifest.txt").string());
        if (run_command(replay.require("command"), replay, (base / "run2").string()) != 0)
            return false;
        std::ifstream f1(base / "run1" / "eigenvalues.csv"), f2(base / "run2" / "eigenvalues.csv");
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        return s1.str() == s2.str() && !s1.str().empty();
    });

    return res;
}

}  // namespace gasket
