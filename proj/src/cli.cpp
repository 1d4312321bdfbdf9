// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fdrelay/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace fdrelay::cli {

using outage::AntennaConfig;
using outage::Link;
using wishart::CoeffStore;
using wishart::WishartDims;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    }
}

long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag) {
    if (!flag.empty()) return std::filesystem::path(flag);
    if (const char* env = std::getenv(kCacheDirEnv); env && *env) return std::filesystem::path(env);
    return std::nullopt;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

outage::LinkBudget RunConfig::budget_at(double gammabar_db) const {
    outage::LinkBudget b;
    b.p_s = p_s;
    b.p_r = p_r;
    b.alpha_sr = alpha_sr;
    b.alpha_rd = alpha_rd;
    b.gammabar_sr = db_to_linear(gammabar_db);
    b.gammabar_rd = b.gammabar_sr;
    return b;
}

RunConfig parse_run_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
        if (!kv.emplace(key, value).second) throw ConfigError("config key '" + key + "' given twice");
    }

    static const char* const known[] = {"n_s",          "n_r1",          "n_r2",         "n_d",     "mode",
                                        "gamma_t_db",   "gamma_t",       "rate_r0",      "p_s_db",  "p_r_db",
                                        "alpha_sr",     "alpha_rd",      "asymmetry",    "power_ratio",
                                        "grid_start_db", "grid_stop_db", "grid_step_db", "trials",  "seed",
                                        "out_csv"};
    for (const auto& [key, value] : kv) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    auto take = [&](const char* key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto require_int = [&](const char* key) -> int {
        const auto v = take(key);
        if (!v) throw ConfigError(std::string("missing config key '") + key + "'");
        return static_cast<int>(parse_integer(key, *v));
    };

    RunConfig rc;
    rc.antennas.n_s = require_int("n_s");
    rc.antennas.n_r1 = require_int("n_r1");
    rc.antennas.n_r2 = require_int("n_r2");
    rc.antennas.n_d = require_int("n_d");
    const auto mode = take("mode");
    if (!mode) throw ConfigError("missing config key 'mode'");
    try {
        rc.antennas.mode = outage::parse_zf_mode(*mode);
        rc.antennas.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const int threshold_keys = (take("gamma_t_db") ? 1 : 0) + (take("gamma_t") ? 1 : 0) + (take("rate_r0") ? 1 : 0);
    if (threshold_keys != 1) throw ConfigError("exactly one of gamma_t_db, gamma_t, rate_r0 is required");
    if (auto v = take("gamma_t_db")) rc.query = outage::SnrThreshold{db_to_linear(parse_double("gamma_t_db", *v))};
    if (auto v = take("gamma_t")) rc.query = outage::SnrThreshold{parse_double("gamma_t", *v)};
    if (auto v = take("rate_r0")) rc.query = outage::RateThreshold{parse_double("rate_r0", *v)};
    try {
        (void)outage::snr_threshold(rc.query);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (auto v = take("p_s_db")) rc.p_s = db_to_linear(parse_double("p_s_db", *v));
    if (auto v = take("p_r_db")) rc.p_r = db_to_linear(parse_double("p_r_db", *v));
    if (auto v = take("alpha_sr")) rc.alpha_sr = parse_double("alpha_sr", *v);
    if (auto v = take("alpha_rd")) rc.alpha_rd = parse_double("alpha_rd", *v);
    if (!(rc.alpha_sr > 0.0) || !(rc.alpha_rd > 0.0)) throw ConfigError("alpha_sr and alpha_rd must be positive");

    // The dominated hop keeps unit path loss; the dominant hop gets alpha^2 = ratio.
    if (auto v = take("asymmetry")) {
        if (*v == "symmetric") {
            rc.asymmetry.kind = Asymmetry::Kind::Symmetric;
        } else if (*v == "sr_dominant" || *v == "rd_dominant") {
            if (take("alpha_sr") || take("alpha_rd")) {
                throw ConfigError("asymmetry and explicit alpha_sr/alpha_rd are mutually exclusive");
            }
            const auto ratio = take("power_ratio");
            if (!ratio) throw ConfigError("asymmetry '" + *v + "' needs power_ratio");
            rc.asymmetry.ratio = parse_double("power_ratio", *ratio);
            if (!(rc.asymmetry.ratio > 1.0)) throw ConfigError("power_ratio must be > 1");
            const double amplitude = std::sqrt(rc.asymmetry.ratio);
            if (*v == "sr_dominant") {
                rc.asymmetry.kind = Asymmetry::Kind::SrDominant;
                rc.alpha_sr = amplitude;
            } else {
                rc.asymmetry.kind = Asymmetry::Kind::RdDominant;
                rc.alpha_rd = amplitude;
            }
        } else {
            throw ConfigError("unknown asymmetry '" + *v + "' (symmetric, sr_dominant, rd_dominant)");
        }
    } else if (take("power_ratio")) {
        throw ConfigError("power_ratio given without asymmetry");
    }

    const double start = take("grid_start_db") ? parse_double("grid_start_db", *take("grid_start_db")) : 0.0;
    const double stop = take("grid_stop_db") ? parse_double("grid_stop_db", *take("grid_stop_db")) : 30.0;
    const double step = take("grid_step_db") ? parse_double("grid_step_db", *take("grid_step_db")) : 5.0;
    if (!(step > 0.0)) throw ConfigError("grid_step_db must be positive");
    if (stop < start) throw ConfigError("grid_stop_db must not be below grid_start_db");
    const auto points = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (points > 100000) throw ConfigError("SNR grid too large");
    for (long long i = 0; i < points; ++i) rc.grid_db.push_back(start + static_cast<double>(i) * step);

    if (auto v = take("trials")) {
        const auto t = parse_integer("trials", *v);
        if (t < 0) throw ConfigError("trials must be >= 0");
        rc.trials = static_cast<std::size_t>(t);
    }
    if (auto v = take("seed")) rc.seed = static_cast<std::uint64_t>(parse_integer("seed", *v));
    if (auto v = take("out_csv")) rc.out_csv = std::filesystem::path(*v);
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return parse_run_config(in);
}

Fault parse_fault(const std::string& name) {
    if (name.empty() || name == "none") return Fault::None;
    if (name == "dims-mapping") return Fault::DimsMapping;
    throw ConfigError("unknown fault '" + name + "' (known: dims-mapping)");
}

WishartDims analytic_link_dims(const AntennaConfig& config, Link link, Fault fault) {
    if (fault == Fault::None) return outage::link_dims(config, link);
    // Projection ignored: both hops use the full arrays.
    config.validate();
    return link == Link::SourceRelay ? WishartDims::from_shape(config.n_r1, config.n_s)
                                     : WishartDims::from_shape(config.n_r2, config.n_d);
}

std::vector<CurveRow> compute_curve(const RunConfig& config, CoeffStore& store, Fault fault, unsigned threads) {
    const double gamma_t = outage::snr_threshold(config.query);
    const auto sr = store.get(analytic_link_dims(config.antennas, Link::SourceRelay, fault));
    const auto rd = store.get(analytic_link_dims(config.antennas, Link::RelayDestination, fault));

    std::optional<sim::GainSample> sample;
    if (config.trials > 0) sample = sim::simulate_link_gains(config.antennas, config.trials, config.seed, threads);

    std::vector<CurveRow> rows;
    rows.reserve(config.grid_db.size());
    for (double db : config.grid_db) {
        const auto budget = config.budget_at(db);
        CurveRow row;
        row.gammabar_db = db;
        row.analytic = outage::outage_e2e_from_tables(*sr, *rd, budget.scale_sr(), budget.scale_rd(), gamma_t);
        if (sample) row.mc = sim::count_outage(*sample, budget.scale_sr(), budget.scale_rd(), gamma_t);
        rows.push_back(row);
    }
    return rows;
}

std::string format_csv(const std::vector<CurveRow>& rows) {
    std::string csv = "gammabar_db,analytic,mc,ci_low,ci_high\n";
    for (const auto& r : rows) {
        csv += format_number(r.gammabar_db) + "," + format_number(r.analytic) + ",";
        if (r.mc) {
            csv += format_number(r.mc->p_hat) + "," + format_number(r.mc->ci_low) + "," + format_number(r.mc->ci_high);
        } else {
            csv += ",,";
        }
        csv += "\n";
    }
    return csv;
}

double z_score(double analytic, const sim::OutageEstimate& mc) {
    const double var = analytic * (1.0 - analytic) / static_cast<double>(mc.trials);
    const double diff = mc.p_hat - analytic;
    if (var <= 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    return diff / std::sqrt(var);
}

bool SlopeFit::pass() const {
    return points >= 2 && std::abs(fitted + static_cast<double>(predicted_order)) <= kSlopeTolerance;
}

SlopeFit fit_diversity_slope(const std::vector<CurveRow>& rows, int predicted_order) {
    if (rows.empty()) throw ConfigError("empty SNR grid");
    const double top = rows.back().gammabar_db;
    if (top - rows.front().gammabar_db < kSlopeWindowDb - 1e-9) {
        throw ConfigError("diversity fit needs a grid spanning at least 10 dB");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& r : rows) {
        if (r.gammabar_db < top - kSlopeWindowDb - 1e-9 || !(r.analytic > 0.0)) continue;
        x.push_back(r.gammabar_db / 10.0);
        y.push_back(std::log10(r.analytic));
    }
    SlopeFit fit;
    fit.predicted_order = predicted_order;
    fit.points = x.size();
    if (x.size() >= 2) fit.fitted = stats::least_squares_slope(x, y);
    return fit;
}

namespace {

struct CommonOptions {
    std::string cache_dir;
    std::string fault;
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
};

RunConfig load_with_overrides(const std::string& path, const CommonOptions& opts) {
    RunConfig rc = load_run_config(path);
    if (opts.seed) rc.seed = *opts.seed;
    if (opts.trials) rc.trials = *opts.trials;
    return rc;
}

int cmd_coeffs(const std::vector<std::string>& dims_args, const CommonOptions& opts, std::ostream& out,
               std::ostream& err) {
    std::vector<WishartDims> dims;
    for (const auto& arg : dims_args) {
        int a = 0;
        int b = 0;
        char sep = 0;
        std::istringstream is(arg);
        if (!(is >> a >> sep >> b) || (sep != ',' && sep != 'x') || !is.eof()) {
            err << "error: --dims expects A,B (got '" << arg << "')\n";
            return kUsageError;
        }
        try {
            dims.push_back(WishartDims::from_shape(a, b));
        } catch (const std::invalid_argument& e) {
            err << "error: --dims " << arg << ": " << e.what() << "\n";
            return kUsageError;
        }
    }
    const auto cache_dir = resolve_cache_dir(opts.cache_dir);
    if (!cache_dir) {
        err << "error: coeffs needs --cache-dir or " << kCacheDirEnv << "\n";
        return kUsageError;
    }
    CoeffStore store(cache_dir);
    for (const auto& d : dims) {
        CoeffStore::Origin origin{};
        const auto table = store.get(d, &origin);
        const auto sum = table->sum();
        out << "dims " << wishart::to_string(d) << ": " << table->entries().size()
            << " coefficients, K_ab = " << algebra::to_string(table->k_ab()) << ", sum = " << algebra::to_string(sum)
            << (origin == CoeffStore::Origin::Computed ? " [computed]" : " [cached]") << " -> "
            << (*cache_dir / wishart::cache_file_name(d)).string() << "\n";
        if (sum != 1) {
            err << "error: coefficients for " << wishart::to_string(d) << " do not sum to one\n";
            return kValidationFailure;
        }
    }
    return kSuccess;
}

int cmd_sweep(const std::string& config_path, const CommonOptions& opts, std::ostream& out, std::ostream&) {
    const RunConfig rc = load_with_overrides(config_path, opts);
    CoeffStore store(resolve_cache_dir(opts.cache_dir));
    const auto rows = compute_curve(rc, store, parse_fault(opts.fault), opts.threads);
    const std::string csv = format_csv(rows);
    if (rc.out_csv) {
        std::ofstream f(*rc.out_csv, std::ios::binary | std::ios::trunc);
        if (!(f << csv)) throw std::runtime_error("cannot write " + rc.out_csv->string());
    } else {
        out << csv;
    }
    return kSuccess;
}

int cmd_compare(const std::string& config_path, const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load_with_overrides(config_path, opts);
    if (rc.trials == 0) {
        err << "error: compare needs trials > 0\n";
        return kUsageError;
    }
    if (rc.trials < 10000) err << "warning: underpowered comparison (" << rc.trials << " trials < 10000)\n";
    const Fault fault = parse_fault(opts.fault);
    CoeffStore store(resolve_cache_dir(opts.cache_dir));
    const auto rows = compute_curve(rc, store, fault, opts.threads);

    out << outage::to_string(rc.antennas) << ", " << rc.trials << " trials, seed " << rc.seed << "\n";
    out << std::setw(12) << "gammabar_db" << std::setw(16) << "analytic" << std::setw(16) << "mc" << std::setw(10)
        << "z" << "  verdict\n";
    bool ok = true;
    for (const auto& r : rows) {
        const double n = static_cast<double>(r.mc->trials);
        const double expected = n * std::min(r.analytic, 1.0 - r.analytic);
        const auto observed = static_cast<double>(std::min(r.mc->outages, r.mc->trials - r.mc->outages));
        const double z = z_score(r.analytic, *r.mc);
        std::string verdict;
        if (expected < kMinExpectedCount && observed < kMinExpectedCount) {
            verdict = "skip (expected count < 10)";
        } else if (std::abs(z) <= 3.0) {
            verdict = "ok";
        } else {
            verdict = "MISMATCH";
            ok = false;
        }
        out << std::setw(12) << format_number(r.gammabar_db) << std::setw(16) << format_number(r.analytic)
            << std::setw(16) << format_number(r.mc->p_hat) << std::setw(10) << std::fixed << std::setprecision(2) << z
            << std::defaultfloat << "  " << verdict << "\n";
    }
    out << (ok ? "PASS" : "FAIL") << ": analytic vs Monte Carlo, |z| <= 3\n";
    return ok ? kSuccess : kValidationFailure;
}

int cmd_diversity(const std::vector<std::string>& config_paths, const CommonOptions& opts, std::ostream& out,
                  std::ostream&) {
    const Fault fault = parse_fault(opts.fault);
    CoeffStore store(resolve_cache_dir(opts.cache_dir));
    bool ok = true;
    std::vector<std::pair<RunConfig, std::vector<CurveRow>>> runs;
    for (const auto& path : config_paths) {
        RunConfig rc = load_with_overrides(path, opts);
        rc.trials = 0;
        auto rows = compute_curve(rc, store, fault, opts.threads);
        const SlopeFit fit = fit_diversity_slope(rows, outage::diversity_order(rc.antennas));
        out << outage::to_string(rc.antennas) << ": predicted slope -" << fit.predicted_order << ", fitted "
            << std::fixed << std::setprecision(3) << fit.fitted << std::defaultfloat << " over " << fit.points
            << " points -> " << (fit.pass() ? "PASS" : "FAIL") << "\n";
        ok = ok && fit.pass();
        runs.emplace_back(std::move(rc), std::move(rows));
    }
    out << "\n" << std::setw(12) << "gammabar_db";
    for (const auto& [rc, rows] : runs) {
        const auto& a = rc.antennas;
        const std::string label = "(" + std::to_string(a.n_s) + "," + std::to_string(a.n_r1) + "," +
                                  std::to_string(a.n_r2) + "," + std::to_string(a.n_d) + ")" +
                                  (a.mode == outage::ZfMode::Receive ? "rx" : "tx");
        out << std::setw(18) << label;
    }
    out << "\n";
    // Configs may use different grids; rows are matched on the dB value.
    std::vector<double> grid;
    for (const auto& [rc, rows] : runs) {
        for (const auto& r : rows) grid.push_back(r.gammabar_db);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
               grid.end());
    for (const double db : grid) {
        out << std::setw(12) << format_number(db);
        for (const auto& [rc, rows] : runs) {
            const auto it = std::find_if(rows.begin(), rows.end(),
                                         [db](const CurveRow& r) { return std::abs(r.gammabar_db - db) < 1e-9; });
            out << std::setw(18) << (it != rows.end() ? format_number(it->analytic) : std::string("-"));
        }
        out << "\n";
    }
    return ok ? kSuccess : kValidationFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Outage analysis of full-duplex MIMO decode-and-forward relays with ZF beamforming", "fdrelay"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<std::string> dims_args;
    std::string config_path;
    std::vector<std::string> config_paths;
    std::uint64_t seed = 0;
    std::size_t trials = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--cache-dir", opts.cache_dir, "Coefficient cache directory (default: $FDRELAY_CACHE_DIR)");
        sub->add_option("--threads", opts.threads, "Monte Carlo worker threads (0 = all cores)");
    };
    auto add_run = [&](CLI::App* sub) {
        add_common(sub);
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--trials", trials, "Override the config trial count");
        sub->add_option("--inject-fault", opts.fault, "Negative-control fault (test only): dims-mapping");
    };

    auto* coeffs = app.add_subcommand("coeffs", "Compute and cache Wishart coefficient tables");
    coeffs->add_option("--dims", dims_args, "Wishart dimensions A,B (repeatable)")->required();
    add_common(coeffs);

    auto* sweep = app.add_subcommand("sweep", "Analytic (and Monte Carlo) outage over the SNR grid, as CSV");
    sweep->add_option("--config", config_path, "Run configuration file")->required();
    add_run(sweep);

    auto* compare = app.add_subcommand("compare", "z-scores of analytic outage against Monte Carlo");
    compare->add_option("--config", config_path, "Run configuration file")->required();
    add_run(compare);

    auto* diversity = app.add_subcommand("diversity", "High-SNR slope against the predicted diversity order");
    diversity->add_option("--config", config_paths, "Run configuration file (repeatable)")->required();
    add_run(diversity);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }
    for (auto* sub : {sweep, compare, diversity}) {
        if (sub->count("--seed") > 0) opts.seed = seed;
        if (sub->count("--trials") > 0) opts.trials = trials;
    }

    try {
        if (*coeffs) return cmd_coeffs(dims_args, opts, out, err);
        if (*sweep) return cmd_sweep(config_path, opts, out, err);
        if (*compare) return cmd_compare(config_path, opts, out, err);
        if (*diversity) return cmd_diversity(config_paths, opts, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
    return kUsageError;
}

}  // namespace fdrelay::cli
