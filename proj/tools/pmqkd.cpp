// Command-line front end: parameter sweeps, figure/table data files, and the
// numerical verification suites.
//
// Exit codes: 0 success, 1 configuration error, 2 verification failure,
// 3 numerical guard tripped.

#include <omp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmqkd/experiments.hpp"
#include "pmqkd/io.hpp"
#include "pmqkd/verify.hpp"
#include "pmqkd/version.hpp"

using json = nlohmann::json;
using namespace pmqkd;

namespace {

constexpr double kPi = std::numbers::pi;

struct GlobalOpts {
    std::string configPath;
    std::string outPath;
    std::string format = "csv";
    std::uint64_t seed = 1;
    int threads = 0;
    bool sidecar = false;
};

json loadConfig(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
}

template <typename T>
T field(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + key + "': " + e.what());
    }
}

channel::FluctuationMode parseMode(const std::string& name) {
    if (name == "independent-per-party") return channel::FluctuationMode::IndependentPerParty;
    if (name == "single-uniform") return channel::FluctuationMode::SingleUniform;
    throw ConfigError("unknown fluctuation_mode '" + name +
                      "' (expected independent-per-party or single-uniform)");
}

experiments::Defaults defaultsFromConfig(const json& cfg) {
    experiments::Defaults defs;
    const json ch = cfg.value("channel", json::object());
    defs.channelParams.attenuationDbPerKm = field(ch, "attenuation_db_per_km", 0.2);
    defs.channelParams.detectorEfficiency = field(ch, "detector_efficiency", 0.2);
    defs.channelParams.darkCountRate = field(ch, "dark_count_rate", 1e-8);
    const json proto = cfg.value("protocol", json::object());
    defs.ecEfficiency = field(proto, "ec_efficiency", 0.95);
    const json mis = cfg.value("misalignment", json::object());
    defs.mode = parseMode(field<std::string>(mis, "fluctuation_mode", "independent-per-party"));
    defs.quadratureNodes = field(mis, "quadrature_nodes", 65);
    defs.nMaxPhotons = field(cfg, "photon_cutoff", 10);
    return defs;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return xs;
}

bool parsesAsNumber(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

void emitTable(const io::CsvTable& table, const GlobalOpts& opts, const json& effectiveConfig,
               const std::string& subcommand) {
    std::string payload;
    if (opts.format == "csv") {
        payload = io::toCsvString(table);
    } else if (opts.format == "json") {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json obj = json::object();
            for (size_t i = 0; i < table.header.size(); ++i) {
                double num;
                if (parsesAsNumber(row[i], num))
                    obj[table.header[i]] = num;
                else
                    obj[table.header[i]] = row[i];
            }
            rows.push_back(obj);
        }
        payload = rows.dump(2) + "\n";
    } else {
        throw ConfigError("unknown output format '" + opts.format + "'");
    }

    if (opts.outPath.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(opts.outPath, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file: " + opts.outPath);
        out << payload;
    }

    if (opts.sidecar && !opts.outPath.empty()) {
        json meta;
        meta["tool"] = "pmqkd";
        meta["version"] = kVersion;
        meta["subcommand"] = subcommand;
        meta["seed"] = opts.seed;
        meta["threads"] = opts.threads;
        meta["format"] = opts.format;
        meta["config"] = effectiveConfig;
        std::ofstream out(opts.outPath + ".meta.json", std::ios::binary);
        out << meta.dump(2) << "\n";
    }
}

std::string fmt(double v) { return io::formatDouble(v); }

int runRateCurve(const GlobalOpts& opts, const json& cfg) {
    const json grid = cfg.value("grid", json::object());
    experiments::GridConfig gc;
    gc.defaults = defaultsFromConfig(cfg);
    gc.distancesKm = field(grid, "distances_km", linspace(50.0, 450.0, 9));
    gc.dimensions = field(grid, "dimensions", std::vector<int>{2, 17});
    gc.delta0s = field(grid, "delta0_values", std::vector<double>{0.0});
    gc.phiLims = field(grid, "phi_lim_values", std::vector<double>{0.0});
    gc.intensities = field(grid, "intensities", std::vector<double>{});
    gc.phaseSlicesOverride = field(cfg.value("protocol", json::object()), "phase_slices", 0);

    const auto rows = experiments::rateCurve(gc);
    io::CsvTable table;
    table.header = {"distance_km", "dimension", "delta0_rad", "phi_lim_rad",
                    "mu",          "rate_bits_per_pair", "mi_bits", "pl_bits",
                    "gain",        "plob_bits"};
    for (const auto& r : rows)
        table.rows.push_back({fmt(r.distanceKm), std::to_string(r.dimension), fmt(r.delta0),
                              fmt(r.phiLim), fmt(r.mu), fmt(r.rate), fmt(r.mi), fmt(r.pl),
                              fmt(r.gain), fmt(r.plob)});
    emitTable(table, opts, cfg, "rate-curve");
    return 0;
}

int runMisalignmentSweep(const GlobalOpts& opts, const json& cfg) {
    const json grid = cfg.value("grid", json::object());
    const int d = field(grid, "dimension", 17);
    const double distance = field(grid, "distance_km", 100.0);
    const int points = field(grid, "grid_points", 69);
    const auto rows =
        experiments::misalignmentSweep(d, distance, points, defaultsFromConfig(cfg));

    io::CsvTable table;
    table.header = {"delta0_rad", "rate_bits_per_pair"};
    for (const auto& r : rows) table.rows.push_back({fmt(r.delta0), fmt(r.rate)});
    emitTable(table, opts, cfg, "misalignment-sweep");
    return 0;
}

int runFluctuationStudy(const GlobalOpts& opts, const json& cfg, const std::string& variant) {
    const json grid = cfg.value("grid", json::object());
    experiments::FluctuationConfig fc;
    fc.defaults = defaultsFromConfig(cfg);
    fc.distanceKm = field(grid, "distance_km", 300.0);
    fc.phiLimFixed = field(grid, "phi_lim", kPi / 3.0);

    std::string xName;
    if (variant == "mi-pl-vs-phi-lim") {
        fc.variant = experiments::FluctuationVariant::MiPlVsPhiLim;
        fc.xs = field(grid, "phi_lim_values", linspace(0.0, kPi / 3.0, 13));
        xName = "phi_lim_rad";
    } else if (variant == "mi-pl-vs-mu") {
        fc.variant = experiments::FluctuationVariant::MiPlVsMu;
        fc.xs = field(grid, "intensities", linspace(0.01, 0.3, 13));
        xName = "mu";
    } else if (variant == "optimal-mu") {
        fc.variant = experiments::FluctuationVariant::OptimalMuVsPhiLim;
        fc.xs = field(grid, "phi_lim_values", linspace(0.0, kPi / 3.0, 13));
        xName = "phi_lim_rad";
    } else {
        throw ConfigError("unknown fluctuation-study variant '" + variant + "'");
    }
    if (grid.contains("dims_and_mu")) {
        fc.dimsAndMu.clear();
        for (const auto& pair : grid.at("dims_and_mu"))
            fc.dimsAndMu.emplace_back(pair.at(0).get<int>(), pair.at(1).get<double>());
    }

    const auto rows = experiments::fluctuationStudy(fc);
    io::CsvTable table;
    table.header = {"dimension", xName, "mi_bits", "pl_bits", "mu_star"};
    for (const auto& r : rows)
        table.rows.push_back(
            {std::to_string(r.dimension), fmt(r.x), fmt(r.mi), fmt(r.pl), fmt(r.muStar)});
    emitTable(table, opts, cfg, "fluctuation-study");
    return 0;
}

int runCompare(const GlobalOpts& opts, const json& cfg) {
    const json grid = cfg.value("grid", json::object());
    const auto distances = field(grid, "distances_km", linspace(100.0, 300.0, 11));
    const double delta0 = field(grid, "delta0", kPi / 6.0);
    const double phiLim = field(grid, "phi_lim", kPi / 3.0);
    const auto rows =
        experiments::compareCurves(distances, delta0, phiLim, defaultsFromConfig(cfg));

    io::CsvTable table;
    table.header = {"distance_km", "rate_17", "rate_2_misaligned", "rate_2_fluctuation_only"};
    for (const auto& r : rows)
        table.rows.push_back({fmt(r.distanceKm), fmt(r.rate17), fmt(r.rate2Misaligned),
                              fmt(r.rate2FluctuationOnly)});
    emitTable(table, opts, cfg, "compare");
    return 0;
}

int runDecoyDemo(const GlobalOpts& opts, const json& cfg) {
    const json dj = cfg.value("decoy", json::object());
    const int d = field(dj, "dimension", 2);
    const double distance = field(dj, "distance_km", 120.0);
    const double signal = field(dj, "signal_intensity", d >= 10 ? 0.03 : 0.1);
    const auto intensities = field(dj, "intensities", std::vector<double>{signal, 0.02, 1e-4});
    const int nCut = field(dj, "n_cut", 2);
    const auto rows =
        experiments::decoyDemo(d, distance, intensities, nCut, defaultsFromConfig(cfg));

    io::CsvTable table;
    table.header = {"n", "yield_true", "yield_lower", "yield_upper"};
    for (const auto& r : rows)
        table.rows.push_back(
            {std::to_string(r.n), fmt(r.yieldTrue), fmt(r.yieldLower), fmt(r.yieldUpper)});
    emitTable(table, opts, cfg, "decoy-demo");
    return 0;
}

int runMcCheck(const GlobalOpts& opts, const json& cfg) {
    const json mj = cfg.value("montecarlo", json::object());
    montecarlo::McConfig mc;
    mc.rounds = field<std::uint64_t>(mj, "rounds", 1000000);
    mc.seed = opts.seed;
    const int d = field(mj, "dimension", 2);
    const auto defs = defaultsFromConfig(cfg);
    mc.proto = experiments::makeProtocol(d, field(mj, "intensity", 0.2), defs);
    mc.channelParams = defs.channelParams;
    mc.channelParams.distanceKm = field(mj, "distance_km", 100.0);
    mc.model = channel::MisalignmentModel(field(mj, "delta0", 0.0), field(mj, "phi_lim", 0.0),
                                          defs.mode, defs.quadratureNodes);

    const auto rows = experiments::mcCheck(mc);
    io::CsvTable table;
    table.header = {"quantity", "analytic", "empirical", "sigma", "sigma_ratio"};
    bool ok = true;
    for (const auto& r : rows) {
        table.rows.push_back(
            {r.quantity, fmt(r.analytic), fmt(r.empirical), fmt(r.sigma), fmt(r.sigmaRatio)});
        ok = ok && r.sigmaRatio <= 5.0;
    }
    emitTable(table, opts, cfg, "mc-check");
    if (!ok) {
        std::cerr << "mc-check: at least one statistic beyond 5 sigma\n";
        return 2;
    }
    return 0;
}

int runTable2(const GlobalOpts& opts, const json& cfg) {
    io::CsvTable table;
    table.header = {"phase_slices", "delta_q1_over_q1"};
    for (const auto& [slices, value] : experiments::table2())
        table.rows.push_back({std::to_string(slices), fmt(value)});
    emitTable(table, opts, cfg, "table2");
    return 0;
}

int runVerify(const GlobalOpts& opts, const std::string& suite) {
    std::vector<verify::CheckResult> results;
    const auto append = [&](const std::vector<verify::CheckResult>& more) {
        results.insert(results.end(), more.begin(), more.end());
    };
    if (suite == "galois" || suite == "all") append(verify::galoisSuite());
    if (suite == "qudit" || suite == "all") append(verify::quditSuite(opts.seed));
    if (suite == "encoding" || suite == "all") append(verify::encodingSuite());
    if (results.empty())
        throw ConfigError("unknown suite '" + suite + "' (galois|qudit|encoding|all)");

    for (const auto& r : results)
        std::printf("[%s] %-45s worst deviation %.3g (tolerance %.3g)\n",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.deviation, r.tolerance);
    if (!verify::allPass(results)) {
        std::printf("verify: FAILURE\n");
        return 2;
    }
    std::printf("verify: all checks passed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"d-dimensional phase-matching QKD simulation and verification toolkit"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.configPath, "JSON configuration file");
    app.add_option("--out", opts.outPath, "output file (stdout when omitted)");
    app.add_option("--seed", opts.seed, "random seed for stochastic subcommands");
    app.add_option("--threads", opts.threads, "worker threads (0 = library default)");
    app.add_option("--format", opts.format, "output format: csv or json");
    app.add_flag("--sidecar", opts.sidecar, "write <out>.meta.json with the full configuration");

    auto* rateCmd = app.add_subcommand("rate-curve", "key rate vs distance over a parameter grid");
    auto* misCmd =
        app.add_subcommand("misalignment-sweep", "key rate vs fixed misalignment angle");
    auto* flucCmd =
        app.add_subcommand("fluctuation-study", "mutual information / privacy leakage studies");
    std::string variant = "mi-pl-vs-phi-lim";
    flucCmd->add_option("--variant", variant, "mi-pl-vs-phi-lim | mi-pl-vs-mu | optimal-mu");
    auto* cmpCmd = app.add_subcommand("compare", "17-PM vs 2-PM under misalignment+fluctuation");
    auto* decoyCmd = app.add_subcommand("decoy-demo", "analytic vs decoy-estimated yields");
    auto* mcCmd = app.add_subcommand("mc-check", "Monte Carlo vs analytic cross-validation");
    auto* t2Cmd = app.add_subcommand("table2", "discrete-randomization inaccuracy table");
    auto* verifyCmd = app.add_subcommand("verify", "run the numerical verification suites");
    std::string suite = "all";
    verifyCmd->add_option("suite", suite, "galois | qudit | encoding | all");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (opts.threads > 0) omp_set_num_threads(opts.threads);
        const json cfg = loadConfig(opts.configPath);
        if (rateCmd->parsed()) return runRateCurve(opts, cfg);
        if (misCmd->parsed()) return runMisalignmentSweep(opts, cfg);
        if (flucCmd->parsed()) return runFluctuationStudy(opts, cfg, variant);
        if (cmpCmd->parsed()) return runCompare(opts, cfg);
        if (decoyCmd->parsed()) return runDecoyDemo(opts, cfg);
        if (mcCmd->parsed()) return runMcCheck(opts, cfg);
        if (t2Cmd->parsed()) return runTable2(opts, cfg);
        if (verifyCmd->parsed()) return runVerify(opts, suite);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const TruncationError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const NumericGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const EstimationError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
