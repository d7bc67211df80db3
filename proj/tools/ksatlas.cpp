#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ks/atlas.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || item.empty())
            throw std::invalid_argument("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

// Accepts "3,4,5" or a range "3..8".
std::vector<int> parse_int_list(const std::string& s) {
    auto to_int = [](const std::string& item) {
        try {
            size_t pos = 0;
            const int v = std::stoi(item, &pos);
            if (pos == item.size() && !item.empty()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("not an integer: '" + item + "'");
    };
    std::vector<int> out;
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const int lo = to_int(s.substr(0, dots));
        const int hi = to_int(s.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("bad range: " + s);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(item));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("KSATLAS_OUTDIR")) return env;
    return ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_output_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path);
    out << body;
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability atlas for phase-locked Kuramoto-Sakaguchi configurations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("ksatlas ") + ks::atlas::version);

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "Spectral/index/lock report for one state");
    std::string theta_arg, omega_arg;
    double alpha = 0.0, tol = 1e-9, lock_tol = 1e-10;
    classify_cmd->add_option("--theta", theta_arg, "comma-separated angles (radians)")->required();
    classify_cmd->add_option("--alpha", alpha, "phase-lag, |alpha| < pi/2")->required();
    classify_cmd->add_option("--omega", omega_arg, "comma-separated frequencies (default 0)");
    classify_cmd->add_option("--tol", tol, "classification tolerance");
    classify_cmd->add_option("--lock-tol", lock_tol, "lock residual tolerance");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Grid scan of the n = 3 mean-zero plane");
    std::string mode_arg = "index", scan_out;
    ks::PlaneGrid grid;
    scan_cmd->add_option("--alpha", alpha, "phase-lag")->required();
    scan_cmd->add_option("--resolution", grid.resolution, "points per axis");
    scan_cmd->add_option("--mode", mode_arg, "index | mod2 | sdagger | surface");
    scan_cmd->add_option("--x-min", grid.x_min);
    scan_cmd->add_option("--x-max", grid.x_max);
    scan_cmd->add_option("--y-min", grid.y_min);
    scan_cmd->add_option("--y-max", grid.y_max);
    scan_cmd->add_option("--out", scan_out, "output CSV path");

    // volume
    auto* volume_cmd = app.add_subcommand("volume", "Stratified stable-region volume runs");
    std::string n_list_arg = "3..8", alpha_list_arg = "0", volume_out;
    int strata = 100;
    long samples = 100000;
    std::uint64_t seed = 1;
    volume_cmd->add_option("--n-list", n_list_arg, "e.g. 3..8 or 3,5");
    volume_cmd->add_option("--alpha-list", alpha_list_arg, "comma-separated phase-lags");
    volume_cmd->add_option("--strata", strata, "number of shells");
    volume_cmd->add_option("--samples", samples, "total samples per run");
    volume_cmd->add_option("--seed", seed, "RNG seed");
    volume_cmd->add_option("--out", volume_out, "output CSV path");

    // states
    auto* states_cmd = app.add_subcommand("states", "The six N = 3 phase-locked families");
    states_cmd->add_option("--alpha", alpha, "phase-lag")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (classify_cmd->parsed()) {
            const std::vector<double> theta = parse_double_list(theta_arg);
            std::vector<double> omega(theta.size(), 0.0);
            if (!omega_arg.empty()) omega = parse_double_list(omega_arg);
            const ks::ModelParams params(alpha);
            nlohmann::json report = ks::atlas::classify_report(ks::Configuration(theta), omega,
                                                               params, tol, lock_tol);
            ks::atlas::RunManifest manifest;
            manifest.command = "classify";
            manifest.parameters = {{"theta", theta_arg}, {"alpha", alpha}, {"omega", omega},
                                   {"tol", tol},         {"lock_tol", lock_tol}};
            report["manifest"] = manifest.to_json();
            std::cout << report.dump(2) << "\n";
        } else if (scan_cmd->parsed()) {
            Timer timer;
            const ks::ModelParams params(alpha);
            const ks::atlas::ScanMode mode = ks::atlas::scan_mode_from_string(mode_arg);
            if (scan_out.empty())
                scan_out = join_path(default_out_dir(),
                                     std::string("scan_") + ks::atlas::to_string(mode) + ".csv");
            ks::atlas::RunManifest manifest;
            manifest.command = "scan";
            manifest.parameters = {{"alpha", alpha},
                                   {"mode", mode_arg},
                                   {"resolution", grid.resolution},
                                   {"x_min", grid.x_min},
                                   {"x_max", grid.x_max},
                                   {"y_min", grid.y_min},
                                   {"y_max", grid.y_max}};
            manifest.outputs = {scan_out};
            const ks::atlas::ScanResult result = ks::atlas::run_scan(grid, mode, params);
            std::ostringstream body;
            ks::atlas::write_scan_csv(result, manifest, body);
            write_output_file(scan_out, body.str());
            manifest.write_sidecar(scan_out + ".manifest.json", timer.seconds());
            std::cerr << "wrote " << scan_out << "\n";
        } else if (volume_cmd->parsed()) {
            Timer timer;
            const std::vector<int> n_list = parse_int_list(n_list_arg);
            const std::vector<double> alpha_list = parse_double_list(alpha_list_arg);
            ks::StrataPlan plan;
            plan.num_strata = strata;
            plan.num_samples = samples;
            plan.seed = seed;
            if (volume_out.empty()) volume_out = join_path(default_out_dir(), "volume.csv");
            ks::atlas::RunManifest manifest;
            manifest.command = "volume";
            manifest.has_seed = true;
            manifest.seed = seed;
            manifest.parameters = {{"n_list", n_list_arg},
                                   {"alpha_list", alpha_list_arg},
                                   {"strata", strata},
                                   {"samples", samples},
                                   {"seed", seed}};
            manifest.outputs = {volume_out};
            const auto rows = ks::atlas::volume_rows(n_list, alpha_list, plan);
            std::ostringstream body;
            ks::atlas::write_volume_csv(rows, manifest, body);
            write_output_file(volume_out, body.str());
            manifest.write_sidecar(volume_out + ".manifest.json", timer.seconds());
            std::cerr << "wrote " << volume_out << "\n";
        } else if (states_cmd->parsed()) {
            const ks::ModelParams params(alpha);
            nlohmann::json report = ks::atlas::states_report(params);
            ks::atlas::RunManifest manifest;
            manifest.command = "states";
            manifest.parameters = {{"alpha", alpha}};
            report["manifest"] = manifest.to_json();
            std::cout << report.dump(2) << "\n";
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const ks::NumericalFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
