#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ks/index_theorem.hpp"
#include "ks/locking.hpp"
#include "ks/model.hpp"
#include "ks/spectral.hpp"
#include "ks/volume.hpp"

namespace ks::atlas {

inline constexpr const char* version = KSATLAS_VERSION;

/// Reproducibility record written next to every output file and, minus
/// the wall time, embedded as a '#' comment so CSV re-runs stay
/// byte-identical.
struct RunManifest {
    std::string command;
    nlohmann::json parameters;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::string code_version = version;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
    std::string comment_line() const;  // deterministic, no wall time
    void write_sidecar(const std::string& output_path, double wall_seconds) const;
};

enum class ScanMode { Index, Mod2, SDagger, Surface };

ScanMode scan_mode_from_string(const std::string& s);
const char* to_string(ScanMode m);

/// Grid scan over the n = 3 mean-zero plane. Cell values:
///   Index:   n_plus from the QR spectrum
///   Mod2:    parity-predicted n_plus mod 2 (certificate), -1 inapplicable
///   SDagger: membership 0/1
///   Surface: (omega_1, omega_2, omega_3, n_plus)
struct ScanResult {
    PlaneGrid grid;
    ScanMode mode = ScanMode::Index;
    double alpha = 0.0;
    std::vector<std::string> columns;     // beyond x, y
    std::vector<bool> integer_column;
    std::vector<double> values;           // row-major, y outer, x inner
    int value_width = 1;

    double value(int j, int i, int c = 0) const {
        return values[(static_cast<size_t>(j) * grid.resolution + i) * value_width + c];
    }
};

int index_cell(const Configuration& theta, const ModelParams& params);
int mod2_cell(const Configuration& theta, const ModelParams& params);

ScanResult run_scan(const PlaneGrid& grid, ScanMode mode, const ModelParams& params);

void write_scan_csv(const ScanResult& result, const RunManifest& manifest, std::ostream& os);

/// Volume-run rows: one per (n, alpha); rho_fit is filled on every row of
/// an alpha group that admits a fit across >= 3 n values, rescaled when
/// the alpha list contains 0 for that n.
struct VolumeRow {
    int n = 0;
    double alpha = 0.0;
    double volume = 0.0;
    double std_error = 0.0;
    bool has_rescaled = false;
    double rescaled = 0.0;
    bool has_rho = false;
    double rho_fit = 0.0;
};

std::vector<VolumeRow> volume_rows(const std::vector<int>& n_list,
                                   const std::vector<double>& alpha_list, const StrataPlan& plan);

void write_volume_csv(const std::vector<VolumeRow>& rows, const RunManifest& manifest,
                      std::ostream& os);

/// Single-point report: spectrum, membership, certificate, lock data.
nlohmann::json classify_report(const Configuration& theta, const Frequencies& omega,
                               const ModelParams& params, double tol, double lock_tol);

/// The six N = 3 families with spectral and lock reports attached.
nlohmann::json states_report(const ModelParams& params);

/// Doubles rendered with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace ks::atlas
