#include "ks/atlas.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace ks::atlas {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json RunManifest::to_json() const {
    json j{{"command", command},
           {"parameters", parameters},
           {"code_version", code_version},
           {"outputs", outputs}};
    if (has_seed) j["seed"] = seed;
    return j;
}

std::string RunManifest::comment_line() const { return "# manifest " + to_json().dump(); }

void RunManifest::write_sidecar(const std::string& output_path, double wall_seconds) const {
    json j = to_json();
    j["wall_time_seconds"] = wall_seconds;
    std::ofstream out(output_path);
    if (!out) throw std::ios_base::failure("cannot write manifest: " + output_path);
    out << j.dump(2) << "\n";
}

ScanMode scan_mode_from_string(const std::string& s) {
    if (s == "index") return ScanMode::Index;
    if (s == "mod2") return ScanMode::Mod2;
    if (s == "sdagger") return ScanMode::SDagger;
    if (s == "surface") return ScanMode::Surface;
    throw std::invalid_argument("unknown scan mode: " + s);
}

const char* to_string(ScanMode m) {
    switch (m) {
        case ScanMode::Index: return "index";
        case ScanMode::Mod2: return "mod2";
        case ScanMode::SDagger: return "sdagger";
        case ScanMode::Surface: return "surface";
    }
    return "?";
}

int index_cell(const Configuration& theta, const ModelParams& params) {
    return classify(theta, params).n_plus;
}

int mod2_cell(const Configuration& theta, const ModelParams& params) {
    return index_certificate(theta, params).predicted_mod2();
}

ScanResult run_scan(const PlaneGrid& grid, ScanMode mode, const ModelParams& params) {
    grid.validate();
    ScanResult result;
    result.grid = grid;
    result.mode = mode;
    result.alpha = params.alpha();
    switch (mode) {
        case ScanMode::Index:
        case ScanMode::Mod2:
        case ScanMode::SDagger:
            result.columns = {"value"};
            result.integer_column = {true};
            break;
        case ScanMode::Surface:
            result.columns = {"w1", "w2", "w3", "n_plus"};
            result.integer_column = {false, false, false, true};
            break;
    }
    result.value_width = static_cast<int>(result.columns.size());
    result.values.reserve(static_cast<size_t>(grid.resolution) * grid.resolution *
                          result.value_width);

    const MeanZeroBasis basis(3);
    for (int j = 0; j < grid.resolution; ++j) {
        for (int i = 0; i < grid.resolution; ++i) {
            const double coords[2] = {grid.x(i), grid.y(j)};
            const Configuration theta(basis.embed(coords));
            switch (mode) {
                case ScanMode::Index:
                    result.values.push_back(index_cell(theta, params));
                    break;
                case ScanMode::Mod2:
                    result.values.push_back(mod2_cell(theta, params));
                    break;
                case ScanMode::SDagger:
                    result.values.push_back(s_dagger_member(theta, params) ? 1.0 : 0.0);
                    break;
                case ScanMode::Surface: {
                    const Frequencies f = vector_field(theta, params);
                    result.values.push_back(f[0]);
                    result.values.push_back(f[1]);
                    result.values.push_back(f[2]);
                    result.values.push_back(classify(theta, params).n_plus);
                    break;
                }
            }
        }
    }
    return result;
}

void write_scan_csv(const ScanResult& result, const RunManifest& manifest, std::ostream& os) {
    os << manifest.comment_line() << "\n";
    os << "# rows run y-major: the outer loop is y from y_min to y_max, the inner loop x\n";
    os << "x,y";
    for (const auto& c : result.columns) os << "," << c;
    os << "\n";
    const int res = result.grid.resolution;
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            os << format_double(result.grid.x(i)) << "," << format_double(result.grid.y(j));
            for (int c = 0; c < result.value_width; ++c) {
                const double v = result.value(j, i, c);
                if (result.integer_column[static_cast<size_t>(c)])
                    os << "," << static_cast<long>(v);
                else
                    os << "," << format_double(v);
            }
            os << "\n";
        }
    }
}

std::vector<VolumeRow> volume_rows(const std::vector<int>& n_list,
                                   const std::vector<double>& alpha_list, const StrataPlan& plan) {
    struct Cell {
        VolumeEstimate est;
    };
    std::vector<std::vector<Cell>> table(n_list.size());

    for (size_t ni = 0; ni < n_list.size(); ++ni) {
        for (size_t ai = 0; ai < alpha_list.size(); ++ai) {
            StrataPlan run = plan;
            run.n = n_list[ni];
            run.seed = SplitMix64::substream(plan.seed, (ni << 16) | ai).next();
            table[ni].push_back({stable_volume(run, ModelParams(alpha_list[ai]))});
        }
    }

    // One decay fit per alpha across the n list, when >= 3 volumes are
    // positive. Fit on torus fractions so rho tracks the per-dimension
    // decay of the stable probability.
    std::vector<bool> has_rho(alpha_list.size(), false);
    std::vector<double> rho(alpha_list.size(), 0.0);
    if (n_list.size() >= 3) {
        for (size_t ai = 0; ai < alpha_list.size(); ++ai) {
            std::vector<VolumeEstimate> column;
            for (size_t ni = 0; ni < n_list.size(); ++ni) column.push_back(table[ni][ai].est);
            try {
                rho[ai] = decay_fit(as_torus_fractions(std::move(column))).rho;
                has_rho[ai] = true;
            } catch (const std::invalid_argument&) {
                // fewer than 3 positive estimates; leave the column empty
            }
        }
    }

    std::vector<VolumeRow> rows;
    for (size_t ni = 0; ni < n_list.size(); ++ni) {
        double base = 0.0;
        for (size_t ai = 0; ai < alpha_list.size(); ++ai)
            if (alpha_list[ai] == 0.0) base = table[ni][ai].est.volume;
        for (size_t ai = 0; ai < alpha_list.size(); ++ai) {
            VolumeRow row;
            row.n = n_list[ni];
            row.alpha = alpha_list[ai];
            row.volume = table[ni][ai].est.volume;
            row.std_error = table[ni][ai].est.std_error;
            if (base > 0.0 && alpha_list.size() > 1) {
                row.has_rescaled = true;
                row.rescaled = row.volume / base;
            }
            if (has_rho[ai]) {
                row.has_rho = true;
                row.rho_fit = rho[ai];
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void write_volume_csv(const std::vector<VolumeRow>& rows, const RunManifest& manifest,
                      std::ostream& os) {
    os << manifest.comment_line() << "\n";
    os << "n,alpha,volume,std_error,rescaled,rho_fit\n";
    for (const auto& r : rows) {
        os << r.n << "," << format_double(r.alpha) << "," << format_double(r.volume) << ","
           << format_double(r.std_error) << ",";
        if (r.has_rescaled) os << format_double(r.rescaled);
        os << ",";
        if (r.has_rho) os << format_double(r.rho_fit);
        os << "\n";
    }
}

namespace {

json spectral_json(const SpectralReport& rep) {
    json eigs = json::array();
    for (const auto& lam : rep.eigenvalues) eigs.push_back({lam.real(), lam.imag()});
    json j{{"eigenvalues", eigs},
           {"n_plus", rep.n_plus},
           {"zero_multiplicity", rep.zero_multiplicity},
           {"degenerate_markers", rep.degenerate_markers},
           {"class", to_string(rep.cls)},
           {"tol", rep.tol}};
    if (rep.cls == StabilityClass::Unstable) j["unstable_count"] = rep.unstable_count;
    return j;
}

json certificate_json(const IndexCertificate& cert) {
    json j{{"verdict", to_string(cert.verdict)},
           {"n_plus_jacobian", cert.n_plus_jacobian}};
    if (!cert.reason.empty()) j["reason"] = cert.reason;
    if (std::isfinite(cert.c0)) {
        j["c0"] = cert.c0;
        j["c1"] = cert.c1;
        j["c2"] = cert.c2;
        j["roots"] = cert.roots;
        j["n_roots_in_unit_interval"] = cert.n_roots;
        j["n_plus_diag"] = cert.n_plus_diag;
    }
    if (cert.applicable()) {
        j["lambda0_prime"] = cert.lambda0_prime;
        j["lambda0_prime_sign"] = cert.lambda0_prime_sign;
        j["parity"] = cert.parity;
        j["predicted_mod2"] = cert.predicted_mod2();
    }
    return j;
}

json lock_json(const LockReport& rep) {
    return json{{"locked", rep.locked},
                {"velocity", rep.velocity},
                {"residual", rep.residual},
                {"tol", rep.tol}};
}

}  // namespace

json classify_report(const Configuration& theta, const Frequencies& omega,
                     const ModelParams& params, double tol, double lock_tol) {
    json j;
    j["theta"] = theta.angles();
    j["alpha"] = params.alpha();
    j["omega"] = omega;
    j["spectral"] = spectral_json(classify(theta, params, tol));
    j["s_dagger"] = s_dagger_member(theta, params);
    j["index_certificate"] = certificate_json(index_certificate(theta, params, tol));
    j["lock"] = lock_json(lock_report(theta, omega, params, lock_tol));
    return j;
}

json states_report(const ModelParams& params) {
    json arr = json::array();
    const Frequencies omega(3, 0.0);
    for (const auto& state : six_states(params)) {
        json j;
        j["label"] = state.label;
        j["theta"] = state.theta.angles();
        j["velocity"] = state.velocity;
        j["spectral"] = spectral_json(classify(state.theta, params));
        j["lock"] = lock_json(lock_report(state.theta, omega, params));
        arr.push_back(std::move(j));
    }
    json out;
    out["alpha"] = params.alpha();
    out["phi"] = pi_state_phi(params.alpha());
    out["states"] = std::move(arr);
    return out;
}

}  // namespace ks::atlas
