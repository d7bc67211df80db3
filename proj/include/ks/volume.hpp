#pragma once

#include <cstdint>
#include <vector>

#include "ks/rng.hpp"
#include "ks/types.hpp"

namespace ks {

/// Stratified sampling plan over [-pi, pi]^n: nested max-norm shells
/// between t_k = k pi / num_strata, equal sample budget per shell.
struct StrataPlan {
    int num_strata = 100;
    long num_samples = 100000;  // total, split evenly across strata
    int n = 3;
    std::uint64_t seed = 1;

    long samples_per_stratum() const { return num_samples / num_strata; }
    double t(int k) const;
    double shell_volume(int k) const;  // vol(R_k) - vol(R_{k-1})
    void validate() const;
};

struct StratumTally {
    int k = 0;
    long hits = 0;
    long samples = 0;
    long degenerate = 0;
    long failures = 0;
    double shell_volume = 0.0;
};

struct VolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
    std::vector<StratumTally> per_stratum;
    double alpha = 0.0;
    int n = 0;
    long degenerate_total = 0;
    long failure_total = 0;
};

/// Uniform sample on the shell R_k \ R_{k-1}. Rejection from R_k while
/// the acceptance rate stays above 1%, otherwise a direct construction:
/// draw the max-norm radius from its analytic CDF, place one coordinate
/// on the corresponding cube face, fill the rest uniformly.
std::vector<double> sample_shell(int k, const StrataPlan& plan, SplitMix64& rng);

/// Stratified Monte Carlo estimate of the volume of the stable region
/// in [-pi, pi]^n. A hit is a sample classifying Stable; Degenerate
/// samples and eigenvalue failures count as misses and are tallied.
VolumeEstimate stable_volume(const StrataPlan& plan, const ModelParams& params);

struct DecayFit {
    double rho = 0.0;        // exp(slope) of the log-volume regression
    double intercept = 0.0;  // exp(offset)
    int used = 0;
    int excluded = 0;  // zero-volume estimates dropped
};

/// Least-squares fit of log(volume) against n; needs at least three
/// estimates with positive volume.
DecayFit decay_fit(const std::vector<VolumeEstimate>& estimates);

/// The same estimates expressed as fractions of the n-torus volume
/// (2 pi)^n. The decay law volume ~ rho^n is stated per unit torus
/// volume, so rho fits run on fractions; absolute volumes would fold a
/// factor 2 pi per dimension into rho.
std::vector<VolumeEstimate> as_torus_fractions(std::vector<VolumeEstimate> estimates);

/// Volumes along an alpha grid, rescaled so that alpha = 0 has value 1.
struct SweepCurve {
    int n = 0;
    std::vector<double> alphas;
    std::vector<VolumeEstimate> estimates;
    std::vector<double> rescaled;
    std::vector<double> rescaled_se;
};

/// The grid must lie in [0, pi/2) and contain 0. Each (n, alpha) run
/// draws from its own substream of plan.seed.
std::vector<SweepCurve> alpha_sweep(const std::vector<int>& n_list,
                                    const std::vector<double>& alpha_grid, const StrataPlan& plan);

}  // namespace ks
