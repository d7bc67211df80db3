#include "ks/volume.hpp"

#include <algorithm>
#include <cmath>

#include "ks/spectral.hpp"

namespace ks {

double StrataPlan::t(int k) const { return pi * k / num_strata; }

double StrataPlan::shell_volume(int k) const {
    return std::pow(2.0 * t(k), n) - std::pow(2.0 * t(k - 1), n);
}

void StrataPlan::validate() const {
    if (num_strata < 1) throw std::invalid_argument("StrataPlan: num_strata must be >= 1");
    if (num_samples < num_strata) throw std::invalid_argument("StrataPlan: num_samples < num_strata");
    if (num_samples % num_strata != 0)
        throw std::invalid_argument("StrataPlan: num_samples must be divisible by num_strata");
    if (n < 2) throw std::invalid_argument("StrataPlan: need n >= 2");
}

std::vector<double> sample_shell(int k, const StrataPlan& plan, SplitMix64& rng) {
    if (k < 1 || k > plan.num_strata) throw std::invalid_argument("sample_shell: k out of range");
    const int n = plan.n;
    const double t_hi = plan.t(k);
    const double t_lo = plan.t(k - 1);
    std::vector<double> x(static_cast<size_t>(n));

    const double accept = 1.0 - std::pow(t_lo / t_hi, n);
    if (accept >= 0.01) {
        for (;;) {
            double maxabs = 0.0;
            for (int i = 0; i < n; ++i) {
                x[static_cast<size_t>(i)] = rng.uniform(-t_hi, t_hi);
                maxabs = std::max(maxabs, std::abs(x[static_cast<size_t>(i)]));
            }
            if (maxabs > t_lo) return x;
        }
    }

    // Thin shell: draw the max-norm radius from its CDF, put one
    // coordinate on a face of the radius-r cube, fill the rest.
    const double u = rng.next_double();
    const double r = std::pow(std::pow(t_lo, n) + u * (std::pow(t_hi, n) - std::pow(t_lo, n)),
                              1.0 / n);
    const int face = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double sign = rng.next() & 1 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i)
        x[static_cast<size_t>(i)] = (i == face) ? sign * r : rng.uniform(-r, r);
    return x;
}

VolumeEstimate stable_volume(const StrataPlan& plan, const ModelParams& params) {
    plan.validate();
    VolumeEstimate est;
    est.alpha = params.alpha();
    est.n = plan.n;
    est.per_stratum.reserve(static_cast<size_t>(plan.num_strata));

    const long per = plan.samples_per_stratum();
    double volume = 0.0, variance = 0.0;

    for (int k = 1; k <= plan.num_strata; ++k) {
        SplitMix64 rng = SplitMix64::substream(plan.seed, static_cast<std::uint64_t>(k));
        StratumTally tally;
        tally.k = k;
        tally.samples = per;
        tally.shell_volume = plan.shell_volume(k);
        for (long s = 0; s < per; ++s) {
            const std::vector<double> point = sample_shell(k, plan, rng);
            try {
                const SpectralReport rep = classify(Configuration(point), params);
                if (rep.cls == StabilityClass::Stable)
                    ++tally.hits;
                else if (rep.cls == StabilityClass::Degenerate)
                    ++tally.degenerate;
            } catch (const NumericalFailure&) {
                ++tally.failures;
            }
        }
        const double p = static_cast<double>(tally.hits) / per;
        volume += tally.shell_volume * p;
        variance += tally.shell_volume * tally.shell_volume * p * (1.0 - p) / per;
        est.degenerate_total += tally.degenerate;
        est.failure_total += tally.failures;
        est.per_stratum.push_back(tally);
    }
    est.volume = volume;
    est.std_error = std::sqrt(variance);
    return est;
}

DecayFit decay_fit(const std::vector<VolumeEstimate>& estimates) {
    DecayFit fit;
    std::vector<double> xs, ys;
    for (const auto& e : estimates) {
        if (e.volume > 0.0) {
            xs.push_back(static_cast<double>(e.n));
            ys.push_back(std::log(e.volume));
        } else {
            ++fit.excluded;
        }
    }
    fit.used = static_cast<int>(xs.size());
    if (fit.used < 3)
        throw std::invalid_argument("decay_fit: need at least 3 estimates with positive volume");

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= fit.used;
    my /= fit.used;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    fit.rho = std::exp(slope);
    fit.intercept = std::exp(my - slope * mx);
    return fit;
}

std::vector<VolumeEstimate> as_torus_fractions(std::vector<VolumeEstimate> estimates) {
    for (auto& e : estimates) {
        const double cube = std::pow(2.0 * pi, e.n);
        e.volume /= cube;
        e.std_error /= cube;
        for (auto& t : e.per_stratum) t.shell_volume /= cube;
    }
    return estimates;
}

std::vector<SweepCurve> alpha_sweep(const std::vector<int>& n_list,
                                    const std::vector<double>& alpha_grid, const StrataPlan& plan) {
    bool has_zero = false;
    for (double a : alpha_grid) {
        if (a == 0.0) has_zero = true;
        if (!(a >= 0.0 && a < half_pi))
            throw std::invalid_argument("alpha_sweep: grid must lie in [0, pi/2)");
    }
    if (!has_zero) throw std::invalid_argument("alpha_sweep: grid must include alpha = 0");

    std::vector<SweepCurve> curves;
    for (size_t ni = 0; ni < n_list.size(); ++ni) {
        SweepCurve curve;
        curve.n = n_list[ni];
        curve.alphas = alpha_grid;
        double base_volume = 0.0, base_se = 0.0;
        for (size_t ai = 0; ai < alpha_grid.size(); ++ai) {
            StrataPlan run = plan;
            run.n = curve.n;
            // Independent, reproducible substream per (n, alpha) run.
            run.seed = SplitMix64::substream(plan.seed, (ni << 16) | ai).next();
            VolumeEstimate est = stable_volume(run, ModelParams(alpha_grid[ai]));
            if (alpha_grid[ai] == 0.0) {
                base_volume = est.volume;
                base_se = est.std_error;
            }
            curve.estimates.push_back(std::move(est));
        }
        if (base_volume <= 0.0)
            throw std::invalid_argument("alpha_sweep: alpha = 0 volume estimate is zero");
        for (const auto& est : curve.estimates) {
            curve.rescaled.push_back(est.volume / base_volume);
            // First-order error propagation for the ratio.
            const double rel_base = base_se / base_volume;
            const double rel_this = est.volume > 0.0 ? est.std_error / est.volume : 0.0;
            const double ratio = est.volume / base_volume;
            curve.rescaled_se.push_back(
                est.volume > 0.0 ? ratio * std::sqrt(rel_this * rel_this + rel_base * rel_base)
                                 : est.std_error / base_volume);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace ks
