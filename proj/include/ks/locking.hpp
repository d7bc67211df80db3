#pragma once

#include <string>
#include <vector>

#include "ks/model.hpp"
#include "ks/spectral.hpp"
#include "ks/types.hpp"

namespace ks {

/// Phase-locking verdict for (theta, omega): a state is locked when
/// omega + f(theta) is a multiple of the all-ones vector, in which case
/// the whole configuration precesses rigidly at that rate.
struct LockReport {
    bool locked = false;
    double velocity = 0.0;  // c, the mean of omega + f(theta)
    double residual = 0.0;  // max_i |omega_i + f_i(theta) - c|
    double tol = 1e-10;
};

LockReport lock_report(const Configuration& theta, const Frequencies& omega,
                       const ModelParams& params, double lock_tol = 1e-10);

/// Frequencies making theta a fixed point: omega = -f(theta).
Frequencies omega_for_fixed_point(const Configuration& theta, const ModelParams& params);

/// The frequency shift equivalent to boosting a solution by kappa:
/// eta(t) = theta(t) + kappa t 1 solves the system with omega + kappa 1.
Frequencies gauge_shift(const Frequencies& omega, double kappa);

/// Correction angle for the pi-states: phi(alpha) = -2 atan(sin a / (3 cos a)).
/// Zeroes the residual of sin(a - phi) - sin(a) - 2 sin(a + phi).
double pi_state_phi(double alpha);

/// One of the six N = 3 phase-locked families at a given alpha.
struct LockedState {
    std::string label;
    Configuration theta;
    double velocity;  // precession rate with omega = 0
};

/// The origin, the two twist states, and the three corrected pi-states.
std::vector<LockedState> six_states(const ModelParams& params);

/// Fixed-step trajectory. States are stored unwrapped so that rigid
/// rotations accumulate linearly; configuration(i) canonicalizes.
struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    size_t size() const { return times.size(); }
    Configuration configuration(size_t i) const { return Configuration(states[i]); }
};

/// Classical fixed-step RK4 on d theta/dt = omega + f(theta).
/// Requires 0 < dt <= 1e-2 and t_end/dt <= 1e7.
Trajectory integrate(const Configuration& theta0, const Frequencies& omega,
                     const ModelParams& params, double dt, double t_end);

/// The boosted trajectory eta(t) = theta(t) + kappa t 1.
Trajectory gauge_shift(const Trajectory& traj, double kappa);

/// One row of frequency-surface data: the plane point, its image under
/// f, and the spectral classification there.
struct SurfaceSample {
    double x = 0.0, y = 0.0;
    Frequencies omega;
    int n_plus = 0;
    StabilityClass cls = StabilityClass::Degenerate;
};

/// Samples f over a grid in the n = 3 mean-zero plane (y-major order:
/// the outer loop runs over y, the inner over x).
std::vector<SurfaceSample> frequency_surface(const PlaneGrid& grid, const ModelParams& params);

/// Extension hook past the plane scans: the same surface data at
/// arbitrary mean-zero coordinates, n - 1 per point, for n = 3 or 4.
struct SurfacePoint {
    std::vector<double> coords;
    Frequencies omega;
    int n_plus = 0;
    StabilityClass cls = StabilityClass::Degenerate;
};

std::vector<SurfacePoint> surface_points(const MeanZeroBasis& basis,
                                         const std::vector<std::vector<double>>& coords,
                                         const ModelParams& params);

}  // namespace ks
