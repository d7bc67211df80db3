#include "ks/locking.hpp"

#include <cmath>

namespace ks {

LockReport lock_report(const Configuration& theta, const Frequencies& omega,
                       const ModelParams& params, double lock_tol) {
    if (!(lock_tol >= 1e-12 && lock_tol <= 1e-6))
        throw std::invalid_argument("lock_report: lock_tol must be in [1e-12, 1e-6]");
    if (static_cast<int>(omega.size()) != theta.size())
        throw std::invalid_argument("lock_report: omega length does not match theta");

    const Frequencies f = vector_field(theta, params);
    const int n = theta.size();
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += omega[static_cast<size_t>(i)] + f[static_cast<size_t>(i)];
    mean /= n;

    LockReport rep;
    rep.tol = lock_tol;
    rep.velocity = mean;
    for (int i = 0; i < n; ++i)
        rep.residual = std::max(rep.residual,
                                std::abs(omega[static_cast<size_t>(i)] + f[static_cast<size_t>(i)] - mean));
    rep.locked = rep.residual <= lock_tol;
    return rep;
}

Frequencies omega_for_fixed_point(const Configuration& theta, const ModelParams& params) {
    Frequencies omega = vector_field(theta, params);
    for (double& v : omega) v = -v;
    return omega;
}

Frequencies gauge_shift(const Frequencies& omega, double kappa) {
    Frequencies shifted = omega;
    for (double& v : shifted) v += kappa;
    return shifted;
}

double pi_state_phi(double alpha) {
    if (std::abs(alpha) >= half_pi) throw std::invalid_argument("pi_state_phi: require |alpha| < pi/2");
    return -2.0 * std::atan(std::sin(alpha) / (3.0 * std::cos(alpha)));
}

std::vector<LockedState> six_states(const ModelParams& params) {
    const double alpha = params.alpha();
    const double twist_velocity = 3.0 * std::sin(alpha);
    const double phi = pi_state_phi(alpha);
    const double pi_velocity = std::sin(alpha) + std::sin(alpha - phi);
    const double third = two_pi / 3.0;

    std::vector<LockedState> states;
    states.push_back({"origin", Configuration({0.0, 0.0, 0.0}), 0.0});
    states.push_back({"twist+", Configuration({0.0, third, 2.0 * third}), twist_velocity});
    states.push_back({"twist-", Configuration({0.0, 2.0 * third, third}), twist_velocity});
    states.push_back({"pi-1", Configuration({pi + phi, 0.0, 0.0}), pi_velocity});
    states.push_back({"pi-2", Configuration({0.0, pi + phi, 0.0}), pi_velocity});
    states.push_back({"pi-3", Configuration({0.0, 0.0, pi + phi}), pi_velocity});
    return states;
}

Trajectory integrate(const Configuration& theta0, const Frequencies& omega,
                     const ModelParams& params, double dt, double t_end) {
    if (!(dt > 0.0 && dt <= 1e-2)) throw std::invalid_argument("integrate: require 0 < dt <= 1e-2");
    if (!(t_end >= 0.0)) throw std::invalid_argument("integrate: require t_end >= 0");
    const double steps_d = t_end / dt;
    if (steps_d > 1e7) throw std::invalid_argument("integrate: more than 1e7 steps requested");
    const long steps = std::lround(steps_d);
    const size_t n = theta0.angles().size();
    if (omega.size() != n) throw std::invalid_argument("integrate: omega length does not match theta");

    const double alpha = params.alpha();
    std::vector<double> state = theta0.angles();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto deriv = [&](const std::vector<double>& s, std::vector<double>& out) {
        vector_field_raw(s, alpha, out);
        for (size_t i = 0; i < n; ++i) out[i] += omega[i];
    };

    Trajectory traj;
    traj.dt = dt;
    traj.times.reserve(static_cast<size_t>(steps) + 1);
    traj.states.reserve(static_cast<size_t>(steps) + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(state);

    for (long step = 1; step <= steps; ++step) {
        deriv(state, k1);
        for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
        deriv(tmp, k2);
        for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
        deriv(tmp, k3);
        for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
        deriv(tmp, k4);
        for (size_t i = 0; i < n; ++i) {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(state[i])) throw NumericalFailure("integrate: state blew up");
        }
        traj.times.push_back(step * dt);
        traj.states.push_back(state);
    }
    return traj;
}

Trajectory gauge_shift(const Trajectory& traj, double kappa) {
    Trajectory shifted = traj;
    for (size_t i = 0; i < shifted.size(); ++i) {
        const double offset = kappa * shifted.times[i];
        for (double& v : shifted.states[i]) v += offset;
    }
    return shifted;
}

std::vector<SurfacePoint> surface_points(const MeanZeroBasis& basis,
                                         const std::vector<std::vector<double>>& coords,
                                         const ModelParams& params) {
    if (basis.n() != 3 && basis.n() != 4)
        throw std::invalid_argument("surface_points: supported for n = 3 or 4");
    std::vector<SurfacePoint> out;
    out.reserve(coords.size());
    for (const auto& c : coords) {
        SurfacePoint p;
        p.coords = c;
        const Configuration theta(basis.embed(c));
        p.omega = vector_field(theta, params);
        const SpectralReport rep = classify(theta, params);
        p.n_plus = rep.n_plus;
        p.cls = rep.cls;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<SurfaceSample> frequency_surface(const PlaneGrid& grid, const ModelParams& params) {
    grid.validate();
    const MeanZeroBasis basis(3);
    std::vector<SurfaceSample> samples;
    samples.reserve(static_cast<size_t>(grid.resolution) * grid.resolution);
    for (int j = 0; j < grid.resolution; ++j) {
        for (int i = 0; i < grid.resolution; ++i) {
            SurfaceSample s;
            s.x = grid.x(i);
            s.y = grid.y(j);
            const double coords[2] = {s.x, s.y};
            const Configuration theta(basis.embed(coords));
            s.omega = vector_field(theta, params);
            const SpectralReport rep = classify(theta, params);
            s.n_plus = rep.n_plus;
            s.cls = rep.cls;
            samples.push_back(std::move(s));
        }
    }
    return samples;
}

}  // namespace ks
