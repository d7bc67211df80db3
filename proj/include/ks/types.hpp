#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ks {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2.0;

/// Thrown when an iterative numerical routine fails to converge.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Natural frequencies, one per oscillator (radians per unit time).
using Frequencies = std::vector<double>;

/// Phase state of n >= 2 oscillators. Angles are canonicalized to
/// (-pi, pi] on construction; all trigonometry downstream acts on the
/// stored values, so periodicity is handled once, here.
class Configuration {
public:
    explicit Configuration(std::vector<double> theta);

    int size() const { return static_cast<int>(theta_.size()); }
    double operator[](int i) const { return theta_[static_cast<size_t>(i)]; }
    const std::vector<double>& angles() const { return theta_; }

    /// Maps x to the representative in (-pi, pi].
    static double canonical_angle(double x);

private:
    std::vector<double> theta_;
};

/// Model parameters. The phase-lag alpha must satisfy |alpha| < pi/2
/// strictly; the coupling constant is fixed to 1 (scaling the coupling
/// is equivalent to scaling the frequencies, so it is the caller's job).
class ModelParams {
public:
    explicit ModelParams(double alpha);

    double alpha() const { return alpha_; }
    static constexpr double gamma = 1.0;

private:
    double alpha_;
};

}  // namespace ks
