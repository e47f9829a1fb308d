#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mpstm {

using cplx = std::complex<double>;
using Mat  = Eigen::MatrixXcd;
using Vec  = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx   I_unit{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shapes or sizes of inputs do not fit together.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A precondition on values (not shapes) is violated.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// An iterative method ran out of budget. `residual` is the last residual seen.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, double residual) : Error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Angle wrapped into [-pi, pi).
inline double wrap_phase(double phi) {
    double w = std::fmod(phi + pi, 2.0 * pi);
    if(w < 0) w += 2.0 * pi;
    return w - pi;
}

/// Distance between two angles on the circle.
inline double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

} // namespace mpstm
