#pragma once

#include "mpstm/uniform_mps.hpp"

namespace mpstm {

/// Dominant left/right eigenvectors of the regular TM, Hermitian, normalized to Tr(l r) = 1.
struct FixedPoints {
    Mat  l;
    Mat  r;
    cplx lambda0{1.0, 0.0};
};

/// Uses the gauge metadata when it pins a fixed point to the identity.
[[nodiscard]] FixedPoints fixed_points(const UniformMps &mps);

/// Rescale to spectral radius one and bring into the requested gauge.
/// Mixed gauge = left-orthonormal tensor whose right fixed point is diag(schmidt^2).
/// Also sets `injective` and `lambda1` from the two leading TM eigenvalues.
[[nodiscard]] UniformMps canonicalize(const UniformMps &mps, Gauge target = Gauge::mixed);

/// Frobenius-norm violation of the gauge condition (0 for Gauge::none).
[[nodiscard]] double gauge_residual(const UniformMps &mps, Gauge g);

/// |lambda_1| / |lambda_0| of the regular TM (0 for D = 1).
[[nodiscard]] double injectivity_ratio(const UniformMps &mps);

inline constexpr double kInjectivityMargin = 1e-8;

} // namespace mpstm
