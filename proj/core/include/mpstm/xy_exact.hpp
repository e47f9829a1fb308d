#pragma once

#include "mpstm/common.hpp"

namespace mpstm {

/// Parameters of the XY chain in the sign convention of build_hamiltonian(Model::XY, {gamma, g}).
struct XyParams {
    double gamma = 0;
    double g     = 0;
    [[nodiscard]] bool incommensurate() const { return gamma * gamma + g * g < 1.0; }
};

/// E(k) = sqrt((g - cos k)^2 + gamma^2 sin^2 k).
[[nodiscard]] double xy_dispersion(const XyParams &p, double k);

struct GapLocation {
    double k_min = 0; // in [0, pi]
    double E_min = 0;
};

/// Stationary point cos k = g / (1 - gamma^2) when it lies in [-1, 1], else the better of k = 0, pi.
[[nodiscard]] GapLocation xy_gap_location(const XyParams &p);

/// v^2 = ((1 - gamma^2)^2 - g^2) / (1 - gamma^2). Throws InvalidArgument outside the regime.
[[nodiscard]] double lorentz_velocity(const XyParams &p);

/// Ground-state energy per site -1/(2 pi) int_0^pi E(k) dk by adaptive Simpson quadrature.
/// Follows from H = sum_k E(k) (n_k - 1/2) after the Jordan-Wigner / Bogoliubov transform of
/// H = -sum_j [(1+gamma) Sx Sx + (1-gamma) Sy Sy] - g sum_j Sz.
[[nodiscard]] double xy_ground_energy(const XyParams &p, double tol = 1e-12);

} // namespace mpstm
