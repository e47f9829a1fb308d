#pragma once

#include "mpstm/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mpstm {

enum class Model { XY, XXZ, BLBQ, FIELD_ONLY };

/// Nearest-neighbour bond term h acting on sites (j, j+1); basis index s_j * d + s_{j+1}.
struct TwoSiteHamiltonian {
    int                 d = 2;
    Mat                 h;
    Model               model = Model::XY;
    std::vector<double> params;

    [[nodiscard]] std::string name() const;
    /// Largest absolute eigenvalue of h (operator norm of the Hermitian bond term).
    [[nodiscard]] double norm() const;
};

[[nodiscard]] std::string_view model_name(Model m);
[[nodiscard]] Model            parse_model(std::string_view tag);
[[nodiscard]] std::size_t      model_param_count(Model m);

/// Parameters per model:
///   XY         (gamma, g)   h = -[(1+gamma) SxSx + (1-gamma) SySy] - (g/2)(Sz.1 + 1.Sz)
///   XXZ        (Delta, h)   h = -[SxSx + SySy + Delta SzSz]       - (h/2)(Sz.1 + 1.Sz)
///   BLBQ       (theta)      h = cos(theta) S.S + sin(theta) (S.S)^2, spin 1
///   FIELD_ONLY (g)          h = -(g/2)(Sz.1 + 1.Sz)
/// Single-site fields are split evenly over the two bonds touching a site.
[[nodiscard]] TwoSiteHamiltonian build_hamiltonian(Model model, const std::vector<double> &params);

/// max |h - h^dagger|
[[nodiscard]] double hermiticity_defect(const Mat &h);

} // namespace mpstm
