#pragma once

#include "mpstm/correlation.hpp"
#include "mpstm/hamiltonian.hpp"

#include <vector>

namespace mpstm {

/// 512 points k_i = 2 pi (i + 1/2) / n on [0, 2 pi).
[[nodiscard]] std::vector<double> default_kgrid(int n = 512);

/// S(k) = sum_n e^{ikn} C(n) over all n, split into the overlapping (local) window and the
/// resolvent tail e^{ikw} (l|J_O (1 - e^{ik} Q T Q)^{-1} Q J_O|r), w = support.
struct StructureFactor {
    std::vector<double> k;
    std::vector<double> S;
    std::vector<double> local;     // overlap part
    std::vector<double> resolvent; // 2 Re of the tail
    double              max_imag      = 0; // largest |Im| discarded from the 2Re construction
    double              max_residual  = 0; // largest linear-solve residual
};

struct ResolventOptions {
    double tol      = 1e-10;
    int    restart  = 60;
    int    max_iter = 20000;
};

/// Resolvent evaluated by GMRES through matrix-free TM applications. O must be Hermitian.
[[nodiscard]] StructureFactor structure_factor(const UniformMps &mps, const SiteOperator &O, const std::vector<double> &kgrid,
                                               const ResolventOptions &opt = {});

/// Cross-check path: tail summed over a (truncated) spectrum and its form factors.
[[nodiscard]] StructureFactor structure_factor_spectral(const UniformMps &mps, const SiteOperator &O, const TmSpectrum &spec,
                                                        const std::vector<double> &kgrid);

/// Direct truncated Fourier sum of C(n) for |n| <= n_cut (test oracle).
[[nodiscard]] std::vector<double> structure_factor_truncated(const UniformMps &mps, const SiteOperator &O, const std::vector<double> &kgrid,
                                                             int n_cut);

/// F(k) = sum_{n,j} e^{ikn} <[O_0, [h_j, O_n]]>; only overlapping placements contribute.
[[nodiscard]] std::vector<double> oscillator_strength(const UniformMps &mps, const TwoSiteHamiltonian &h, const Mat &O,
                                                      const std::vector<double> &kgrid);

/// Upper bound 4 (4l + 2m + 1)(2l + m + 1) ||O||^2 ||h|| with support radius l and interaction range m.
[[nodiscard]] double oscillator_strength_bound(const Mat &O, const TwoSiteHamiltonian &h, int l = 0, int m = 1);

/// E_SMA(k) = F(k) / (2 S(k)). Throws if S(k) <= 0 anywhere.
[[nodiscard]] std::vector<double> sma_dispersion(const std::vector<double> &F, const std::vector<double> &S);

} // namespace mpstm
