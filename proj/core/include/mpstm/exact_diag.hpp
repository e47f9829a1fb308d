#pragma once

#include "mpstm/hamiltonian.hpp"

#include <optional>
#include <vector>

namespace mpstm {

/// Cap on the full Hilbert-space dimension d^L.
inline constexpr long long kEdMaxDim = 1LL << 18;

struct EdOptions {
    int                n_low     = 4;            // eigenvalues kept per sector
    std::optional<int> k_sector;                 // momentum 2 pi m / L; all sectors when empty
    bool               want_vector = true;       // ground vector in the full product basis
    int                dense_limit = 3000;       // sector dimension above which Krylov is used
};

struct EdLevel {
    double E = 0;
    int    m = 0; // momentum 2 pi m / L, m in [0, L)
};

/// Periodic chain sum_j h_{j,j+1}, sites indexed 0..L-1, basis index sum_j s_j d^j.
struct EdResult {
    int                              L  = 0;
    int                              d  = 2;
    double                           E0 = 0;
    double                           gap = 0;  // lowest level above E0 (any sector)
    int                              ground_m = 0;
    Vec                              ground;   // momentum eigenstate, empty unless requested
    std::vector<std::vector<double>> sector_levels; // ascending, indexed by m (empty if skipped)
    std::vector<EdLevel>             lowest;   // union of the sector levels, ascending

    [[nodiscard]] double momentum(int m) const { return 2.0 * pi * m / L; }
};

/// Translation-resolved diagonalization. Throws DimensionError when d^L exceeds kEdMaxDim.
[[nodiscard]] EdResult ed_ground_state(const TwoSiteHamiltonian &h, int L, const EdOptions &opt = {});

/// H |psi> in the full product basis.
[[nodiscard]] Vec ed_apply_h(const TwoSiteHamiltonian &h, int L, const Vec &psi);

/// O_site |psi> for a single-site operator.
[[nodiscard]] Vec ed_apply_site(const Mat &O, int d, int L, int site, const Vec &psi);

/// One grid point of the single-mode estimate evaluated on an exact ground state.
struct EdSmaPoint {
    int    m = 0;
    double k = 0;
    double S = 0; // (1/L) <O_k^dagger O_k>
    double F = 0; // (1/L) <[O_k^dagger, [H, O_k]]>
    double E_sma = 0;
};

/// Lowest excitation energy above E0 with momentum 2 pi m / L (the ground state itself excluded).
[[nodiscard]] double ed_sector_excitation(const EdResult &gs, int m);

/// Single-site Hermitian O, zero-meaned on the ground state; O_k = sum_n e^{ikn} O_n.
[[nodiscard]] std::vector<EdSmaPoint> ed_sma(const TwoSiteHamiltonian &h, const EdResult &gs, const Mat &O);

} // namespace mpstm
