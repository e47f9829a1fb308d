#pragma once

#include "mpstm/transfer.hpp"

#include <cstdint>

namespace mpstm {

enum class TmKind { regular, mixed };

/// Leading eigenvalues of a (regular or mixed) transfer matrix with polar data and eigenvectors.
/// Eigenvectors are stored as flattened columns in the conventions of transfer.hpp.
struct TmSpectrum {
    TmKind       kind = TmKind::regular;
    Eigen::Index D_bra = 0, D_ket = 0;
    Vec          eigenvalues; // |lambda| descending, ties by phase ascending
    RVec         eps;         // -log |lambda|
    RVec         phi;         // arg lambda in [-pi, pi)
    Mat          right;       // columns |j)
    Mat          left;        // columns (j|, biorthonormal to `right` under tm_pair
    RVec         ritz_residuals;
    double       biorth_residual = 0;
    double       scale           = 1; // eigenvalues were divided by this (regular kind)

    [[nodiscard]] Eigen::Index size() const { return eigenvalues.size(); }
    [[nodiscard]] bool         has_vectors() const { return right.cols() == eigenvalues.size() && left.cols() == eigenvalues.size(); }
};

struct SpectrumOptions {
    int           m       = 8;
    bool          dense   = false; // complete spectrum via dense diagonalization (D_bra D_ket <= 4096)
    bool          vectors = true;  // compute left and right eigenvectors
    double        tol     = 1e-10;
    int           max_restarts = 300;
    std::uint64_t seed    = 0x7a5eedULL;
};

inline constexpr Eigen::Index kDenseLimit = 4096;

/// Regular kind when bra and ket hold identical tensors; regular spectra are rescaled so lambda_0 = 1.
[[nodiscard]] TmSpectrum tm_spectrum(const UniformMps &bra, const UniformMps &ket, const SpectrumOptions &opt = {});

/// Fill eps and phi from eigenvalues.
void fill_polar(TmSpectrum &spec);

/// Largest |lambda - conj(lambda')| mismatch when pairing each complex eigenvalue with a partner.
/// Eigenvalues whose partner would fall beyond the retained set (magnitude at the cut) are skipped.
[[nodiscard]] double conjugation_defect(const TmSpectrum &spec);

} // namespace mpstm
