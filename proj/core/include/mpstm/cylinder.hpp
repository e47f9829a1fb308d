#pragma once

#include "mpstm/aklt.hpp"

#include <cstdint>
#include <vector>

namespace mpstm {

enum class Boundary { periodic, twisted };

/// Column transfer operator of a PEPS on a ring of N_y sites, acting on vectors of dimension 4^{N_y}.
/// Vector index sum_y p_y 4^y with p = ket * 2 + bra the doubled horizontal leg of site y.
/// A twist theta is spread as a phase e^{i theta q / N_y} over every vertical bond, which is gauge
/// equivalent to the phase e^{i theta q} on a single bond and keeps the operator translation invariant.
class CylinderTm {
  public:
    CylinderTm(const PepsTensor &t, int ny, double twist = 0.0);

    [[nodiscard]] Eigen::Index size() const { return dim_; }
    [[nodiscard]] int          ny() const { return ny_; }
    [[nodiscard]] double       twist() const { return twist_; }
    [[nodiscard]] Boundary     boundary() const { return twist_ == 0.0 ? Boundary::periodic : Boundary::twisted; }

    /// y = E x (left legs in, right legs out).
    void apply(const Vec &x, Vec &y) const;
    /// Ring translation: site content y moves to y + 1.
    void translate(const Vec &x, Vec &y) const;
    /// Projector onto T = e^{2 pi i m / N_y}.
    void project_momentum(Vec &x, int m) const;
    /// Virtual charge q = sum_y (m_ket - m_bra) of a basis index.
    [[nodiscard]] int charge(Eigen::Index idx) const;
    /// Image of a basis index under translation.
    [[nodiscard]] Eigen::Index translate_index(Eigen::Index idx) const;

    /// ||E T x - T E x|| / ||E x|| for a random x.
    [[nodiscard]] double translation_residual(std::uint64_t seed = 7) const;

  private:
    int          ny_;
    double       twist_;
    Eigen::Index dim_;
    Mat          M_; // 16 x 16: rows (b' * 4 + r), cols (b * 4 + l); b, b' vertical doubled legs
    struct Entry {
        int  row, col;
        cplx v;
    };
    std::vector<Entry> nz_;
};

/// A degenerate cluster of eigenvalues collected over virtual-charge sectors of one momentum sector.
struct RingLevel {
    cplx             lambda;      // normalized by lambda_0
    double           eps = 0;     // -log |lambda|
    double           kx  = 0;     // 0 or pi from the sign of Re lambda
    int              degeneracy = 1;
    int              spin       = -1; // -1 when the charge pattern is not a single multiplet
    std::vector<int> charges;
};

struct RingSector {
    int                    m  = 0;
    double                 ky = 0; // 2 pi m / N_y
    std::vector<RingLevel> levels; // |lambda| descending
};

struct RingSpectrumOptions {
    int           m           = 6;     // eigenvalues per (momentum, charge) sector
    int           max_charge  = 3;     // charges -max_charge .. max_charge are resolved
    int           dense_limit = 256;   // sector dimension up to which the sector matrix is diagonalized densely (at least m + 2)
    double        tol         = 1e-11;
    double        degeneracy_tol = 1e-8; // relative to lambda_0
    std::uint64_t seed        = 0xa41;
};

struct RingSpectrum {
    int                     ny      = 0;
    double                  twist   = 0;
    double                  lambda0 = 0;
    double                  max_imag = 0;  // max |Im lambda| / lambda_0 over all levels
    double                  translation_residual = 0;
    std::vector<RingSector> sectors;
};

/// Top eigenvalues of the ring operator in every momentum sector, resolved by virtual charge.
[[nodiscard]] RingSpectrum ring_tm_spectrum(const PepsTensor &t, int ny, double twist = 0.0, const RingSpectrumOptions &opt = {});

struct DispersionEntry {
    double kx = 0, ky = 0, eps = 0;
    int    degeneracy = 1;
    int    spin       = -1;
    int    ny         = 0;
    double twist      = 0;
};

struct DispersionCut {
    std::vector<DispersionEntry> entries;      // every level; the ground entry has eps = 0
    std::vector<DispersionEntry> minima;       // lowest non-ground entry per (ny, twist)
    std::vector<double>          continuum;    // 2 x the minimum per (ny, twist)
};

/// Throws InvalidArgument if a spectrum misses momentum sectors.
[[nodiscard]] DispersionCut dispersion_cut(const std::vector<RingSpectrum> &spectra);

} // namespace mpstm
