#pragma once

#include "mpstm/uniform_mps.hpp"

#include <string_view>
#include <vector>

namespace mpstm {

enum class Lattice { square, hexagonal };

[[nodiscard]] std::string_view lattice_name(Lattice l);
[[nodiscard]] Lattice          parse_lattice(std::string_view s);

/// Rank-5 tensor A^s_{u d l r} with virtual dimension 2 per leg.
/// Singlets on the bonds are absorbed into the d and r legs, so neighbouring tensors contract directly.
struct PepsTensor {
    Lattice           lattice = Lattice::square;
    int               d       = 5;
    int               D       = 2;
    std::vector<cplx> data; // index ((((s * D + u) * D + dn) * D + l) * D + r)

    [[nodiscard]] cplx &at(int s, int u, int dn, int l, int r) { return data[index(s, u, dn, l, r)]; }
    [[nodiscard]] cplx  at(int s, int u, int dn, int l, int r) const { return data[index(s, u, dn, l, r)]; }
    [[nodiscard]] std::size_t index(int s, int u, int dn, int l, int r) const {
        return static_cast<std::size_t>((((s * D + u) * D + dn) * D + l) * D + r);
    }
};

/// Isometry from n spin-1/2 onto spin n/2: rows m = n/2 .. -n/2, columns bit strings (bit = 1 is spin down,
/// leg 0 is the most significant bit).
[[nodiscard]] Mat symmetric_projector(int n);

/// Singlet matrix eps = [[0, 1], [-1, 0]].
[[nodiscard]] Mat singlet();

/// Square: spin 2 (d = 5). Hexagonal: two spin-3/2 sites blocked along a horizontal bond (d = 16);
/// the left site carries u and l, the right site carries d and r.
[[nodiscard]] PepsTensor aklt_tensor(Lattice lattice);

/// max over a in {x, y, z} of || S^a_phys A - sum_legs G^a_leg A ||, where plain legs carry (S^a)^T and
/// singlet-absorbed legs carry eps^T (S^a)^T eps.
[[nodiscard]] double peps_symmetry_defect(const PepsTensor &t);

/// Spin-1 AKLT chain from the same construction with two virtual legs (D = 2, d = 3).
[[nodiscard]] UniformMps aklt_chain();

} // namespace mpstm
