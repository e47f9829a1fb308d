#pragma once

#include "mpstm/canonical.hpp"
#include "mpstm/hamiltonian.hpp"
#include "mpstm/operator_tm.hpp"

namespace mpstm {

/// <psi|O|psi> per placement, normalized by the fixed points.
[[nodiscard]] cplx expectation(const UniformMps &mps, const SiteOperator &op);

/// Same, reusing precomputed fixed points.
[[nodiscard]] cplx expectation(const UniformMps &mps, const FixedPoints &fp, const SiteOperator &op);

/// O - <O> 1, flagged zero_mean.
[[nodiscard]] SiteOperator zero_meaned(const UniformMps &mps, const SiteOperator &op);

/// Energy per site of a nearest-neighbour Hamiltonian.
[[nodiscard]] double energy_density(const UniformMps &mps, const TwoSiteHamiltonian &h);

/// Reduced density matrix on n consecutive sites, rho_{t,s} = <s|...|t> convention so that <O> = Tr(rho O).
[[nodiscard]] Mat reduced_density_matrix(const UniformMps &mps, int n);

/// Embed a one-site operator at position `pos` of an n-site window.
[[nodiscard]] Mat embed(const Mat &op, int pos, int n);

} // namespace mpstm
