#pragma once

#include "mpstm/expectation.hpp"
#include "mpstm/spectrum.hpp"

#include <vector>

namespace mpstm {

/// C(n) = <A_0 B_n> - <A_0><B_n> for n = 1 .. n_max, where A starts at site 0 and B at site n.
/// Operators without the zero_mean flag are shifted internally. Entries whose supports
/// overlap (n < support(A)) are evaluated as direct window expectations.
[[nodiscard]] Vec connected_correlation(const UniformMps &mps, const SiteOperator &A, const SiteOperator &B, int n_max);

/// Overlap weights f_j = (0|J_A|j)(j|J_B|0) for j >= 1.
struct FormFactorSet {
    std::vector<Eigen::Index> j;
    Vec                       f;
    int                       support_a = 1; // C(n) = sum_j f_j lambda_j^(n - support_a)

    [[nodiscard]] std::size_t size() const { return j.size(); }
};

inline constexpr double kFormFactorZero = 1e-12;

/// Requires left and right eigenvectors in `spec` (regular kind).
[[nodiscard]] FormFactorSet form_factors(const UniformMps &mps, const TmSpectrum &spec, const SiteOperator &A, const SiteOperator &B);

/// C(n) = sum_j f_j lambda_j^(n - support_a) for n = 1 .. n_max.
[[nodiscard]] Vec correlation_from_spectrum(const TmSpectrum &spec, const FormFactorSet &ff, int n_max);

} // namespace mpstm
