#include "mpstm/correlation.hpp"

#include "mpstm/spin.hpp"

#include <sstream>

namespace mpstm {

namespace {

    SiteOperator ensure_zero_mean(const UniformMps &mps, const SiteOperator &op) { return op.zero_mean ? op : zero_meaned(mps, op); }

    // <A_0 B_n> for overlapping supports, via a window operator product.
    cplx overlap_term(const UniformMps &mps, const SiteOperator &A, const SiteOperator &B, int n) {
        const int d = A.d();
        const int w = std::max(A.support, n + B.support);
        if(w > 6) throw DimensionError("connected_correlation: overlap window exceeds 6 sites");
        Eigen::Index pre = 1, postA = 1, postB = 1;
        for(int i = 0; i < n; ++i) pre *= d;
        for(int i = A.support; i < w; ++i) postA *= d;
        for(int i = n + B.support; i < w; ++i) postB *= d;
        const Mat Aw  = spin::kron(A.matrix, Mat::Identity(postA, postA));
        const Mat Bw  = spin::kron(spin::kron(Mat::Identity(pre, pre), B.matrix), Mat::Identity(postB, postB));
        const Mat rho = reduced_density_matrix(mps, w);
        return (rho * Aw * Bw).trace();
    }

} // namespace

Vec connected_correlation(const UniformMps &mps, const SiteOperator &A0, const SiteOperator &B0, int n_max) {
    if(n_max < 0) throw InvalidArgument("connected_correlation: n_max must be >= 0");
    const SiteOperator A  = ensure_zero_mean(mps, A0);
    const SiteOperator B  = ensure_zero_mean(mps, B0);
    const FixedPoints  fp = fixed_points(mps);
    const auto         D  = mps.D();
    Vec                C  = Vec::Zero(n_max);

    const Vec wl = OperatorTm(mps, A).apply(Direction::left, flatten(fp.l));
    Vec       v  = OperatorTm(mps, B).apply(Direction::right, flatten(fp.r));
    const int nA = A.support;
    for(int n = 1; n < std::min(nA, n_max + 1); ++n) C(n - 1) = overlap_term(mps, A, B, n);
    // n >= nA: (l| J_A T^(n - nA) J_B |r)
    for(int n = nA; n <= n_max; ++n) {
        if(n > nA) v = apply_tm(mps, mps, Direction::right, v);
        C(n - 1) = tm_pair(wl, v, D, D) / std::pow(fp.lambda0, n + B.support);
    }
    return C;
}

FormFactorSet form_factors(const UniformMps &mps, const TmSpectrum &spec, const SiteOperator &A0, const SiteOperator &B0) {
    if(!spec.has_vectors()) throw InvalidArgument("form_factors: spectrum lacks left/right eigenvectors");
    if(spec.D_bra != mps.D() || spec.D_ket != mps.D()) throw DimensionError("form_factors: spectrum does not belong to this state");
    const SiteOperator A = ensure_zero_mean(mps, A0);
    const SiteOperator B = ensure_zero_mean(mps, B0);
    const auto         D = mps.D();
    const OperatorTm   JA(mps, A), JB(mps, B);
    // (0|J_A and J_B|0) with the dominant pair normalized by the spectrum's biorthogonality
    const Vec     l  = JA.apply(Direction::left, spec.left.col(0));
    const Vec     r  = JB.apply(Direction::right, spec.right.col(0));
    const double  s  = spec.scale;
    FormFactorSet ff;
    ff.support_a = A.support;
    ff.f.resize(spec.size() > 0 ? spec.size() - 1 : 0);
    for(Eigen::Index j = 1; j < spec.size(); ++j) {
        ff.j.push_back(j);
        // undo the global rescale of regular spectra so sums use the normalized lambda_j
        ff.f(j - 1) = tm_pair(l, spec.right.col(j), D, D) * tm_pair(spec.left.col(j), r, D, D) / std::pow(s, A.support + B.support);
    }
    return ff;
}

Vec correlation_from_spectrum(const TmSpectrum &spec, const FormFactorSet &ff, int n_max) {
    if(n_max < 0) throw InvalidArgument("correlation_from_spectrum: n_max must be >= 0");
    Vec C = Vec::Zero(n_max);
    for(std::size_t i = 0; i < ff.size(); ++i) {
        const auto j = ff.j[i];
        if(j < 0 || j >= spec.size()) throw DimensionError("correlation_from_spectrum: form factor index outside spectrum");
        const cplx lam = spec.eigenvalues(j);
        for(int n = 1; n <= n_max; ++n) {
            const int p = n - ff.support_a;
            if(p < 0) continue; // overlapping supports are not described by the spectral sum
            C(n - 1) += ff.f(static_cast<Eigen::Index>(i)) * std::pow(lam, p);
        }
    }
    return C;
}

} // namespace mpstm
