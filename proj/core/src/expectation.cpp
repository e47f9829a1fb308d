#include "mpstm/expectation.hpp"

#include "mpstm/spin.hpp"

namespace mpstm {

cplx expectation(const UniformMps &mps, const FixedPoints &fp, const SiteOperator &op) {
    OperatorTm J(mps, op);
    const Vec  jr = J.apply(Direction::right, flatten(fp.r));
    return tm_pair(flatten(fp.l), jr, mps.D(), mps.D()) / std::pow(fp.lambda0, op.support);
}

cplx expectation(const UniformMps &mps, const SiteOperator &op) { return expectation(mps, fixed_points(mps), op); }

SiteOperator zero_meaned(const UniformMps &mps, const SiteOperator &op) {
    const cplx   m = expectation(mps, op);
    SiteOperator out(op.support, op.matrix - m * Mat::Identity(op.matrix.rows(), op.matrix.cols()), true);
    return out;
}

double energy_density(const UniformMps &mps, const TwoSiteHamiltonian &h) { return expectation(mps, SiteOperator(2, h.h)).real(); }

Mat reduced_density_matrix(const UniformMps &mps, int n) {
    if(n < 1 || n > kMaxSupport + 2) throw DimensionError("reduced_density_matrix: window too large");
    const FixedPoints fp  = fixed_points(mps);
    const auto        str = string_products(mps, n);
    const auto        p   = static_cast<Eigen::Index>(str.size());
    std::vector<Mat>  left(static_cast<std::size_t>(p));
    std::vector<Mat>  right(static_cast<std::size_t>(p));
    for(Eigen::Index t = 0; t < p; ++t) {
        left[static_cast<std::size_t>(t)]  = fp.l * str[static_cast<std::size_t>(t)];
        right[static_cast<std::size_t>(t)] = fp.r * str[static_cast<std::size_t>(t)].adjoint();
    }
    Mat        rho(p, p);
    const cplx norm = std::pow(fp.lambda0, n);
    for(Eigen::Index t = 0; t < p; ++t)
        for(Eigen::Index s = 0; s < p; ++s)
            rho(t, s) = left[static_cast<std::size_t>(t)].cwiseProduct(right[static_cast<std::size_t>(s)].transpose()).sum() / norm;
    return rho;
}

Mat embed(const Mat &op, int pos, int n) {
    const Eigen::Index d   = op.rows();
    Eigen::Index       pre = 1, post = 1;
    for(int i = 0; i < pos; ++i) pre *= d;
    for(int i = pos + 1; i < n; ++i) post *= d;
    return spin::kron(spin::kron(Mat::Identity(pre, pre), op), Mat::Identity(post, post));
}

} // namespace mpstm
