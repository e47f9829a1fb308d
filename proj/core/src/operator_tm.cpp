#include "mpstm/operator_tm.hpp"

#include <sstream>

namespace mpstm {

std::vector<Mat> string_products(const UniformMps &mps, int n) {
    std::vector<Mat> cur;
    for(const auto &a : mps.A) cur.push_back(a);
    for(int k = 1; k < n; ++k) {
        std::vector<Mat> next;
        next.reserve(cur.size() * mps.A.size());
        for(const auto &c : cur)
            for(const auto &a : mps.A) next.push_back(c * a);
        cur = std::move(next);
    }
    return cur;
}

OperatorTm::OperatorTm(const UniformMps &bra, const UniformMps &ket, const SiteOperator &op)
    : support_(op.support), Db_(bra.D()), Dk_(ket.D()), O_(op.matrix) {
    bra.validate();
    ket.validate();
    if(op.support > kMaxSupport) {
        std::ostringstream os;
        os << "operator support " << op.support << " exceeds the cap of " << kMaxSupport << " sites";
        throw DimensionError(os.str());
    }
    if(op.d() != ket.d() || bra.d() != ket.d()) throw DimensionError("operator_tm: physical dimension mismatch");
    bra_str_ = string_products(bra, support_);
    ket_str_ = string_products(ket, support_);
}

Vec OperatorTm::apply(Direction dir, const Vec &v) const {
    if(v.size() != size()) throw DimensionError("OperatorTm::apply: vector length mismatch");
    const auto       p = static_cast<Eigen::Index>(ket_str_.size());
    std::vector<Mat> Y(static_cast<std::size_t>(p));
    Vec              out(size());
    if(dir == Direction::right) {
        auto R = as_matrix(v, Dk_, Db_);
        for(Eigen::Index t = 0; t < p; ++t) Y[static_cast<std::size_t>(t)].noalias() = ket_str_[static_cast<std::size_t>(t)] * R;
        Eigen::Map<Mat> Out(out.data(), Dk_, Db_);
        Out.setZero();
        Mat Z(Dk_, Db_);
        for(Eigen::Index s = 0; s < p; ++s) {
            Z.setZero();
            bool any = false;
            for(Eigen::Index t = 0; t < p; ++t)
                if(O_(s, t) != cplx(0)) {
                    Z += O_(s, t) * Y[static_cast<std::size_t>(t)];
                    any = true;
                }
            if(any) Out.noalias() += Z * bra_str_[static_cast<std::size_t>(s)].adjoint();
        }
    } else {
        auto L = as_matrix(v, Db_, Dk_);
        for(Eigen::Index t = 0; t < p; ++t) Y[static_cast<std::size_t>(t)].noalias() = L * ket_str_[static_cast<std::size_t>(t)];
        Eigen::Map<Mat> Out(out.data(), Db_, Dk_);
        Out.setZero();
        Mat Z(Db_, Dk_);
        for(Eigen::Index s = 0; s < p; ++s) {
            Z.setZero();
            bool any = false;
            for(Eigen::Index t = 0; t < p; ++t)
                if(O_(s, t) != cplx(0)) {
                    Z += O_(s, t) * Y[static_cast<std::size_t>(t)];
                    any = true;
                }
            if(any) Out.noalias() += bra_str_[static_cast<std::size_t>(s)].adjoint() * Z;
        }
    }
    return out;
}

krylov::LinearOp OperatorTm::op(Direction dir) const {
    return [self = *this, dir](const Vec &x, Vec &y) { y = self.apply(dir, x); };
}

OperatorTm operator_tm(const UniformMps &mps, const SiteOperator &op) { return OperatorTm(mps, op); }

} // namespace mpstm
