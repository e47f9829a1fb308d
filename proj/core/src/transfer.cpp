#include "mpstm/transfer.hpp"

#include <sstream>

namespace mpstm {

namespace {
    void check(const UniformMps &bra, const UniformMps &ket, Direction dir, Eigen::Index vsize) {
        bra.validate();
        ket.validate();
        if(bra.d() != ket.d()) throw DimensionError("apply_tm: physical dimensions differ");
        if(vsize != bra.D() * ket.D()) {
            std::ostringstream os;
            os << "apply_tm(" << (dir == Direction::left ? "left" : "right") << "): vector length " << vsize << " != D_bra*D_ket = " << bra.D() * ket.D();
            throw DimensionError(os.str());
        }
    }
} // namespace

void apply_tm_into(const UniformMps &bra, const UniformMps &ket, Direction dir, const Vec &v, Vec &out) {
    check(bra, ket, dir, v.size());
    const auto Db = bra.D(), Dk = ket.D();
    out.resize(v.size());
    if(dir == Direction::right) {
        auto           R = as_matrix(v, Dk, Db);
        Eigen::Map<Mat> O(out.data(), Dk, Db);
        O.setZero();
        Mat tmp(Dk, Db);
        for(int s = 0; s < ket.d(); ++s) {
            tmp.noalias() = ket.A[static_cast<std::size_t>(s)] * R;
            O.noalias() += tmp * bra.A[static_cast<std::size_t>(s)].adjoint();
        }
    } else {
        auto            L = as_matrix(v, Db, Dk);
        Eigen::Map<Mat> O(out.data(), Db, Dk);
        O.setZero();
        Mat tmp(Db, Dk);
        for(int s = 0; s < ket.d(); ++s) {
            tmp.noalias() = bra.A[static_cast<std::size_t>(s)].adjoint() * L;
            O.noalias() += tmp * ket.A[static_cast<std::size_t>(s)];
        }
    }
}

Vec apply_tm(const UniformMps &bra, const UniformMps &ket, Direction dir, const Vec &v) {
    Vec out;
    apply_tm_into(bra, ket, dir, v, out);
    return out;
}

krylov::LinearOp tm_operator(const UniformMps &bra, const UniformMps &ket, Direction dir) {
    return [bra, ket, dir](const Vec &x, Vec &y) { apply_tm_into(bra, ket, dir, x, y); };
}

Mat dense_tm(const UniformMps &bra, const UniformMps &ket) {
    if(bra.d() != ket.d()) throw DimensionError("dense_tm: physical dimensions differ");
    const auto Db = bra.D(), Dk = ket.D();
    Mat        T  = Mat::Zero(Dk * Db, Dk * Db);
    // vec(K R B^dag) = (conj(B) (x) K) vec(R)
    for(int s = 0; s < ket.d(); ++s) {
        const Mat  Bc = bra.A[static_cast<std::size_t>(s)].conjugate();
        const Mat &K  = ket.A[static_cast<std::size_t>(s)];
        for(Eigen::Index i = 0; i < Db; ++i)
            for(Eigen::Index j = 0; j < Db; ++j) T.block(i * Dk, j * Dk, Dk, Dk) += Bc(i, j) * K;
    }
    return T;
}

cplx tm_pair(const Vec &l, const Vec &r, Eigen::Index D_bra, Eigen::Index D_ket) {
    auto L = as_matrix(l, D_bra, D_ket);
    auto R = as_matrix(r, D_ket, D_bra);
    return (L.transpose().cwiseProduct(R)).sum();
}

} // namespace mpstm
