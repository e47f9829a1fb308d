#pragma once

#include "mpstm/common.hpp"

namespace mpstm::spin {

/// Spin-S operators in the basis |S,S>, |S,S-1>, ..., |S,-S>. `two_s` = 2S.
struct SpinOps {
    Mat sx, sy, sz, sp, sm, id;
};

inline SpinOps spin_ops(int two_s) {
    const int    d = two_s + 1;
    const double s = 0.5 * two_s;
    SpinOps      ops;
    ops.sz = Mat::Zero(d, d);
    ops.sp = Mat::Zero(d, d);
    for(int i = 0; i < d; ++i) {
        const double m = s - i;
        ops.sz(i, i)   = m;
        if(i > 0) ops.sp(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    ops.sm = ops.sp.adjoint();
    ops.sx = 0.5 * (ops.sp + ops.sm);
    ops.sy = -0.5 * I_unit * (ops.sp - ops.sm);
    ops.id = Mat::Identity(d, d);
    return ops;
}

/// Kronecker product a (x) b with a acting on the left (first) site.
inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for(Eigen::Index i = 0; i < a.rows(); ++i)
        for(Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace mpstm::spin
