#include "mpstm/aklt.hpp"

#include "mpstm/spin.hpp"

#include <array>
#include <bit>

namespace mpstm {

std::string_view lattice_name(Lattice l) { return l == Lattice::square ? "square" : "hexagonal"; }

Lattice parse_lattice(std::string_view s) {
    if(s == "square") return Lattice::square;
    if(s == "hexagonal" || s == "honeycomb") return Lattice::hexagonal;
    throw InvalidArgument("unknown lattice '" + std::string(s) + "'");
}

Mat symmetric_projector(int n) {
    if(n < 1 || n > 16) throw InvalidArgument("symmetric_projector: 1 <= n <= 16");
    const int cols = 1 << n;
    Mat       P    = Mat::Zero(n + 1, cols);
    std::vector<double> binom(static_cast<std::size_t>(n) + 1, 1.0);
    for(int k = 1; k <= n; ++k) binom[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k - 1)] * (n - k + 1) / k;
    for(int c = 0; c < cols; ++c) {
        const int k = std::popcount(static_cast<unsigned>(c));
        P(k, c)     = 1.0 / std::sqrt(binom[static_cast<std::size_t>(k)]);
    }
    return P;
}

Mat singlet() {
    Mat e(2, 2);
    e << 0, 1, -1, 0;
    return e;
}

PepsTensor aklt_tensor(Lattice lattice) {
    const Mat  eps = singlet();
    PepsTensor t;
    t.lattice = lattice;
    t.D       = 2;
    if(lattice == Lattice::square) {
        const Mat P = symmetric_projector(4); // legs (u, d, l, r)
        t.d         = 5;
        t.data.assign(static_cast<std::size_t>(5 * 16), cplx(0));
        for(int s = 0; s < 5; ++s)
            for(int u = 0; u < 2; ++u)
                for(int dn = 0; dn < 2; ++dn)
                    for(int l = 0; l < 2; ++l)
                        for(int r = 0; r < 2; ++r) {
                            cplx acc = 0;
                            for(int dp = 0; dp < 2; ++dp)
                                for(int rp = 0; rp < 2; ++rp) acc += P(s, u * 8 + dp * 4 + l * 2 + rp) * eps(dp, dn) * eps(rp, r);
                            t.at(s, u, dn, l, r) = acc;
                        }
        return t;
    }
    // left site legs (u, l, c), right site legs (c', d, r); singlet on c - c'
    const Mat P = symmetric_projector(3);
    t.d         = 16;
    t.data.assign(static_cast<std::size_t>(16 * 16), cplx(0));
    for(int sl = 0; sl < 4; ++sl)
        for(int sr = 0; sr < 4; ++sr)
            for(int u = 0; u < 2; ++u)
                for(int dn = 0; dn < 2; ++dn)
                    for(int l = 0; l < 2; ++l)
                        for(int r = 0; r < 2; ++r) {
                            cplx acc = 0;
                            for(int c = 0; c < 2; ++c)
                                for(int cp = 0; cp < 2; ++cp) {
                                    if(eps(c, cp) == cplx(0)) continue;
                                    for(int dp = 0; dp < 2; ++dp)
                                        for(int rp = 0; rp < 2; ++rp)
                                            acc += P(sl, u * 4 + l * 2 + c) * eps(c, cp) * P(sr, cp * 4 + dp * 2 + rp) * eps(dp, dn) * eps(rp, r);
                                }
                            t.at(sl * 4 + sr, u, dn, l, r) = acc;
                        }
    return t;
}

double peps_symmetry_defect(const PepsTensor &t) {
    const Mat eps  = singlet();
    const auto half = spin::spin_ops(1);
    std::array<Mat, 3> phys, plain, absorbed;
    if(t.lattice == Lattice::square) {
        const auto s2 = spin::spin_ops(t.d - 1);
        phys          = {s2.sx, s2.sy, s2.sz};
    } else {
        const auto s3 = spin::spin_ops(3);
        const Mat  id = Mat::Identity(4, 4);
        phys          = {spin::kron(s3.sx, id) + spin::kron(id, s3.sx), spin::kron(s3.sy, id) + spin::kron(id, s3.sy),
                         spin::kron(s3.sz, id) + spin::kron(id, s3.sz)};
    }
    // virtual legs transform contragrediently: generators enter transposed
    plain = {half.sx.transpose(), half.sy.transpose(), half.sz.transpose()};
    for(int a = 0; a < 3; ++a) absorbed[static_cast<std::size_t>(a)] = eps.transpose() * plain[static_cast<std::size_t>(a)] * eps;

    const int D = t.D;
    double    worst = 0;
    for(std::size_t a = 0; a < 3; ++a) {
        double norm2 = 0;
        for(int s = 0; s < t.d; ++s)
            for(int u = 0; u < D; ++u)
                for(int dn = 0; dn < D; ++dn)
                    for(int l = 0; l < D; ++l)
                        for(int r = 0; r < D; ++r) {
                            cplx lhs = 0, rhs = 0;
                            for(int sp = 0; sp < t.d; ++sp) lhs += phys[a](s, sp) * t.at(sp, u, dn, l, r);
                            for(int x = 0; x < D; ++x) {
                                rhs += plain[a](u, x) * t.at(s, x, dn, l, r);
                                rhs += absorbed[a](dn, x) * t.at(s, u, x, l, r);
                                rhs += plain[a](l, x) * t.at(s, u, dn, x, r);
                                rhs += absorbed[a](r, x) * t.at(s, u, dn, l, x);
                            }
                            norm2 += std::norm(lhs - rhs);
                        }
        worst = std::max(worst, std::sqrt(norm2));
    }
    return worst;
}

UniformMps aklt_chain() {
    const Mat        P   = symmetric_projector(2); // legs (l, r)
    const Mat        eps = singlet();
    std::vector<Mat> A(3, Mat::Zero(2, 2));
    for(int s = 0; s < 3; ++s)
        for(int l = 0; l < 2; ++l)
            for(int r = 0; r < 2; ++r)
                for(int rp = 0; rp < 2; ++rp) A[static_cast<std::size_t>(s)](l, r) += P(s, l * 2 + rp) * eps(rp, r);
    return UniformMps(std::move(A));
}

} // namespace mpstm
