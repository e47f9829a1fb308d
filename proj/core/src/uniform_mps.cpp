#include "mpstm/uniform_mps.hpp"

#include "mpstm/krylov.hpp"

#include <sstream>

namespace mpstm {

const char *gauge_name(Gauge g) {
    switch(g) {
        case Gauge::none: return "none";
        case Gauge::left: return "left";
        case Gauge::right: return "right";
        case Gauge::mixed: return "mixed";
    }
    return "?";
}

Gauge parse_gauge(const std::string &s) {
    if(s == "none") return Gauge::none;
    if(s == "left") return Gauge::left;
    if(s == "right") return Gauge::right;
    if(s == "mixed") return Gauge::mixed;
    throw InvalidArgument("unknown gauge '" + s + "'");
}

void UniformMps::validate() const {
    if(A.empty()) throw DimensionError("UniformMps: no physical components");
    const auto D0 = A.front().rows();
    for(const auto &a : A)
        if(a.rows() != D0 || a.cols() != D0) throw DimensionError("UniformMps: site matrices must be square and of equal size");
    if(gauge == Gauge::mixed && schmidt.size() != D0) throw DimensionError("UniformMps: mixed gauge requires D Schmidt values");
}

int SiteOperator::d() const {
    if(support < 1) throw DimensionError("SiteOperator: support must be >= 1");
    if(matrix.rows() != matrix.cols()) throw DimensionError("SiteOperator: matrix must be square");
    const double r = std::pow(static_cast<double>(matrix.rows()), 1.0 / support);
    const int    d = static_cast<int>(std::lround(r));
    Eigen::Index p = 1;
    for(int i = 0; i < support; ++i) p *= d;
    if(p != matrix.rows()) {
        std::ostringstream os;
        os << "SiteOperator: size " << matrix.rows() << " is not d^" << support;
        throw DimensionError(os.str());
    }
    return d;
}

SiteOperator SiteOperator::identity(int d, int n) {
    Eigen::Index p = 1;
    for(int i = 0; i < n; ++i) p *= d;
    return SiteOperator(n, Mat::Identity(p, p));
}

UniformMps random_mps(Eigen::Index D, int d, std::uint64_t seed) {
    if(D < 1 || d < 1) throw InvalidArgument("random_mps: D and d must be positive");
    std::vector<Mat> a;
    for(int s = 0; s < d; ++s) {
        Vec v = krylov::random_vector(D * D, seed + 7919ULL * static_cast<std::uint64_t>(s));
        a.push_back(Eigen::Map<Mat>(v.data(), D, D));
    }
    return UniformMps(std::move(a));
}

UniformMps product_mps(const Vec &local) {
    std::vector<Mat> a;
    const Vec        v = local / local.norm();
    for(Eigen::Index s = 0; s < v.size(); ++s) a.push_back(Mat::Constant(1, 1, v(s)));
    UniformMps m(std::move(a), Gauge::mixed);
    m.schmidt = RVec::Ones(1);
    return m;
}

UniformMps apply_symmetry(const UniformMps &mps, const Mat &u) {
    mps.validate();
    if(u.rows() != mps.d() || u.cols() != mps.d()) throw DimensionError("apply_symmetry: u must be d x d");
    if((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidArgument("apply_symmetry: u is not unitary");
    UniformMps out = mps;
    for(int s = 0; s < mps.d(); ++s) {
        out.A[static_cast<std::size_t>(s)].setZero();
        for(int k = 0; k < mps.d(); ++k) out.A[static_cast<std::size_t>(s)] += u(s, k) * mps.A[static_cast<std::size_t>(k)];
    }
    return out;
}

double tensor_distance(const UniformMps &a, const UniformMps &b) {
    if(a.d() != b.d() || a.D() != b.D()) throw DimensionError("tensor_distance: shape mismatch");
    double m = 0;
    for(int s = 0; s < a.d(); ++s) m = std::max(m, (a.A[static_cast<std::size_t>(s)] - b.A[static_cast<std::size_t>(s)]).cwiseAbs().maxCoeff());
    return m;
}

} // namespace mpstm
