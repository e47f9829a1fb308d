#include "mpstm/oz_fit.hpp"

#include "mpstm/velocity.hpp"

#include <algorithm>
#include <sstream>

namespace mpstm {

OzFit oz_fit_data(const std::vector<double> &eps, const std::vector<double> &fabs) {
    if(eps.size() != fabs.size()) throw DimensionError("oz_fit: eps and form factors differ in length");
    if(eps.size() < 4) {
        std::ostringstream os;
        os << "oz_fit: need at least 4 branch members with non-zero form factors, got " << eps.size();
        throw InvalidArgument(os.str());
    }
    OzFit r;
    r.eps   = eps;
    r.fabs  = fabs;
    r.delta = eps[0];
    r.xi    = 1.0 / r.delta;

    std::vector<double> lj, le, lf;
    for(std::size_t j = 1; j < eps.size(); ++j) {
        const double de = eps[j] - r.delta;
        if(!(de > 0)) {
            std::ostringstream os;
            os << "oz_fit: kappa unidentifiable, eps_" << j << " does not exceed Delta (condition number infinite)";
            throw InvalidArgument(os.str());
        }
        lj.push_back(std::log(static_cast<double>(j)));
        le.push_back(std::log(de));
        lf.push_back(std::log(fabs[j]));
    }
    // condition number of the [1, log j] design matrix
    RMat A(static_cast<Eigen::Index>(lj.size()), 2);
    for(std::size_t i = 0; i < lj.size(); ++i) {
        A(static_cast<Eigen::Index>(i), 0) = 1.0;
        A(static_cast<Eigen::Index>(i), 1) = lj[i];
    }
    Eigen::JacobiSVD<RMat> svd(A);
    const RVec            &sv = svd.singularValues();
    r.condition               = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if(!(r.condition < 1e8)) {
        std::ostringstream os;
        os << "oz_fit: kappa unidentifiable (condition number " << r.condition << ")";
        throw InvalidArgument(os.str());
    }
    const auto fe = fit_linear(lj, le);
    const auto ff = fit_linear(lj, lf);
    r.kappa       = fe.slope;
    r.g           = std::exp(fe.intercept);
    r.rho         = ff.slope;
    r.eps_rms     = fe.rms;
    r.ff_rms      = ff.rms;
    if(!(r.kappa > 0)) throw InvalidArgument("oz_fit: fitted kappa is not positive");
    r.eta = (1.0 + r.rho) / r.kappa;
    return r;
}

OzFit oz_fit(const TmSpectrum &spec, const FormFactorSet &ff, const Branch &branch, int max_members) {
    std::vector<std::pair<double, double>> data; // (eps, |f|)
    for(auto j : branch.members) {
        auto it = std::find(ff.j.begin(), ff.j.end(), j);
        if(it == ff.j.end()) continue;
        const double fa = std::abs(ff.f(static_cast<Eigen::Index>(it - ff.j.begin())));
        if(fa < kFormFactorZero) continue;
        data.emplace_back(spec.eps(j), fa);
    }
    std::sort(data.begin(), data.end());
    if(static_cast<int>(data.size()) > max_members) data.resize(static_cast<std::size_t>(max_members));
    std::vector<double> e, f;
    for(auto &[a, b] : data) {
        e.push_back(a);
        f.push_back(b);
    }
    OzFit r = oz_fit_data(e, f);
    r.phi   = branch.phi;
    return r;
}

} // namespace mpstm
