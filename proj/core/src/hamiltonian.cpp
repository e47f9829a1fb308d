#include "mpstm/hamiltonian.hpp"

#include "mpstm/spin.hpp"

#include <sstream>

namespace mpstm {

std::string_view model_name(Model m) {
    switch(m) {
        case Model::XY: return "XY";
        case Model::XXZ: return "XXZ";
        case Model::BLBQ: return "BLBQ";
        case Model::FIELD_ONLY: return "FIELD_ONLY";
    }
    return "?";
}

Model parse_model(std::string_view tag) {
    if(tag == "XY") return Model::XY;
    if(tag == "XXZ") return Model::XXZ;
    if(tag == "BLBQ") return Model::BLBQ;
    if(tag == "FIELD_ONLY") return Model::FIELD_ONLY;
    throw InvalidArgument("unknown model tag '" + std::string(tag) + "'");
}

std::size_t model_param_count(Model m) {
    switch(m) {
        case Model::XY: return 2;
        case Model::XXZ: return 2;
        case Model::BLBQ: return 1;
        case Model::FIELD_ONLY: return 1;
    }
    return 0;
}

std::string TwoSiteHamiltonian::name() const {
    std::ostringstream os;
    os << model_name(model) << '(';
    for(std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
    os << ')';
    return os.str();
}

double TwoSiteHamiltonian::norm() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Mat &h) { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }

TwoSiteHamiltonian build_hamiltonian(Model model, const std::vector<double> &params) {
    if(params.size() != model_param_count(model)) {
        std::ostringstream os;
        os << "model " << model_name(model) << " takes " << model_param_count(model) << " parameter(s), got " << params.size();
        throw InvalidArgument(os.str());
    }
    using spin::kron;
    TwoSiteHamiltonian H;
    H.model  = model;
    H.params = params;
    switch(model) {
        case Model::XY: {
            const auto   s     = spin::spin_ops(1);
            const double gamma = params[0], g = params[1];
            H.d = 2;
            H.h = -((1 + gamma) * kron(s.sx, s.sx) + (1 - gamma) * kron(s.sy, s.sy)) - 0.5 * g * (kron(s.sz, s.id) + kron(s.id, s.sz));
            break;
        }
        case Model::XXZ: {
            const auto   s     = spin::spin_ops(1);
            const double delta = params[0], field = params[1];
            H.d = 2;
            H.h = -(kron(s.sx, s.sx) + kron(s.sy, s.sy) + delta * kron(s.sz, s.sz)) - 0.5 * field * (kron(s.sz, s.id) + kron(s.id, s.sz));
            break;
        }
        case Model::BLBQ: {
            const auto   s     = spin::spin_ops(2);
            const double theta = params[0];
            const Mat    ss    = kron(s.sx, s.sx) + kron(s.sy, s.sy) + kron(s.sz, s.sz);
            H.d                = 3;
            H.h                = std::cos(theta) * ss + std::sin(theta) * ss * ss;
            break;
        }
        case Model::FIELD_ONLY: {
            const auto   s = spin::spin_ops(1);
            const double g = params[0];
            H.d            = 2;
            H.h            = -0.5 * g * (kron(s.sz, s.id) + kron(s.id, s.sz));
            break;
        }
    }
    // remove rounding asymmetry from the complex Sy products
    H.h = 0.5 * (H.h + H.h.adjoint()).eval();
    return H;
}

} // namespace mpstm
