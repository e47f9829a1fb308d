#include "mpstm/branches.hpp"

#include <algorithm>
#include <numeric>

namespace mpstm {

std::vector<Branch> cluster_phases(const RVec &eps, const RVec &phi, double phase_tol, double eps_cut, const std::vector<Eigen::Index> &skip) {
    if(eps.size() != phi.size()) throw DimensionError("cluster_phases: eps and phi differ in length");
    std::vector<Eigen::Index> cand;
    for(Eigen::Index j = 0; j < eps.size(); ++j)
        if(eps(j) <= eps_cut && std::find(skip.begin(), skip.end(), j) == skip.end()) cand.push_back(j);
    if(cand.empty()) throw InvalidArgument("cluster_branches: empty spectrum after cuts");

    // sort by phase (ties by eps, then index) so the result does not depend on input order
    std::sort(cand.begin(), cand.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double pa = wrap_phase(phi(a)), pb = wrap_phase(phi(b));
        if(pa != pb) return pa < pb;
        if(eps(a) != eps(b)) return eps(a) < eps(b);
        return a < b;
    });
    const std::size_t n = cand.size();
    // cut the circle at every gap wider than phase_tol
    std::vector<std::size_t> cuts;
    for(std::size_t i = 0; i < n; ++i) {
        const double a   = wrap_phase(phi(cand[i]));
        const double b   = wrap_phase(phi(cand[(i + 1) % n]));
        double       gap = b - a;
        if(i + 1 == n) gap += 2 * pi;
        if(gap > phase_tol) cuts.push_back(i);
    }
    std::vector<std::vector<Eigen::Index>> groups;
    if(cuts.empty()) {
        groups.push_back(cand);
    } else {
        for(std::size_t c = 0; c < cuts.size(); ++c) {
            std::vector<Eigen::Index> g;
            std::size_t               start = (cuts[c] + 1) % n;
            std::size_t               stop  = cuts[(c + 1) % cuts.size()];
            for(std::size_t i = start;; i = (i + 1) % n) {
                g.push_back(cand[i]);
                if(i == stop) break;
            }
            groups.push_back(std::move(g));
        }
    }

    std::vector<Branch> out;
    for(auto &g : groups) {
        Branch b;
        cplx   z = 0;
        for(auto j : g) z += std::polar(1.0, phi(j));
        b.phi = std::abs(z) > 1e-12 ? wrap_phase(std::arg(z)) : wrap_phase(phi(g.front()));
        std::sort(g.begin(), g.end(), [&](Eigen::Index a, Eigen::Index c) { return eps(a) != eps(c) ? eps(a) < eps(c) : a < c; });
        b.members = g;
        b.delta   = eps(g.front());
        out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(), [](const Branch &a, const Branch &b) {
        if(a.delta != b.delta) return a.delta < b.delta;
        return a.phi < b.phi;
    });
    for(std::size_t i = 0; i < out.size(); ++i)
        for(std::size_t k = 0; k < out.size(); ++k)
            if(k != i && std::abs(out[i].phi) > phase_tol && phase_distance(out[i].phi, -out[k].phi) <= phase_tol) {
                out[i].partner = static_cast<int>(k);
                break;
            }
    return out;
}

std::vector<Branch> cluster_branches(const TmSpectrum &spec, double phase_tol, double eps_cut) {
    std::vector<Eigen::Index> skip;
    if(spec.kind == TmKind::regular && spec.size() > 0) skip.push_back(0);
    return cluster_phases(spec.eps, spec.phi, phase_tol, eps_cut, skip);
}

} // namespace mpstm
