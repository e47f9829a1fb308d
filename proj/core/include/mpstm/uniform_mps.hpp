#pragma once

#include "mpstm/common.hpp"

#include <cstdint>
#include <vector>

namespace mpstm {

enum class Gauge { none, left, right, mixed };

[[nodiscard]] const char *gauge_name(Gauge g);
[[nodiscard]] Gauge       parse_gauge(const std::string &s);

/// Translation-invariant MPS |psi> = sum_s Tr(... A^{s1} A^{s2} ...) |... s1 s2 ...>.
/// A[s] is the D x D matrix for physical index s.
struct UniformMps {
    std::vector<Mat> A;
    Gauge            gauge = Gauge::none;
    RVec             schmidt;          // filled for Gauge::mixed, descending, unit 2-norm
    bool             injective = true; // set by canonicalize
    double           lambda1   = 0;    // |lambda_1| / |lambda_0| of the regular TM, if computed

    UniformMps() = default;
    explicit UniformMps(std::vector<Mat> a, Gauge g = Gauge::none) : A(std::move(a)), gauge(g) {}

    [[nodiscard]] Eigen::Index D() const { return A.empty() ? 0 : A.front().rows(); }
    [[nodiscard]] int          d() const { return static_cast<int>(A.size()); }

    /// Throws DimensionError unless every A[s] is square with the same size.
    void validate() const;
};

/// Local operator acting on `support` consecutive sites, basis index s_1 d^{n-1} + ... + s_n.
struct SiteOperator {
    int  support = 1;
    Mat  matrix;
    bool zero_mean = false;

    SiteOperator() = default;
    SiteOperator(int n, Mat m, bool zm = false) : support(n), matrix(std::move(m)), zero_mean(zm) {}

    /// Physical dimension implied by the matrix size; throws if inconsistent.
    [[nodiscard]] int d() const;
    [[nodiscard]] static SiteOperator identity(int d, int n = 1);
};

/// Random complex tensor with i.i.d. normal entries (not normalized).
[[nodiscard]] UniformMps random_mps(Eigen::Index D, int d, std::uint64_t seed);

/// D = 1 product state with the given (normalized) local vector.
[[nodiscard]] UniformMps product_mps(const Vec &local);

/// A~^s = sum_k u_{sk} A^k. Throws InvalidArgument if u is not unitary to 1e-12.
[[nodiscard]] UniformMps apply_symmetry(const UniformMps &mps, const Mat &u);

/// Maximal |entry| difference between two tensors of equal shape.
[[nodiscard]] double tensor_distance(const UniformMps &a, const UniformMps &b);

} // namespace mpstm
