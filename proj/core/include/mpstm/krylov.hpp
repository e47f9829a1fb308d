#pragma once

#include "mpstm/common.hpp"

#include <cstdint>
#include <functional>

namespace mpstm::krylov {

/// Matrix-free linear map y = A x. `y` is pre-sized by the caller.
using LinearOp = std::function<void(const Vec &x, Vec &y)>;

struct EigOptions {
    int           nev          = 1;
    int           ncv          = 0;     // 0 -> max(4 nev, 40), capped at n
    double        tol          = 1e-10; // Ritz residual relative to |lambda_0|
    int           max_restarts = 300;
    std::uint64_t seed         = 0x5eedULL;
    Vec           v0;                   // optional start vector
    /// Optional projector applied after every operator application (sector restriction).
    std::function<void(Vec &)> project;
    /// Build the dense matrix and diagonalize when n is at most this size.
    Eigen::Index dense_below = 64;
    /// Throw ConvergenceError when the budget runs out (otherwise return best effort).
    bool throw_on_failure = true;
};

struct EigResult {
    Vec  values;    // sorted: |lambda| descending, then arg ascending in [-pi, pi)
    Mat  vectors;   // unit-norm Ritz vectors as columns
    RVec residuals; // ||A x - lambda x||
    int  restarts  = 0;
    bool converged = false;
};

/// Ordering used everywhere for spectra: magnitude descending, ties (relative 1e-12) by phase ascending.
void sort_spectrum(Vec &values, Eigen::VectorXi &perm);

/// Top `nev` eigenpairs by magnitude of a general (non-Hermitian) operator, Krylov-Schur restarts.
[[nodiscard]] EigResult eigs(const LinearOp &op, Eigen::Index n, const EigOptions &opt);

/// Dense matrix of `op` obtained from its action on unit vectors.
[[nodiscard]] Mat materialize(const LinearOp &op, Eigen::Index n);

/// Complete spectrum of a dense matrix, sorted like `eigs`.
[[nodiscard]] EigResult dense_eigs(const Mat &a, int nev = -1);

struct GmresOptions {
    int    restart  = 60;
    int    max_iter = 6000;
    double tol      = 1e-10; // on ||b - A x|| / ||b||
};

struct GmresResult {
    Vec    x;
    double residual   = 0;
    int    iterations = 0;
    bool   converged  = false;
};

/// Restarted GMRES for A x = b.
[[nodiscard]] GmresResult gmres(const LinearOp &op, const Vec &b, const Vec &x0, const GmresOptions &opt);

/// Deterministic standard-normal complex vector.
[[nodiscard]] Vec random_vector(Eigen::Index n, std::uint64_t seed);

} // namespace mpstm::krylov
