#pragma once

#include "mpstm/krylov.hpp"
#include "mpstm/uniform_mps.hpp"

namespace mpstm {

enum class Direction { left, right };

/// Transfer matrix T = sum_s conj(B^s) (x) K^s between bra state B and ket state K.
///
/// Vectors are flattened column-major matrices:
///   right vectors R have shape (D_ket, D_bra) and  T R = sum_s K^s R B^{s dagger}
///   left  vectors L have shape (D_bra, D_ket) and  L T = sum_s B^{s dagger} L K^s
/// and the pairing (L|R) = Tr(L R) makes the two actions mutually transposed.
[[nodiscard]] Vec apply_tm(const UniformMps &bra, const UniformMps &ket, Direction dir, const Vec &v);

/// In-place variant used by the Krylov solvers.
void apply_tm_into(const UniformMps &bra, const UniformMps &ket, Direction dir, const Vec &v, Vec &out);

/// Matrix-free operator bound to copies of the two tensors.
[[nodiscard]] krylov::LinearOp tm_operator(const UniformMps &bra, const UniformMps &ket, Direction dir);

/// Dense D^2 x D^2 matrix of the right action built from Kronecker products (test oracle only).
[[nodiscard]] Mat dense_tm(const UniformMps &bra, const UniformMps &ket);

/// Pairing Tr(L R) of a left and a right vector.
[[nodiscard]] cplx tm_pair(const Vec &l, const Vec &r, Eigen::Index D_bra, Eigen::Index D_ket);

inline Eigen::Map<const Mat> as_matrix(const Vec &v, Eigen::Index rows, Eigen::Index cols) { return {v.data(), rows, cols}; }
inline Vec                   flatten(const Mat &m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

} // namespace mpstm
