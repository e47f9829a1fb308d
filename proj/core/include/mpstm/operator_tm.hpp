#pragma once

#include "mpstm/transfer.hpp"

namespace mpstm {

inline constexpr int kMaxSupport = 4;

/// Operator-dressed transfer matrix J_O over `support` sites:
///   right: R -> sum_{s,t} O_{st} K^{t_1..t_n} R (B^{s_1..s_n})^dagger
///   left:  L -> sum_{s,t} O_{st} (B^{s_1..s_n})^dagger L K^{t_1..t_n}
/// with s the bra (row) and t the ket (column) multi-index of O.
class OperatorTm {
  public:
    OperatorTm(const UniformMps &bra, const UniformMps &ket, const SiteOperator &op);
    OperatorTm(const UniformMps &mps, const SiteOperator &op) : OperatorTm(mps, mps, op) {}

    [[nodiscard]] Vec              apply(Direction dir, const Vec &v) const;
    [[nodiscard]] int              support() const { return support_; }
    [[nodiscard]] Eigen::Index     size() const { return Db_ * Dk_; }
    [[nodiscard]] krylov::LinearOp op(Direction dir) const;

  private:
    int              support_;
    Eigen::Index     Db_, Dk_;
    Mat              O_;
    std::vector<Mat> bra_str_, ket_str_; // products over all physical strings
};

[[nodiscard]] OperatorTm operator_tm(const UniformMps &mps, const SiteOperator &op);

/// Products A^{s_1} ... A^{s_n} for all d^n strings, index s_1 d^{n-1} + ... + s_n.
[[nodiscard]] std::vector<Mat> string_products(const UniformMps &mps, int n);

} // namespace mpstm
