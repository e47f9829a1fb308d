#pragma once

#include <string>
#include <variant>
#include <vector>

namespace mpstm::cli {

/// RFC 4180 table: CRLF line ends, fields quoted when needed, doubles with 17 significant digits.
/// Every row carries the config hash in its last column.
class CsvTable {
  public:
    using Field = std::variant<double, long long, std::string>;

    CsvTable(std::vector<std::string> header, std::string config_hash);

    void add_row(std::vector<Field> row);

    [[nodiscard]] std::string str() const;
    /// Atomic write (temp file + rename).
    void write(const std::string &path) const;

  private:
    std::vector<std::string>        header_;
    std::string                     hash_;
    std::vector<std::vector<Field>> rows_;
};

[[nodiscard]] std::string format_double(double v);

} // namespace mpstm::cli
