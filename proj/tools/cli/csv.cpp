#include "csv.hpp"

#include "mpstm/common.hpp"
#include "mpstm/mps_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mpstm::cli {

namespace {

    std::string quote(const std::string &s) {
        if(s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string out = "\"";
        for(char c : s) {
            if(c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    }

} // namespace

std::string format_double(double v) {
    if(std::isnan(v)) return "nan";
    if(std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v); // no "-0"
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header, std::string config_hash) : header_(std::move(header)), hash_(std::move(config_hash)) {}

void CsvTable::add_row(std::vector<Field> row) {
    if(row.size() != header_.size()) throw DimensionError("CsvTable: row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::ostringstream os;
    for(const auto &h : header_) os << quote(h) << ',';
    os << "config_hash\r\n";
    for(const auto &row : rows_) {
        for(const auto &f : row) {
            if(const auto *d = std::get_if<double>(&f)) os << format_double(*d);
            else if(const auto *i = std::get_if<long long>(&f)) os << *i;
            else os << quote(std::get<std::string>(f));
            os << ',';
        }
        os << hash_ << "\r\n";
    }
    return os.str();
}

void CsvTable::write(const std::string &path) const { io::write_file_atomic(path, str()); }

} // namespace mpstm::cli
