#pragma once

#include "mpstm/uniform_mps.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mpstm::io {

/// Binary layout: "UMPS1", uint64 LE D, d, D, then complex doubles (re, im) of A[a][s][b], b fastest.
void       write_umps(std::ostream &os, const UniformMps &mps);
UniformMps read_umps(std::istream &is);

struct MpsMetadata {
    std::string         model;
    std::vector<double> params;
    Eigen::Index        D = 0;
    std::string         gauge;
    double              energy = 0;
    std::vector<double> schmidt;
};

/// Writes `path` and the JSON sidecar `path + ".json"`, each via temp file + rename.
void save_umps(const std::string &path, const UniformMps &mps, const MpsMetadata &meta);

/// Reads the tensor; restores gauge and Schmidt values from the sidecar when present.
UniformMps load_umps(const std::string &path, MpsMetadata *meta = nullptr);

/// Atomic text write (temp + rename).
void write_file_atomic(const std::string &path, const std::string &content);

} // namespace mpstm::io
