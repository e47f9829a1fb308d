#include "mpstm/mps_io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mpstm::io {

namespace {

    constexpr std::array<char, 5> kMagic{'U', 'M', 'P', 'S', '1'};

    static_assert(std::endian::native == std::endian::little, "UMPS1 I/O assumes a little-endian host");

    void put_u64(std::ostream &os, std::uint64_t v) { os.write(reinterpret_cast<const char *>(&v), sizeof v); }
    std::uint64_t get_u64(std::istream &is) {
        std::uint64_t v = 0;
        is.read(reinterpret_cast<char *>(&v), sizeof v);
        if(!is) throw Error("UMPS1: truncated header");
        return v;
    }

} // namespace

void write_umps(std::ostream &os, const UniformMps &mps) {
    mps.validate();
    const auto D = static_cast<std::uint64_t>(mps.D());
    const auto d = static_cast<std::uint64_t>(mps.d());
    os.write(kMagic.data(), kMagic.size());
    put_u64(os, D);
    put_u64(os, d);
    put_u64(os, D);
    for(Eigen::Index a = 0; a < mps.D(); ++a)
        for(int s = 0; s < mps.d(); ++s)
            for(Eigen::Index b = 0; b < mps.D(); ++b) {
                const cplx   z     = mps.A[static_cast<std::size_t>(s)](a, b);
                const double re[2] = {z.real(), z.imag()};
                os.write(reinterpret_cast<const char *>(re), sizeof re);
            }
    if(!os) throw Error("UMPS1: write failed");
}

UniformMps read_umps(std::istream &is) {
    std::array<char, 5> magic{};
    is.read(magic.data(), magic.size());
    if(!is || magic != kMagic) throw Error("UMPS1: bad magic bytes");
    const auto D1 = get_u64(is), d = get_u64(is), D2 = get_u64(is);
    if(D1 != D2 || D1 == 0 || d == 0) throw DimensionError("UMPS1: inconsistent shape header");
    const auto       D = static_cast<Eigen::Index>(D1);
    std::vector<Mat> A(d, Mat(D, D));
    for(Eigen::Index a = 0; a < D; ++a)
        for(std::size_t s = 0; s < d; ++s)
            for(Eigen::Index b = 0; b < D; ++b) {
                double re[2];
                is.read(reinterpret_cast<char *>(re), sizeof re);
                if(!is) throw Error("UMPS1: truncated tensor data");
                A[s](a, b) = cplx(re[0], re[1]);
            }
    return UniformMps(std::move(A));
}

void write_file_atomic(const std::string &path, const std::string &content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if(!f) throw Error("cannot open " + tmp + " for writing");
        f << content;
        if(!f) throw Error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void save_umps(const std::string &path, const UniformMps &mps, const MpsMetadata &meta) {
    std::ostringstream bin(std::ios::binary);
    write_umps(bin, mps);
    write_file_atomic(path, bin.str());

    nlohmann::json j;
    j["model"]   = meta.model;
    j["params"]  = meta.params;
    j["D"]       = mps.D();
    j["d"]       = mps.d();
    j["gauge"]   = gauge_name(mps.gauge);
    j["energy"]  = meta.energy;
    std::vector<double> s(mps.schmidt.data(), mps.schmidt.data() + mps.schmidt.size());
    j["schmidt"] = s;
    write_file_atomic(path + ".json", j.dump(2) + "\n");
}

UniformMps load_umps(const std::string &path, MpsMetadata *meta) {
    std::ifstream f(path, std::ios::binary);
    if(!f) throw Error("cannot open " + path);
    UniformMps    mps = read_umps(f);
    std::ifstream side(path + ".json");
    if(side) {
        const auto j = nlohmann::json::parse(side);
        mps.gauge    = parse_gauge(j.value("gauge", std::string("none")));
        const auto s = j.value("schmidt", std::vector<double>{});
        if(static_cast<Eigen::Index>(s.size()) == mps.D()) mps.schmidt = Eigen::Map<const RVec>(s.data(), static_cast<Eigen::Index>(s.size()));
        else if(mps.gauge == Gauge::mixed) mps.gauge = Gauge::left;
        if(meta) {
            meta->model   = j.value("model", std::string());
            meta->params  = j.value("params", std::vector<double>{});
            meta->D       = mps.D();
            meta->gauge   = gauge_name(mps.gauge);
            meta->energy  = j.value("energy", 0.0);
            meta->schmidt = s;
        }
    }
    return mps;
}

} // namespace mpstm::io
