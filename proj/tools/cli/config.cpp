#include "config.hpp"

#include "mpstm/spin.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace mpstm::cli {

namespace {

    std::vector<std::string> split_dots(const std::string &s) {
        std::vector<std::string> out;
        std::stringstream        ss(s);
        std::string              part;
        while(std::getline(ss, part, '.')) out.push_back(part);
        return out;
    }

    // keys each subcommand needs; entries "a|b" are satisfied by either alternative
    const std::map<std::string, std::vector<std::string>> &required_keys() {
        static const std::map<std::string, std::vector<std::string>> req{
            {"gs", {"model.name", "model.params", "D"}},
            {"spectrum", {"state|model.name", "state|model.params", "state|D"}},
            {"corr", {"state|model.name", "state|model.params", "state|D", "operators.A", "operators.B", "corr.n_max"}},
            {"sfactor", {"state|model.name", "state|model.params", "state|D", "operators.O"}},
            {"ozfit", {"state|model.name", "state|model.params", "state|D", "operators.A", "operators.B"}},
            {"filter", {"state|model.name", "state|model.params", "state|D", "operators.A", "operators.B", "filter.k", "filter.ell_max"}},
            {"peps", {"peps.lattice", "peps.ny"}},
            {"oracle", {"oracle.kind", "model.name", "model.params"}},
            {"accept", {}},
        };
        return req;
    }

    std::string canonical(const YAML::Node &n) {
        YAML::Emitter out;
        out.SetMapFormat(YAML::Flow);
        out.SetSeqFormat(YAML::Flow);
        out.SetDoublePrecision(17);
        // mappings re-emitted with sorted keys so key order in the file does not change the hash
        std::function<void(const YAML::Node &)> emit = [&](const YAML::Node &x) {
            if(x.IsMap()) {
                std::map<std::string, YAML::Node> sorted;
                for(const auto &kv : x) sorted.emplace(kv.first.as<std::string>(), kv.second);
                out << YAML::BeginMap;
                for(const auto &[k, v] : sorted) {
                    out << YAML::Key << k << YAML::Value;
                    emit(v);
                }
                out << YAML::EndMap;
            } else if(x.IsSequence()) {
                out << YAML::BeginSeq;
                for(const auto &v : x) emit(v);
                out << YAML::EndSeq;
            } else if(x.IsScalar()) {
                out << x.Scalar();
            } else {
                out << YAML::Null;
            }
        };
        emit(n);
        return out.c_str();
    }

} // namespace

RunConfig RunConfig::from_file(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

RunConfig RunConfig::from_string(const std::string &text, const std::string &origin) {
    RunConfig c;
    c.origin_ = origin;
    try {
        c.root_ = YAML::Load(text);
    } catch(const YAML::ParserException &e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if(c.root_.IsNull()) c.root_ = YAML::Node(YAML::NodeType::Map);
    if(!c.root_.IsMap()) throw ConfigError(origin + ": top level must be a mapping");
    return c;
}

std::string RunConfig::where(const YAML::Node &n) const {
    const auto m = n.Mark();
    return m.is_null() ? std::string() : ":" + std::to_string(m.line + 1);
}

bool RunConfig::has(const std::string &dotted) const {
    YAML::Node n;
    n.reset(root_);
    for(const auto &k : split_dots(dotted)) {
        const YAML::Node &cur = n;
        if(!cur.IsMap() || !cur[k]) return false;
        n.reset(cur[k]);
    }
    return !n.IsNull();
}

YAML::Node RunConfig::at(const std::string &dotted) const {
    YAML::Node n;
    n.reset(root_);
    for(const auto &k : split_dots(dotted)) {
        const YAML::Node &cur = n;
        if(!cur.IsMap() || !cur[k]) throw ConfigError(origin_ + ": missing key '" + dotted + "'");
        n.reset(cur[k]);
    }
    return n;
}

void RunConfig::validate(const std::string &command) const {
    const auto it = required_keys().find(command);
    if(it == required_keys().end()) throw ConfigError("unknown subcommand '" + command + "'");
    std::vector<std::string> missing;
    for(const auto &spec : it->second) {
        const auto bar = spec.find('|');
        if(bar == std::string::npos) {
            if(!has(spec)) missing.push_back(spec);
        } else if(!has(spec.substr(0, bar)) && !has(spec.substr(bar + 1))) {
            missing.push_back(spec.substr(bar + 1) + " (or " + spec.substr(0, bar) + ")");
        }
    }
    std::ostringstream os;
    if(!missing.empty()) {
        os << origin_ << ": missing keys for '" << command << "':";
        for(const auto &m : missing) os << "\n  " << m;
    }
    if(has("model.name")) {
        const YAML::Node n = at("model.name");
        try {
            (void)parse_model(n.as<std::string>());
        } catch(const std::exception &e) {
            os << (os.tellp() > 0 ? "\n" : "") << origin_ << where(n) << ": model.name: " << e.what();
        }
    }
    if(has("D")) {
        for(int D : int_list("D"))
            if(D < 1) os << (os.tellp() > 0 ? "\n" : "") << origin_ << where(at("D")) << ": D must be >= 1";
    }
    if(has("state") && !std::ifstream(get<std::string>("state")))
        os << (os.tellp() > 0 ? "\n" : "") << origin_ << where(at("state")) << ": state file '" << get<std::string>("state") << "' does not exist";
    if(os.tellp() > 0) throw ConfigError(os.str());
}

std::vector<int> RunConfig::int_list(const std::string &dotted) const {
    const YAML::Node n = at(dotted);
    try {
        if(n.IsSequence()) return n.as<std::vector<int>>();
        return {n.as<int>()};
    } catch(const YAML::Exception &) {
        throw ConfigError(origin_ + where(n) + ": key '" + dotted + "' must be an integer or a list of integers");
    }
}

TwoSiteHamiltonian RunConfig::hamiltonian() const {
    const YAML::Node params = at("model.params");
    try {
        return build_hamiltonian(parse_model(get<std::string>("model.name")), params.as<std::vector<double>>());
    } catch(const YAML::Exception &) {
        throw ConfigError(origin_ + where(params) + ": model.params must be a list of numbers");
    } catch(const Error &e) {
        throw ConfigError(origin_ + where(params) + ": " + e.what());
    }
}

ItebdOptions RunConfig::itebd_options(std::uint64_t seed) const {
    ItebdOptions o;
    o.seed = seed;
    if(has("itebd.initial")) {
        const auto v = get<std::vector<double>>("itebd.initial");
        o.initial    = Vec::Zero(static_cast<Eigen::Index>(v.size()));
        for(std::size_t i = 0; i < v.size(); ++i) o.initial(static_cast<Eigen::Index>(i)) = v[i];
        o.initial.normalize();
    }
    if(has("itebd.schedule")) {
        o.schedule.clear();
        for(const auto &row : get<std::vector<std::vector<double>>>("itebd.schedule")) {
            if(row.size() != 3) throw ConfigError(origin_ + where(at("itebd.schedule")) + ": schedule rows are [dt, sweeps, tol]");
            o.schedule.push_back({row[0], static_cast<int>(row[1]), row[2]});
        }
    }
    return o;
}

Mat RunConfig::operator_matrix(const std::string &key, int d) const {
    const auto name = get<std::string>("operators." + key);
    const auto s    = spin::spin_ops(d - 1);
    if(name == "sx") return s.sx;
    if(name == "sy") return s.sy;
    if(name == "sz") return s.sz;
    throw ConfigError(origin_ + where(at("operators." + key)) + ": unknown operator '" + name + "' (sx, sy, sz)");
}

std::string RunConfig::hash(std::uint64_t seed) const {
    const std::string text = canonical(root_) + "\nseed=" + std::to_string(seed);
    unsigned char     md[EVP_MAX_MD_SIZE];
    unsigned int      len = 0;
    EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for(unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

} // namespace mpstm::cli
