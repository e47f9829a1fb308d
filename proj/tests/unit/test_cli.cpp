#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef MPSTM_CLI
#error "MPSTM_CLI must point at the mpstm executable"
#endif

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int         status = -1;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream     is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
  protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() / ("mpstm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    fs::path write(const std::string &name, const std::string &text) const {
        std::ofstream(dir / name) << text;
        return dir / name;
    }

    CliRun run(const std::string &args) const {
        const auto err = dir / "stderr.txt";
        const auto cmd = std::string(MPSTM_CLI) + " -q " + args + " 2> " + err.string() + " > " + (dir / "stdout.txt").string();
        CliRun     r;
        const int  raw = std::system(cmd.c_str());
        r.status       = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.err          = slurp(err);
        return r;
    }
};

constexpr const char *kFerro = R"(model: {name: XY, params: [0.3, 0.2]}
D: 16
itebd: {initial: [1, 1]}
spectrum: {kind: regular, m: 8}
)";

std::vector<std::string> csv_lines(const std::string &text) {
    std::vector<std::string> out;
    std::size_t              pos = 0;
    while(pos < text.size()) {
        const auto end = text.find("\r\n", pos);
        if(end == std::string::npos) break;
        out.push_back(text.substr(pos, end - pos));
        pos = end + 2;
    }
    return out;
}

} // namespace

TEST_F(Cli, EmptyConfigListsMissingKeys) {
    const auto r = run("--config " + write("empty.yaml", "").string() + " --out " + dir.string() + " gs");
    EXPECT_EQ(r.status, 2);
    for(const char *key : {"model.name", "model.params", "D"}) EXPECT_NE(r.err.find(key), std::string::npos) << r.err;
}

TEST_F(Cli, WrongTypeReportsLine) {
    const auto r = run("--config " + write("bad.yaml", "model: {name: XY, params: [0.3, 0.2]}\nD: sixteen\n").string() + " --out " + dir.string() + " gs");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("bad.yaml:2"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("'D'"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownSubcommandRejected) { EXPECT_NE(run("frobnicate").status, 0); }

TEST_F(Cli, SpectrumOfSavedStateStartsAtZeroAndIsReproducible) {
    const auto cfg = write("ferro.yaml", kFerro);
    ASSERT_EQ(run("--config " + cfg.string() + " --out " + (dir / "gs").string() + " gs").status, 0);
    ASSERT_TRUE(fs::exists(dir / "gs" / "gs_D16.umps"));
    ASSERT_TRUE(fs::exists(dir / "gs" / "gs_D16.umps.json"));

    const auto state = write("spec.yaml", "state: " + (dir / "gs" / "gs_D16.umps").string() + "\nspectrum: {kind: regular, m: 8}\n");
    ASSERT_EQ(run("--config " + state.string() + " --out " + (dir / "a").string() + " spectrum").status, 0);
    ASSERT_EQ(run("--config " + state.string() + " --out " + (dir / "b").string() + " spectrum").status, 0);

    const std::string a = slurp(dir / "a" / "spectrum.csv");
    EXPECT_EQ(a, slurp(dir / "b" / "spectrum.csv"));
    EXPECT_EQ(slurp(dir / "a" / "branches.csv"), slurp(dir / "b" / "branches.csv"));

    const auto lines = csv_lines(a);
    ASSERT_EQ(lines.size(), 9U);
    EXPECT_EQ(lines[0], "j,re,im,abs,eps,phi,config_hash");
    std::stringstream row(lines[1]);
    std::string       field;
    std::vector<std::string> f;
    while(std::getline(row, field, ',')) f.push_back(field);
    ASSERT_EQ(f.size(), 7U);
    EXPECT_EQ(f[0], "0");
    EXPECT_NEAR(std::stod(f[4]), 0.0, 1e-10);
    EXPECT_EQ(f[6].size(), 64U);
}

TEST_F(Cli, SeedChangesHashButNotOracleData) {
    const auto cfg = write("xy.yaml", "model: {name: XY, params: [0.5, 1.05]}\noracle: {kind: xy}\nkgrid: {n: 16}\n");
    ASSERT_EQ(run("--config " + cfg.string() + " --out " + (dir / "s1").string() + " --seed 1 oracle").status, 0);
    ASSERT_EQ(run("--config " + cfg.string() + " --out " + (dir / "s2").string() + " --seed 2 oracle").status, 0);
    const auto a = csv_lines(slurp(dir / "s1" / "xy_dispersion.csv")), b = csv_lines(slurp(dir / "s2" / "xy_dispersion.csv"));
    ASSERT_EQ(a.size(), b.size());
    ASSERT_GT(a.size(), 1U);
    const auto strip = [](const std::string &s) { return s.substr(0, s.rfind(',')); };
    EXPECT_EQ(strip(a[1]), strip(b[1]));
    EXPECT_NE(a[1], b[1]);
}

TEST_F(Cli, AcceptSubsetReportsAndSetsExitStatus) {
    const auto cfg = write("acc.yaml", "accept: {only: [A4], cache: " + (dir / "cache").string() + "}\n");
    const auto r   = run("--config " + cfg.string() + " --out " + dir.string() + " accept");
    EXPECT_EQ(r.status, 0) << r.err;
    const std::string out = slurp(dir / "stdout.txt");
    EXPECT_NE(out.find("A4"), std::string::npos);
    EXPECT_NE(out.find("PASS"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "acceptance.json"));
}
