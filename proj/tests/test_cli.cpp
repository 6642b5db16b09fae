#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("spinflip_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    static std::string read(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    // Runs the CLI; stdout is captured in `out`.
    int run(const std::string& args, std::string* out = nullptr) const {
        const auto stdout_path = dir_ / "stdout.txt";
        const std::string cmd = std::string("\"") + SPINFLIP_CLI_PATH + "\" " + args + " > \"" +
                                stdout_path.string() + "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
        const int status = std::system(cmd.c_str());
        if (out) *out = read(stdout_path);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string stderr_text() const { return read(dir_ / "stderr.txt"); }

    fs::path dir_;
};

const std::string cu_point = "material = Cu\nd = 50 um\nf = 560 kHz\nT = 300 K\n";

}  // namespace

TEST_F(Cli, LifetimeSucceeds) {
    std::string out;
    ASSERT_EQ(run("lifetime --config " + write("cu.cfg", cu_point), &out), 0) << stderr_text();
    std::istringstream in(out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header.rfind("swept_name,", 0), 0u);
    ASSERT_EQ(row.rfind("distance,", 0), 0u) << row;
    EXPECT_NEAR(std::stod(row.substr(9)), 50e-6, 1e-18) << row;
}

TEST_F(Cli, JsonFormat) {
    std::string out;
    ASSERT_EQ(run("lifetime --format json --config " + write("cu.cfg", cu_point), &out), 0);
    const auto j = nlohmann::json::parse(out);
    ASSERT_TRUE(j.is_array());
    EXPECT_GT(j.at(0).at("tau_flip").get<double>(), 0.0);
}

TEST_F(Cli, OutputIsByteIdenticalAcrossRuns) {
    const auto cfg = write("s.cfg", "material = drude\ndelta = 5 um\nf = 560 kHz\nT = 300 K\n"
                                    "sweep = distance\nsweep_min = 2 um\nsweep_max = 80 um\nsweep_points = 6\n");
    std::string a, b, c;
    ASSERT_EQ(run("sweep --config " + cfg, &a), 0);
    ASSERT_EQ(run("sweep --threads 1 --config " + cfg, &b), 0);
    ASSERT_EQ(run("sweep --threads 4 --config " + cfg, &c), 0);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST_F(Cli, ConfigurationErrorsExitWithTwo) {
    EXPECT_EQ(run("lifetime --config " + write("typo.cfg", cu_point + "distanse = 5 um\n")), 2);
    EXPECT_NE(stderr_text().find("distanse"), std::string::npos);
    EXPECT_EQ(run("lifetime --config " + (dir_ / "absent.cfg").string()), 2);
    EXPECT_EQ(run("lifetime --config " + write("nounit.cfg", "material = Cu\nd = 50\nf = 560 kHz\nT = 300 K\n")), 2);
    EXPECT_EQ(run("sweep --config " + write("nosweep.cfg", cu_point)), 2);
    EXPECT_EQ(run("lifetime --format xml --config " + write("cu.cfg", cu_point)), 2);
    EXPECT_EQ(run("lifetime"), 2);
}

TEST_F(Cli, Fig2NeedsBackgroundRate) {
    EXPECT_EQ(run("fig2 --config " + write("empty.cfg", "# nothing\n")), 2);
    EXPECT_NE(stderr_text().find("background_rate"), std::string::npos);
}

TEST_F(Cli, Fig2WithBackground) {
    std::string out;
    ASSERT_EQ(run("fig2 --config " + write("bg.cfg", "background_rate = 2 /s\nsweep_points = 4\n"), &out), 0);
    std::istringstream in(out);
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 5);
}

TEST_F(Cli, DataErrorsExitWithFour) {
    const auto cfg = write("bg.cfg", "background_rate = 2 /s\n");
    EXPECT_EQ(run("overlay --config " + cfg + " --data " + write("bad.csv", "d_um,tau_s\n10,-2\n")), 4);
    EXPECT_NE(stderr_text().find("row 2"), std::string::npos);
    EXPECT_EQ(run("overlay --config " + cfg + " --data " + (dir_ / "absent.csv").string()), 4);
}

TEST_F(Cli, OverlayReadsShippedDataFile) {
    std::string out;
    const auto cfg = write("bg.cfg", "background_rate = 2 /s\n");
    ASSERT_EQ(run("overlay --config " + cfg + " --data " + std::string(SPINFLIP_SOURCE_DIR) + "/data/experiment_points.csv", &out), 0)
        << stderr_text();
    EXPECT_EQ(out.rfind("d_um,", 0), 0u);
}

TEST_F(Cli, NonConvergenceExitsWithThree) {
    EXPECT_EQ(run("lifetime --tol 1e-14 --config " + write("cu.cfg", cu_point + "max_subdivisions = 1\n")), 3);
    EXPECT_NE(stderr_text().find("did not converge"), std::string::npos);
}

TEST_F(Cli, Fig3WritesBothVariants) {
    const auto cfg = write("f3.cfg", "sweep_points = 3\n");
    const auto out = dir_ / "fig3.csv";
    ASSERT_EQ(run("fig3 --config " + cfg + " --out " + out.string()), 0) << stderr_text();
    const auto thick = read(dir_ / "fig3_thick.csv"), thin = read(dir_ / "fig3_thin.csv");
    EXPECT_EQ(thick.rfind("swept_name,", 0), 0u);
    EXPECT_EQ(thin.rfind("swept_name,", 0), 0u);
    EXPECT_NE(thick, thin);
    EXPECT_FALSE(fs::exists(out));
}

TEST_F(Cli, Fig3SingleVariant) {
    std::string out;
    ASSERT_EQ(run("fig3 --variant thin --config " + write("f3.cfg", "sweep_points = 2\n"), &out), 0);
    EXPECT_NE(out.find("skin_depth,"), std::string::npos);
}
