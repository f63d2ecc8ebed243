// test_cli.cpp — Subcommand runs: CSV schema, determinism, exit statuses

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qtt/cli.hpp"

using namespace qtt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "qtt_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    ADD_FAILURE() << "missing column " << name;
    return 0;
}

ModelConfig config(const std::string& text) { return parse_config_string(text); }

int run(const std::string& sub, const std::string& text, const fs::path& out, unsigned threads = 1) {
    std::ostringstream err;
    return run_subcommand(sub, config(text), {threads, out.string()}, err);
}

} // namespace

TEST(Csv, SeventeenSignificantDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
}

TEST(Cli, CurrentsSchemaAndDeterminism) {
    const std::string cfg = "sweep_min = 0.01\nsweep_max = 1\nsweep_n = 3\n";
    const auto a = scratch("cur_a.csv"), b = scratch("cur_b.csv");
    ASSERT_EQ(run("currents", cfg, a, 1), exit_ok);
    ASSERT_EQ(run("currents", cfg, b, 3), exit_ok);
    EXPECT_EQ(slurp(a), slurp(b));
    const auto rows = read_csv(a);
    ASSERT_EQ(rows.size(), 1u + 3u * 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"scheme", "alpha_m", "T_l", "T_m", "T_r", "J_l", "J_m", "J_r",
                                                 "J_l_per_gamma", "J_m_per_gamma", "J_r_per_gamma", "residual", "status"}));
    const auto jl = column(rows[0], "J_l"), jlg = column(rows[0], "J_l_per_gamma");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].back(), "ok");
        EXPECT_NEAR(std::stod(rows[i][jl]) / 2e-4, std::stod(rows[i][jlg]), 1e-12);
    }
}

TEST(Cli, CurrentSignConvention) {
    const std::string cfg = "sweep_min = 0.1\nsweep_max = 1\nsweep_n = 3\nschemes = redfield\n";
    const auto a = scratch("sign_in.csv"), b = scratch("sign_out.csv");
    ASSERT_EQ(run("currents", cfg, a), exit_ok);
    ASSERT_EQ(run("currents", cfg + "current_sign = out_of_bath\n", b), exit_ok);
    const auto ra = read_csv(a), rb = read_csv(b);
    const auto jl = column(ra[0], "J_l");
    EXPECT_EQ(std::stod(ra[1][jl]), -std::stod(rb[1][jl]));
}

TEST(Cli, AmplificationAtStrongCouplingFlagsDivergence) {
    const auto out = scratch("amp.csv");
    ASSERT_EQ(run("amplification", "alpha_m = 4\nsweep_min = 0.8\nsweep_max = 1.2\nsweep_n = 9\n", out), exit_ok);
    const auto rows = read_csv(out);
    const auto div = column(rows[0], "divergent");
    int flagged = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) flagged += rows[i][div] == "1";
    EXPECT_GE(flagged, 1);
}

TEST(Cli, NdtcMarksTurnover) {
    const auto out = scratch("ndtc.csv");
    ASSERT_EQ(run("ndtc", "alpha_m = 0.02\norders = 1\nsweep_n = 17\n", out), exit_ok);
    const auto rows = read_csv(out);
    const auto t = column(rows[0], "turnover");
    int marks = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) marks += rows[i][t] == "1";
    EXPECT_EQ(marks, 1);
}

TEST(Cli, MechanismColumns) {
    const auto out = scratch("mech.csv");
    ASSERT_EQ(run("mechanism", "alpha_m = 4\nsweep_n = 5\n", out), exit_ok);
    const auto rows = read_csv(out);
    ASSERT_EQ(rows.size(), 6u);
    const auto a = column(rows[0], "J_m_a"), b = column(rows[0], "J_m_b"), ab = column(rows[0], "J_m_ab");
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_NEAR(std::stod(rows[i][a]) + std::stod(rows[i][b]), std::stod(rows[i][ab]), 1e-18);
}

TEST(Cli, RatesDumpAndClassify) {
    const auto r = scratch("rates.csv");
    ASSERT_EQ(run("rates-dump", "alpha_m = 0.5\n", r), exit_ok);
    const auto rows = read_csv(r);
    EXPECT_GT(rows.size(), 50u);
    const auto c = scratch("classify.csv");
    ASSERT_EQ(run("classify", "sweep_min = 0.001\nsweep_max = 8\nsweep_n = 6\n", c), exit_ok);
    const auto bounds = read_csv(scratch("classify_boundaries.csv"));
    ASSERT_EQ(bounds.size(), 4u);
    EXPECT_EQ(bounds[1][0], "redfield_J_m_breakdown");
}

TEST(Cli, ValidationExitCodeBeforeWriting) {
    const auto out = scratch("invalid.csv");
    fs::remove(out);
    EXPECT_EQ(run("currents", "T_m = -1\n", out), exit_validation);
    EXPECT_FALSE(fs::exists(out));
    EXPECT_EQ(run("ndtc", "sweep_max = 2.5\n", out), exit_validation);
}

TEST(Cli, SolverFailureKeepsPartialOutput) {
    // site degeneracy is fine for PTRE but outside the NIBA scheme
    const auto out = scratch("partial.csv");
    const int rc = run("amplification", "eps_r = 1.0\nschemes = ptre, niba\nsweep_n = 3\n", out);
    EXPECT_EQ(rc, exit_solver);
    const auto rows = read_csv(out);
    ASSERT_GE(rows.size(), 1u + 3u + 1u);
    EXPECT_EQ(rows[1][0], "ptre");
    const auto text = slurp(out);
    const auto last = text.substr(text.rfind('\n', text.size() - 2) + 1);
    EXPECT_NE(last.find(",\"FAILED: niba"), std::string::npos) << last;
}

TEST(Cli, UnknownSubcommand) {
    std::ostringstream err;
    EXPECT_EQ(run_subcommand("plot", ModelConfig{}, {}, err), exit_parse);
}

#ifdef QTT_CLI_BINARY
TEST(Binary, ExitStatuses) {
    const std::string bin = QTT_CLI_BINARY;
    const auto cfg = scratch("bad.cfg");
    std::ofstream(cfg) << "T_mm = 1\n";
    const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
    auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
    EXPECT_EQ(status(std::system((q(bin) + " currents " + q(cfg) + " -o " + q(scratch("x.csv")) + " 2>/dev/null").c_str())), 2);
    std::ofstream(cfg) << "T_l = -2\n";
    EXPECT_EQ(status(std::system((q(bin) + " currents " + q(cfg) + " -o " + q(scratch("x.csv")) + " 2>/dev/null").c_str())), 3);
    EXPECT_EQ(status(std::system((q(bin) + " rates-dump -s alpha_m=0.1 -o " + q(scratch("y.csv")) + " >/dev/null").c_str())), 0);
    EXPECT_EQ(status(std::system((q(bin) + " 2>/dev/null >/dev/null").c_str())), 2);
}
#endif
