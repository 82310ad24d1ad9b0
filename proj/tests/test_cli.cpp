#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <resonance_forge/cli.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = rf::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("rf_cli_" + name); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, CoeffExact) {
    CliRun r = run({"coeff", "--model", "kg", "--delta", "2", "--key", "0,0,1,1", "--exact", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["exact"]["q"], "8/1");
    EXPECT_EQ(j["exact"]["h"], -2);
    EXPECT_EQ(j["exact"]["r"], "1/1");
    EXPECT_NEAR(j["approx"].get<double>(), 8 / M_PI, 1e-15);
    EXPECT_EQ(j["schema_version"], 1);

    CliRun text = run({"coeff", "--model", "kg", "--delta", "2", "--key", "0,0,1,1", "--exact"});
    EXPECT_NE(text.out.find("8*pi^-1"), std::string::npos) << text.out;
}

TEST(Cli, CoeffQuadrature) {
    CliRun r = run({"coeff", "--model", "wm", "--delta", "1", "--key", "1,2,3,4", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j.contains("exact"));
    double e = rf::to_float(rf::coeff_exact(rf::ModelConfig::make(rf::Model::WM, 1), {1, 2, 3, 4}));
    EXPECT_NEAR(j["approx"].get<double>(), e, 1e-12 * std::max(1.0, std::fabs(e)));
}

TEST(Cli, StabilityKG10) {
    CliRun r = run({"stability", "--model", "kg", "--delta", "10", "--m-max", "50", "--json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j["coercive"].get<bool>());
    EXPECT_EQ(j["gaps"].size(), 50u);
}

TEST(Cli, RecurrenceVerify) {
    CliRun r = run({"recurrence", "verify", "--model", "wm", "--delta", "3", "--m-max", "100", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["m_checked"], 100);
}

TEST(Cli, RecurrenceDerive) {
    CliRun r = run({"recurrence", "derive", "--model", "kg", "--delta", "3", "--order", "2", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["order"], 2);
    EXPECT_TRUE(j["certificate_verified"].get<bool>());
    EXPECT_EQ(run({"recurrence", "derive", "--model", "kg", "--delta", "2"}).code, 0);
}

TEST(Cli, Diag) {
    CliRun r = run({"diag", "--model", "wm", "--delta", "1", "--m-max", "3", "--json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["values"].size(), 4u);
    EXPECT_EQ(j["values"][0]["exact"]["q"], "18/5");
    EXPECT_EQ(j["c_infinity"]["q"], "9/2");
    CliRun csv = run({"diag", "--model", "kg", "--delta", "2", "--m-max", "2"});
    EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "m,exact,approx");
}

TEST(Cli, TableRoundTrip) {
    fs::path p = tmp("table.json");
    CliRun r = run({"table", "--model", "kg", "--delta", "3", "--m-max", "3", "--json", "--out", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    rf::CoeffTable t = rf::table_from_json(nlohmann::json::parse(slurp(p)));
    EXPECT_EQ(t.max_index, 3);
    EXPECT_TRUE(t.at({0, 0, 1, 1}).exact.has_value());
    CliRun csv = run({"table", "--model", "kg", "--delta", "3", "--m-max", "2"});
    EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "i,j,k,m,approx");
    fs::remove(p);
}

TEST(Cli, Resonant) {
    CliRun r = run({"resonant", "--model", "kg", "--delta", "2", "--trunc", "10", "--samples", "50", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_LE(j["M_residual"].get<double>(), 1e-10);
    EXPECT_NEAR(j["coercivity"]["c_tilde"].get<double>(), 0.5, 1e-10);
    CliRun neg = run({"resonant", "--model", "kg", "--delta", "10", "--trunc", "14", "--json"});
    ASSERT_EQ(neg.code, 0) << neg.err;
    EXPECT_TRUE(nlohmann::json::parse(neg.out)["coercivity"].is_null());
    EXPECT_EQ(run({"resonant", "--model", "kg", "--delta", "2", "--trunc", "1"}).code, 1);
}

TEST(Cli, EvolveWritesTrajectoryAndSummary) {
    fs::path p = tmp("traj.csv");
    CliRun r = run({"evolve", "--model", "kg", "--delta", "2", "--trunc", "8", "--eps", "0.1", "--periods", "2", "--out", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["trunc"], 8);
    EXPECT_LE(j["energy_drift"].get<double>(), 1e-6);
    std::string csv = slurp(p);
    EXPECT_EQ(csv.rfind("t,H,h_omega,dist_linear,q_0", 0), 0u);
    fs::remove(p);

    CliRun sc = run({"evolve", "--model", "kg", "--delta", "2", "--trunc", "8", "--periods", "5", "--scaling", "0.02", "0.04", "--json"});
    ASSERT_EQ(sc.code, 0) << sc.err;
    EXPECT_NEAR(nlohmann::json::parse(sc.out)["slope_estimate"].get<double>(), 2.0, 0.3);
}

TEST(Cli, Deterministic) {
    std::vector<std::string> a = {"evolve", "--model", "wm", "--delta", "2", "--trunc", "6", "--periods", "1", "--eps", "0.2"};
    EXPECT_EQ(run(a).out, run(a).out);
    std::vector<std::string> b = {"resonant", "--model", "wm", "--delta", "1", "--trunc", "8", "--seed", "3", "--json"};
    EXPECT_EQ(run(b).out, run(b).out);
}

TEST(Cli, ValidationErrors) {
    EXPECT_EQ(run({"coeff", "--model", "xx", "--delta", "2", "--key", "0,0,0,0"}).code, 1);
    EXPECT_EQ(run({"coeff", "--model", "kg", "--delta", "1", "--key", "0,0,0,0"}).code, 1);
    EXPECT_EQ(run({"coeff", "--model", "kg", "--delta", "2"}).code, 1);
    EXPECT_EQ(run({"coeff", "--model", "kg", "--delta", "2", "--key", "0,0,x"}).code, 1);
    EXPECT_EQ(run({"coeff", "--bogus"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"evolve", "--eps", "-1"}).code, 1);
    CliRun j = run({"coeff", "--model", "kg", "--delta", "0", "--key", "0,0,0,0", "--json"});
    EXPECT_EQ(j.code, 1);
    EXPECT_EQ(nlohmann::json::parse(j.err)["exit_code"], 1);
}

TEST(Cli, ExitCodeMapping) {
    EXPECT_EQ(rf::cli::exit_code_for(rf::RecurrenceViolated("x")), 2);
    EXPECT_EQ(rf::cli::exit_code_for(rf::CertificateInvalid("x")), 2);
    EXPECT_EQ(rf::cli::exit_code_for(rf::ValidationError("x")), 1);
    EXPECT_EQ(rf::cli::exit_code_for(rf::TableIncomplete("x")), 1);
}

TEST(Cli, ConfigFile) {
    fs::path p = tmp("cfg.txt");
    {
        std::ofstream o(p);
        o << "# defaults\nmodel = wm\ndelta=2\nkey = 0,0,1,1\njson = true\n";
    }
    CliRun r = run({"coeff", "--config", p.string(), "--exact"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["model"], "wm");
    EXPECT_EQ(j["delta"], 2);
    CliRun over = run({"coeff", "--config", p.string(), "--delta", "3"});
    EXPECT_EQ(nlohmann::json::parse(over.out)["delta"], 3);
    {
        std::ofstream o(p);
        o << "colour = blue\n";
    }
    EXPECT_EQ(run({"coeff", "--config", p.string()}).code, 1);
    fs::remove(p);
}

TEST(Cli, SelftestSubset) {
    CliRun r = run({"selftest", "--only", "1", "5", "--json"});
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["all_pass"].get<bool>());
    EXPECT_EQ(j["criteria"].size(), 2u);
}

TEST(Cli, BinaryExitCodes) {
    const char* bin = std::getenv("RF_CLI");
    if (!bin) GTEST_SKIP() << "RF_CLI not set";
    auto status = [&](const std::string& args) {
        int s = std::system((std::string(bin) + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    EXPECT_EQ(status("coeff --model kg --delta 2 --key 0,0,1,1 --exact"), 0);
    EXPECT_EQ(status("stability --model kg --delta 10 --m-max 50"), 0);
    EXPECT_EQ(status("recurrence verify --model wm --delta 3 --m-max 100"), 0);
    EXPECT_EQ(status("coeff --model kg --delta 2 --unknown"), 1);
    EXPECT_EQ(status("--help"), 0);
}
