#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "arithdyn/cli/commands.hpp"
#include "sample_configs.hpp"

using namespace arithdyn;
using namespace testsupport;
using cli::Json;

namespace {

namespace fs = std::filesystem;

const std::string kSource = ARITHDYN_SOURCE_DIR;
const std::string kBinary = ARITHDYN_CLI_PATH;

Json schema(const std::string& name) { return io::read_json_file(kSource + "/schemas/" + name + ".schema.json"); }

/// Envelope and command-specific report both validate.
std::vector<std::string> report_errors(const std::string& command, const Json& report) {
    Json env = cli::envelope(command, "test", report, std::nullopt);
    io::SchemaValidator v(schema("report"));
    auto errs = v.errors(env);
    auto sub = v.errors(report, command);
    errs.insert(errs.end(), sub.begin(), sub.end());
    return errs;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / ("arithdyn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

/// Runs the binary with stdout to a file and returns the exit status.
int run(const std::string& args, const fs::path& out) {
    std::string cmd = "\"" + kBinary + "\" " + args + " > \"" + out.string() + "\" 2> \"" + out.string() + ".err\"";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& name) { return "--config \"" + kSource + "/configs/" + name + ".json\""; }

} // namespace

TEST(Configs, AllShippedConfigsValidateAndParse) {
    io::SchemaValidator v(schema("config"));
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(kSource + "/configs")) {
        Json doc = io::read_json_file(e.path().string());
        EXPECT_TRUE(v.valid(doc)) << e.path() << "\n" << join(v.errors(doc));
        EXPECT_NO_THROW(io::parse_run_config(doc)) << e.path();
        ++n;
    }
    EXPECT_GE(n, 10u);
}

TEST(Configs, RoundTripThroughConfigJson) {
    for (const char* name : {"wehler_222", "power2", "product_power_monomial", "lattice_rank2", "bundle_examples"}) {
        auto c = sample_config(name);
        Json once = io::config_json(c);
        Json twice = io::config_json(io::parse_run_config(once));
        EXPECT_EQ(once, twice) << name;
        EXPECT_TRUE(io::SchemaValidator(schema("config")).valid(once)) << name;
    }
}

TEST(Configs, SchemaRejectsMalformedDocuments) {
    io::SchemaValidator v(schema("config"));
    EXPECT_FALSE(v.valid(Json{{"system", {{"type", "wehler"}}}}));
    EXPECT_FALSE(v.valid(Json{{"system", {{"type", "teleport"}}}}));
    EXPECT_FALSE(v.valid(Json{{"options", {{"N", "many"}}}}));
}

TEST(Commands, ReportsMatchTheirSchemas) {
    auto w = sample_config("wehler_222");
    std::vector<std::pair<std::string, Json>> reports{{"lambda1", cli::cmd_lambda1(w)},
                                                      {"canh", cli::cmd_canh(w, {"R"})},
                                                      {"ks-verify", cli::cmd_ks_verify(w, "R")},
                                                      {"sweep-periodic", cli::cmd_sweep_periodic(w)}};
    for (const char* name : {"power2", "monomial_fib", "product_power_monomial", "wehler_parabolic"}) {
        auto c = sample_config(name);
        reports.emplace_back("lambda1", cli::cmd_lambda1(c));
        const auto& p = cli::select_point(c);
        auto o = cli::orbit_outcome(c, p);
        reports.emplace_back("orbit", cli::orbit_report(c, p, o, true));
        reports.emplace_back("alpha", cli::orbit_report(c, p, o, false));
        reports.emplace_back("ks-verify", cli::cmd_ks_verify(c));
    }
    reports.emplace_back("lattice", cli::cmd_lattice(sample_config("lattice_rank2")));
    reports.emplace_back("lattice", cli::cmd_lattice(sample_config("lattice_wehler")));
    auto b = sample_config("bundle_examples");
    reports.emplace_back("bundle", cli::cmd_bundle(b));
    reports.emplace_back("chow", cli::cmd_chow(b));
    for (const auto& [cmd, rep] : reports) EXPECT_TRUE(report_errors(cmd, rep).empty()) << cmd << "\n" << join(report_errors(cmd, rep));
    // A report under the wrong definition is caught.
    EXPECT_FALSE(report_errors("lattice", cli::cmd_lambda1(w)).empty());
}

TEST(Commands, Lambda1OnWehler) {
    Json r = cli::cmd_lambda1(sample_config("wehler_222"));
    std::string dump = r.dump();
    EXPECT_NE(dump.find("17.944"), std::string::npos) << dump;
}

TEST(ChowParser, Expressions) {
    ChowRing r(3, Integer(2));
    auto d3 = io::parse_chow_expression(r, "D^3");
    EXPECT_EQ(intersection_number(d3), FieldElement(-2));
    EXPECT_EQ(io::parse_chow_expression(r, "(D + 2*F)^3"), chow_pow(ChowElement::D(r) + FieldElement(2) * ChowElement::F(r), 3));
    EXPECT_TRUE(io::parse_chow_expression(r, "F^2*D").is_zero());
    EXPECT_EQ(io::parse_chow_expression(r, "1/2*D*F - D*F*1/2"), ChowElement(r));
    EXPECT_THROW(io::parse_chow_expression(r, "D^"), InvalidInput);
    EXPECT_THROW(io::parse_chow_expression(r, "D + X"), InvalidInput);
    EXPECT_THROW(io::parse_chow_expression(r, "(D"), InvalidInput);
    EXPECT_THROW(io::parse_chow_expression(r, "D*F/2"), InvalidInput);
}

TEST(Binary, ExitCodes) {
    fs::path d = scratch();
    EXPECT_EQ(run(config("wehler_222") + " lambda1", d / "ok.json"), 0);
    EXPECT_EQ(run("--config /nonexistent/config.json lambda1", d / "missing.json"), 2);
    EXPECT_EQ(run("--bogus", d / "flag.json"), 2);
    {
        std::ofstream(d / "bad.json") << R"({"system": {"type": "wehler"}})";
        EXPECT_EQ(run("--config \"" + (d / "bad.json").string() + "\" lambda1", d / "bad.out"), 2);
    }
    // lambda_1 = 1: the Tate limit has no expanding factor.
    EXPECT_EQ(run(config("monomial_identity") + " canh", d / "pre.json"), 3);
    {
        std::ofstream(d / "cap.json") << R"({"name": "cap", "system": {"type": "power", "degree": 2, "dim": 1},
            "points": [{"name": "P", "coords": [[2, 3]]}],
            "options": {"N": 40, "cap_bits": 300, "representation": "exact"}})";
        EXPECT_EQ(run("--config \"" + (d / "cap.json").string() + "\" orbit", d / "cap.out"), 4);
        // The partial orbit is still written and valid.
        Json partial = Json::parse(slurp(d / "cap.out"));
        EXPECT_TRUE(report_errors("orbit", partial.at("report")).empty());
    }
    fs::remove_all(d);
}

TEST(Binary, ReproducibleRunsAreByteIdentical) {
    fs::path d = scratch();
    ASSERT_EQ(run("--reproducible " + config("wehler_222") + " ks-verify", d / "a.json"), 0);
    ASSERT_EQ(run("--reproducible " + config("wehler_222") + " ks-verify", d / "b.json"), 0);
    std::string a = slurp(d / "a.json"), b = slurp(d / "b.json");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("generated_at"), std::string::npos);
    ASSERT_EQ(run(config("wehler_222") + " ks-verify", d / "c.json"), 0);
    EXPECT_NE(slurp(d / "c.json").find("generated_at"), std::string::npos);
    fs::remove_all(d);
}

TEST(Binary, PrintConfigRoundTrips) {
    fs::path d = scratch();
    ASSERT_EQ(run("--print-config " + config("wehler_222"), d / "eff.json"), 0);
    ASSERT_EQ(run("--print-config --config \"" + (d / "eff.json").string() + "\"", d / "eff2.json"), 0);
    EXPECT_EQ(slurp(d / "eff.json"), slurp(d / "eff2.json"));
    Json eff = Json::parse(slurp(d / "eff.json"));
    EXPECT_TRUE(eff.at("options").contains("cap_bits"));
    fs::remove_all(d);
}

TEST(Binary, CsvAndOutFile) {
    fs::path d = scratch();
    ASSERT_EQ(run(config("power2") + " --format csv orbit --N 3", d / "orbit.csv"), 0);
    std::string csv = slurp(d / "orbit.csv");
    EXPECT_EQ(csv.substr(0, 1), "n");
    EXPECT_NE(csv.find("6561"), std::string::npos) << csv;
    ASSERT_EQ(run(config("power2") + " --out \"" + (d / "o.json").string() + "\" --reproducible lambda1", d / "stdout"), 0);
    EXPECT_TRUE(slurp(d / "stdout").empty());
    EXPECT_EQ(Json::parse(slurp(d / "o.json")).at("command"), "lambda1");
    fs::remove_all(d);
}

TEST(Binary, BundleAnalyzeFromFlags) {
    fs::path d = scratch();
    ASSERT_EQ(run("--reproducible bundle analyze --n 3 --deg-g 4 --delta 4 --hn \"[(2,0),(1,-1)]\"", d / "b.json"), 0);
    Json r = Json::parse(slurp(d / "b.json")).at("report");
    EXPECT_TRUE(report_errors("bundle", r).empty());
    EXPECT_NE(r.dump().find("ForcedBaseEquality"), std::string::npos) << r.dump(2);
    EXPECT_EQ(run("bundle analyze --n 3 --deg-g 4 --delta 4 --hn \"[(1,0),(1,2)]\"", d / "bad.json"), 2);
    fs::remove_all(d);
}
