#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "finsler-iso");
    std::ostringstream out;
    std::ostringstream err;
    const int code = finsler::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Outcome& o) { return nlohmann::json::parse(o.out); }

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t pos; (pos = text.find("\r\n", start)) != std::string::npos; start = pos + 2)
        lines.push_back(text.substr(start, pos - start));
    return lines;
}

}  // namespace

TEST(CliEval, Examples) {
    auto o = run({"eval", "--metric", "euclidean", "--dim", "3", "--g", "1,0,0", "--h", "0,3,4"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(json_of(o).at("value"), 5.0);
    o = run({"eval", "--metric", "fubini-study", "--dim", "2", "--g", "1,0", "--h", "0,2"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(json_of(o).at("value").get<double>(), 2, 1e-15);
    o = run({"eval", "--metric", "euclidean", "--dim", "2", "--g", "1,0", "--h", "1"});
    EXPECT_EQ(o.code, 2);
    EXPECT_FALSE(o.err.empty());
}

TEST(CliEval, ComplexEntriesAndSesquilinear) {
    auto o = run({"eval", "--metric", "fubini-study-riemann", "--field", "complex", "--g", "1:0,0",
                  "--h", "0,0:1", "--f", "0,0:1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = json_of(o);
    EXPECT_NEAR(j.at("value").get<double>(), 1, 1e-15);
    EXPECT_NEAR(j.at("sigma").at(0).get<double>(), 1, 1e-15);
    EXPECT_NEAR(j.at("sigma").at(1).get<double>(), 0, 1e-15);
}

TEST(CliEval, DomainErrorsExitThree) {
    EXPECT_EQ(run({"eval", "--metric", "euclidean", "--g", "0,0,0", "--h", "1,0,0"}).code, 3);
    EXPECT_EQ(run({"eval", "--metric", "theta:log(r-5)", "--g", "1,0,0", "--h", "1,0,0"}).code, 3);
}

TEST(CliDecompose, Examples) {
    auto o = run({"decompose", "--metric", "euclidean", "--dim", "3"});
    ASSERT_EQ(o.code, 0) << o.err;
    auto lines = csv_lines(o.out);
    ASSERT_GT(lines.size(), 2u);
    EXPECT_EQ(lines[0], "r,tau,theta");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double theta = std::stod(lines[i].substr(lines[i].rfind(',') + 1));
        EXPECT_NEAR(theta, 1, 1e-15);
    }
    o = run({"decompose", "--metric", "fubini-study-riemann", "--dim", "3"});
    ASSERT_EQ(o.code, 0) << o.err;
    lines = csv_lines(o.out);
    EXPECT_EQ(lines[0], "r,phi,psi");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string a, b, c;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        std::getline(row, c, ',');
        const double r = std::stod(a);
        EXPECT_NEAR(std::stod(b), 1 / r, 1e-12 / r);
        EXPECT_NEAR(std::stod(c), -1 / (r * r), 1e-11 / (r * r));
    }
    o = run({"decompose", "--metric", "euclidean", "--dim", "1"});
    EXPECT_EQ(o.code, 3);
    EXPECT_NE(o.err.find("decomposition requires dim ≥ 2"), std::string::npos);
}

TEST(CliCheck, Examples) {
    EXPECT_EQ(run({"check", "invariance", "--metric", "euclidean", "--dim", "4", "--samples", "500"}).code, 0);
    EXPECT_EQ(run({"check", "kaehler", "--metric", "fubini-study"}).code, 0);
    const auto o = run({"check", "homothety", "--alpha", "2", "--metric", "euclidean"});
    EXPECT_EQ(o.code, 1);
    EXPECT_FALSE(json_of(o).at("witness").is_null());
}

TEST(CliCheck, MoreCriteria) {
    EXPECT_EQ(run({"check", "pd", "--metric", "euclidean"}).code, 0);
    EXPECT_EQ(run({"check", "pd", "--metric", "fubini-study"}).code, 1);
    EXPECT_EQ(run({"check", "kaehler", "--metric", "riemann:1;1"}).code, 1);
    EXPECT_EQ(run({"check", "kaehler", "--metric", "fubini-study", "--field", "real"}).code, 2);
    EXPECT_EQ(run({"check", "homothety", "--metric", "norm-quotient"}).code, 0);
    EXPECT_EQ(run({"check", "invariance", "--metric", "euclidean", "--dim", "2", "--map", "2,0,0,1"}).code, 1);
    EXPECT_EQ(run({"check", "invariance", "--metric", "euclidean", "--dim", "2", "--map", "0,1,-1,0"}).code, 0);
    EXPECT_EQ(run({"check", "invariance", "--metric", "euclidean", "--dim", "2", "--map", "1,2,3"}).code, 2);
    EXPECT_EQ(run({"check", "pd", "--metric", "theta:1"}).code, 2);
    EXPECT_EQ(run({"check", "nonsense", "--metric", "euclidean"}).code, 2);
}

TEST(CliProbe, Examples) {
    auto o = run({"probe-main", "--metric", "euclidean", "--dim", "3", "--maps", "100"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(json_of(o).at("maps_tested"), 100);
    EXPECT_EQ(run({"probe-main", "--metric", "area", "--dim", "2", "--sl2", "100"}).code, 0);
    o = run({"probe-main", "--dim", "2", "--metric", "euclidean"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("dim >= 3"), std::string::npos);
}

TEST(CliDistance, Examples) {
    auto o = run({"distance", "--metric", "euclidean", "--g", "1,0,0", "--h", "0,1,0"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(json_of(o).at("value").get<double>(), std::sqrt(2.0), 1e-3);
    o = run({"distance", "--metric", "euclidean", "--g", "1,0,0", "--h", "1,1,0"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(json_of(o).at("value").get<double>(), 1.0, 1e-3);
    const std::string path = ::testing::TempDir() + "fs_path.csv";
    o = run({"distance", "--metric", "fubini-study", "--g", "1,0,0", "--h", "0,1,0", "--path-out", path});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = json_of(o);
    EXPECT_NEAR(j.at("value").get<double>(), std::numbers::pi / 2, 1e-2);
    EXPECT_EQ(j.at("path_file"), path);
    std::ifstream csv(path);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "t,x1,x2,x3\r");
    o = run({"distance", "--metric", "riemann:-1;0", "--g", "1,0,0", "--h", "0,1,0"});
    EXPECT_EQ(o.code, 3);
    EXPECT_NE(o.err.find("NonPositiveMetric"), std::string::npos);
}

TEST(CliContract, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "euclidean", "--g", "1,0,0"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "nope", "--g", "1,0,0", "--h", "1,0,0"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "theta:1+", "--g", "1,0,0", "--h", "1,0,0"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "{\"family\":", "--g", "1,0,0", "--h", "1,0,0"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "euclidean", "--g", "1,x,0", "--h", "1,0,0"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "euclidean", "--field", "quaternion", "--g", "1", "--h", "1"}).code, 2);
    EXPECT_EQ(run({"eval", "--metric", "euclidean", "--format", "xml", "--g", "1", "--h", "1"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliContract, ConfigFileMatchesInlineMetric) {
    const std::string path = ::testing::TempDir() + "cfg.json";
    std::ofstream(path) << R"j({"family":"theta","dim":3,"params":{"theta":"1+cos(tau)"}})j";
    const auto a = run({"eval", "--config", path, "--g", "1,0,0", "--h", "1,1,0"});
    const auto b = run({"eval", "--metric", "@" + path, "--g", "1,0,0", "--h", "1,1,0"});
    const auto c = run({"eval", "--metric", "theta:1+cos(tau)", "--g", "1,0,0", "--h", "1,1,0"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}

TEST(CliContract, OutputFile) {
    const std::string path = ::testing::TempDir() + "eval_out.json";
    const auto o = run({"eval", "--metric", "euclidean", "--g", "1,0,0", "--h", "0,3,4", "--output", path});
    ASSERT_EQ(o.code, 0);
    std::ifstream in(path);
    EXPECT_EQ(nlohmann::json::parse(in).at("value"), 5.0);
}

TEST(CliContract, ByteIdenticalReruns) {
    const std::vector<std::vector<std::string>> commands = {
        {"check", "invariance", "--metric", "theta:1+cos(tau)", "--field", "complex", "--seed", "9"},
        {"check", "homothety", "--metric", "euclidean", "--seed", "4"},
        {"probe-main", "--metric", "fubini-study", "--maps", "20", "--seed", "3"},
        {"decompose", "--metric", "fubini-study", "--format", "json"},
        {"distance", "--metric", "norm-quotient", "--g", "1,0,0", "--h", "2,0,0", "--iterations", "10"},
    };
    for (const auto& cmd : commands) {
        const auto a = run(cmd);
        const auto b = run(cmd);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << cmd[0];
        EXPECT_FALSE(a.out.empty());
        if (!a.out.empty() && a.out.front() == '{') {
            // Keys sorted at every level.
            const auto j = nlohmann::json::parse(a.out);
            std::string prev;
            for (const auto& [k, v] : j.items()) {
                EXPECT_LT(prev, k);
                prev = k;
            }
        }
    }
}
