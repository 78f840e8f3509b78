#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "ergoloc/ergotropy.hpp"
#include "ergoloc/matrix_io.hpp"
#include "ergoloc/models.hpp"
#include "ergoloc/random.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace ergoloc;
using namespace ergoloc::testing;
using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "ergoloc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ergoloc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const ComplexMatrix& m) const {
    write_matrix_file(path(name), m);
    return path(name);
  }
  fs::path dir_;
};

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(CliParsing, Angles) {
  EXPECT_DOUBLE_EQ(cli::parse_angle("0.4pi"), 0.4 * pi);
  EXPECT_DOUBLE_EQ(cli::parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(cli::parse_angle("-pi"), -pi);
  EXPECT_DOUBLE_EQ(cli::parse_angle("2*pi"), 2 * pi);
  EXPECT_DOUBLE_EQ(cli::parse_angle(" 1.5 "), 1.5);
  EXPECT_THROW(cli::parse_angle("abc"), InvalidInput);
  EXPECT_THROW(cli::parse_angle("1.5x"), InvalidInput);
  EXPECT_THROW(cli::parse_angle(""), InvalidInput);
}

TEST(CliParsing, Sweeps) {
  const auto s = cli::parse_sweep("0:20pi:2000");
  ASSERT_EQ(s.size(), 2000u);
  EXPECT_EQ(s.front(), 0.0);
  EXPECT_EQ(s.back(), 20 * pi);
  EXPECT_NEAR(s[1], 20 * pi / 1999, 1e-15);
  EXPECT_THROW(cli::parse_sweep("0:1:1"), InvalidInput);
  EXPECT_THROW(cli::parse_sweep("0:1"), InvalidInput);
  EXPECT_THROW(cli::parse_sweep("0:1:2.5"), InvalidInput);
  EXPECT_EQ(cli::format_number(0.1), "0.10000000000000001");
}

TEST_F(CliTest, GlobalValues) {
  const std::string h = write("h.json", diag2(0, 1));
  Result r = call({"global", "--state", write("rho.json", diag2(0.3, 0.7)), "--hamiltonian", h});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 0.4, 1e-15);
  r = call({"global", "--state", write("passive.json", diag2(0.7, 0.3)), "--hamiltonian", h, "--unitary"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.0, 1e-15);
  EXPECT_TRUE(j.contains("optimal_unitary"));
  EXPECT_EQ(j["passive_eigenvalues"][0].get<double>(), 0.7);
}

TEST_F(CliTest, MalformedInputIsExitTwo) {
  std::ofstream(path("bad.json")) << "{\"rows\": 2";
  const Result r = call({"global", "--state", path("bad.json"), "--hamiltonian", path("bad.json")});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(call({"nonsense"}).code, cli::kExitInput);
  EXPECT_EQ(call({"global", "--state", path("missing.json"), "--hamiltonian", path("bad.json")}).code,
            cli::kExitInput);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST_F(CliTest, LocalAllMethodsOnJcExport) {
  ASSERT_EQ(call({"jc", "--alpha", "0", "--sweep-phi", "0:1:2", "--export", path("jc")}).code, 0);
  const Result r = call({"local", "--state", path("jc/state.json"), "--hs", path("jc/hs.json"), "--v",
                         path("jc/v.json"), "--he", path("jc/he.json"), "--method", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  const double expect = *jc_exact({1.0, 1.2, 0.1, default_cutoff(10)}, 10, Branch::plus).local;
  EXPECT_NEAR(j["methods"]["closed"]["value"].get<double>(), expect, 1e-12);
  EXPECT_NEAR(j["methods"]["optimize"]["value"].get<double>(), expect, 1e-8);
  EXPECT_NEAR(j["methods"]["polar"]["value"].get<double>(), expect, 1e-12);
  EXPECT_NEAR(j["methods"]["sdp"]["value"].get<double>(), expect, 1e-5);
  EXPECT_TRUE(j["ordering"]["ok"].get<bool>());
}

TEST_F(CliTest, LocalGuardsAndFreeCase) {
  Rng rng(5);
  const ComplexMatrix rs = random_density(3, rng), re = random_density(2, rng), hs = random_hermitian(3, rng);
  const std::string st = write("rho.json", tensor_product(rs, re)), h = write("hs.json", hs);
  const std::string v = write("v.json", ComplexMatrix::Zero(6, 6));
  EXPECT_EQ(call({"local", "--state", st, "--hs", h, "--v", v, "--method", "closed"}).code, cli::kExitInput);
  EXPECT_EQ(call({"local", "--state", st, "--hs", h, "--v", v, "--ds", "3", "--method", "closed"}).code,
            cli::kExitInput);
  EXPECT_EQ(call({"local", "--state", st, "--hs", h, "--v", v, "--method", "magic"}).code, cli::kExitInput);
  const Result r = call({"local", "--state", st, "--hs", h, "--v", v, "--method", "optimize"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["methods"]["optimize"]["value"].get<double>(), global_ergotropy(rs, hs).value,
              1e-9);
}

TEST_F(CliTest, JcSweepColumns) {
  Result r = call({"jc", "--alpha", "0", "--sweep-phi", "0:2pi:7"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"phi", "local_ergotropy", "switch_off", "delta_off"}));
  const double expect = *jc_exact({1.0, 1.2, 0.1, default_cutoff(10)}, 10, Branch::plus).local;
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), expect, 1e-12);

  r = call({"jc"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out).size(), 2001u);
  EXPECT_EQ(call({"jc"}).out, r.out);

  const Result plain = call({"jc", "--sweep-phi", "0.5:1:3"});
  const Result dyn = call({"jc", "--sweep-phi", "0.5:1:3", "--dynamical-phase"});
  EXPECT_NE(plain.out, dyn.out);
  EXPECT_EQ(call({"jc", "--sweep-phi", "0:1:1"}).code, cli::kExitInput);
  EXPECT_EQ(call({"jc", "--alpha", "0.4pie"}).code, cli::kExitInput);
  EXPECT_EQ(call({"jc", "--n", "10", "--n-max", "8"}).code, cli::kExitInput);
}

TEST_F(CliTest, JcThreadCountDoesNotChangeOutput) {
  const Result many = call({"jc", "--sweep-phi", "0:20pi:300"});
  setenv("ERGOLOC_THREADS", "1", 1);
  const Result one = call({"jc", "--sweep-phi", "0:20pi:300"});
  unsetenv("ERGOLOC_THREADS");
  EXPECT_EQ(many.out, one.out);
}

TEST_F(CliTest, XxzRows) {
  Result r = call({"xxz", "--sites", "8", "--j", "0.05", "--jz", "0.2", "--k-sweep"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0][0], "k");
  EXPECT_EQ(rows[0][7], "regime");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int k = std::stoi(rows[i][0]);
    const XxzParams p{8, 1.0, 0.05, 0.2};
    EXPECT_NEAR(std::stod(rows[i][5]), *xxz_exact(p, k).local, 1e-9);
    EXPECT_NEAR(std::stod(rows[i][1]), xxz_bethe_energy(p, k), 1e-12);
    EXPECT_LE(std::stod(rows[i][6]), 1e-10);
  }

  r = call({"xxz", "--sites", "3", "--j", "0.02", "--jz", "0.4", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  bool reversal = false;
  const json parsed = json::parse(r.out);
  for (const json& row : parsed["rows"]) {
    if (row["switch_off"].get<double>() > 0 && std::abs(row["local_numeric"].get<double>()) <= 1e-10) reversal = true;
  }
  EXPECT_TRUE(reversal);

  r = call({"xxz", "--sites", "3", "--jz", "1.0", "--k", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out)[1][4], "");  // outside the regime, no analytic value

  EXPECT_EQ(call({"xxz", "--sites", "20"}).code, cli::kExitInput);
  EXPECT_EQ(call({"xxz", "--sites", "4", "--k", "3"}).code, cli::kExitInput);
  EXPECT_EQ(call({"xxz", "--sites", "4", "--k", "1", "--k-sweep"}).code, cli::kExitInput);
}

TEST_F(CliTest, SdpExportRoundTrip) {
  Rng rng(9);
  const BipartiteSystem sys = random_system({2, 3}, rng, 0.6);
  const std::string st = write("rho.json", sys.rho()), h = write("hs.json", sys.h_s());
  const std::string v = write("v.json", sys.v()), he = write("he.json", sys.h_e());
  Result r = call({"export-sdp", "--state", st, "--hs", h, "--v", v, "--he", he, "--output", path("inst.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = call({"export-sdp", "--import", path("inst.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const double imported = json::parse(r.out)["bound"].get<double>();
  r = call({"local", "--state", st, "--hs", h, "--v", v, "--he", he, "--method", "sdp"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(imported, json::parse(r.out)["methods"]["sdp"]["value"].get<double>(), 1e-9);
  EXPECT_NEAR(imported, qubit_local_ergotropy(build_m_matrix(sys)).value, 1e-5);

  std::ofstream(path("empty.json"))
      << R"({"d_s": 2, "cost": {"rows": 0, "cols": 0, "entries": []}, "constraints": "unital-bimarginal", "rho_energy": 1.25})";
  r = call({"export-sdp", "--import", path("empty.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["bound"].get<double>(), 1.25);
  EXPECT_EQ(call({"export-sdp", "--import", path("empty.json"), "--state", st}).code, cli::kExitInput);
}

TEST_F(CliTest, SelftestAndSeedDeterminism) {
  const Result r = call({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("selftest passed"), std::string::npos);

  Rng rng(11);
  const BipartiteSystem sys = random_system({3, 2}, rng, 0.6);
  const std::string st = write("rho.json", sys.rho()), h = write("hs.json", sys.h_s()), v = write("v.json", sys.v());
  const std::vector<std::string> args{"--seed", "7", "local", "--state", st, "--hs", h, "--v", v,
                                      "--method", "optimize", "--restarts", "4"};
  EXPECT_EQ(call(args).out, call(args).out);
  std::vector<std::string> to_file = args;
  to_file.insert(to_file.end(), {"-o", path("out.json")});
  ASSERT_EQ(call(to_file).code, 0);
  std::ifstream f(path("out.json"));
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(f), {}), call(args).out);
}
