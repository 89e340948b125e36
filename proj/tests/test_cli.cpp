#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "kneser/commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json report() const { return json::parse(out); }
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KNESER_BINARY) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scenario(const std::string& name) { return std::string(KNESER_SCENARIOS) + "/" + name + ".json"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("kneser_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

fs::path write_file(const TempDir& dir, const std::string& name, const std::string& body) {
  const auto p = dir.path() / name;
  std::ofstream(p) << body;
  return p;
}

void expect_spec_error(const Run& r) {
  EXPECT_EQ(r.code, 2) << r.out;
  const auto j = r.report();
  ASSERT_TRUE(j.contains("error"));
  EXPECT_EQ(j["error"]["class"], "spec");
  EXPECT_TRUE(j["error"]["code"].is_string());
  EXPECT_FALSE(j["error"]["message"].get<std::string>().empty());
}

}  // namespace

TEST(Cli, VerifyCircleIdentity) {
  const auto r = run("verify --scenario " + scenario("circle_identity") + " --grid 16x64");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.report();
  EXPECT_EQ(j["command"], "verify");
  EXPECT_EQ(j["verdict"], "diffeomorphism");
  EXPECT_NEAR(j["t_min"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(j["grid"]["radial"], 16);
  EXPECT_EQ(j["grid"]["angular"], 64);
}

TEST(Cli, OverridesAppearInHeader) {
  const auto r = run("tfun --scenario " + scenario("circle_identity") + " --nodes 512 --grid 4x8");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.report();
  EXPECT_EQ(j["quadrature_N"], 512);
  EXPECT_EQ(j["grid"]["radial"], 4);
  EXPECT_EQ(j["grid"]["angular"], 8);
  EXPECT_NEAR(j["min"].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(j["max"].get<double>(), 1.0, 1e-10);
}

TEST(Cli, ExtendJacobians) {
  auto r = run("extend --scenario " + scenario("circle_identity") + " --grid 8x32");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = r.report();
  EXPECT_NEAR(j["jacobian_min"].get<double>(), 1.0, 1e-8);
  EXPECT_NEAR(j["jacobian_max"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(j["rows"], 8 * 32);

  r = run("extend --scenario " + scenario("ellipse_affine"));
  ASSERT_EQ(r.code, 0) << r.out;
  j = r.report();
  EXPECT_NEAR(j["jacobian_min"].get<double>(), 0.96, 1e-8);
  EXPECT_NEAR(j["jacobian_max"].get<double>(), 0.96, 1e-8);
}

TEST(Cli, FoldWitnessesAreRechecked) {
  const auto r = run("verify --scenario " + scenario("bean_fold"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.report();
  EXPECT_EQ(j["verdict"], "fold-detected");
  EXPECT_LT(j["t_min"].get<double>(), -1e-3);
  const auto& inj = j["injectivity"];
  EXPECT_FALSE(inj["pass"].get<bool>());
  ASSERT_FALSE(inj["witnesses"].empty());
  for (const auto& w : inj["witnesses"]) EXPECT_TRUE(w["rechecked"].get<bool>());
}

TEST(Cli, QcReports) {
  auto r = run("qc --scenario " + scenario("circle_twist"));
  ASSERT_EQ(r.code, 0) << r.out;
  auto q = r.report()["report"];
  EXPECT_EQ(q["verdict"], "qc");
  EXPECT_NEAR(q["K_estimate"].get<double>(), 2.450726193940376, 1e-5);
  EXPECT_TRUE(q["guards"].empty());

  r = run("qc --scenario " + scenario("circle_plateau"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["report"]["verdict"], "not-qc");

  r = run("qc --scenario " + scenario("bean_fold"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["report"]["verdict"], "not-qc");
}

TEST(Cli, ProbeTable) {
  const auto r = run("probe --scenario " + scenario("circle_probe"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto table = r.report()["table"];
  ASSERT_GE(table.size(), 2u);
  EXPECT_EQ(table[0]["map"]["type"], "identity");
  EXPECT_NEAR(table[0]["essinf_boundary_jacobian"].get<double>(), 1.0, 1e-8);
  EXPECT_TRUE(table[0]["injective"].get<bool>());
  EXPECT_EQ(table[1]["map"]["type"], "plateau");
  EXPECT_NEAR(table[1]["essinf_boundary_jacobian"].get<double>(), 0.0, 1e-8);
  EXPECT_TRUE(table[1]["injective"].get<bool>());

  const auto bean = run("probe --scenario " + scenario("bean_probe")).report()["table"];
  bool saw_fold = false;
  for (const auto& row : bean) {
    if (row["map"].value("amplitude", 0.0) == 0.6) {
      saw_fold = true;
      EXPECT_LT(row["essinf_boundary_jacobian"].get<double>(), 0.0);
      EXPECT_FALSE(row["injective"].get<bool>());
    }
  }
  EXPECT_TRUE(saw_fold);
}

TEST(Cli, OutputIsByteIdentical) {
  TempDir a("a"), b("b");
  for (const std::string cmd : {"verify", "tfun", "qc", "extend"}) {
    const std::string base = cmd + " --scenario " + scenario("ellipse_twist") + " --grid 8x32";
    const auto r1 = run(base + " --out " + a.path().string());
    const auto r2 = run(base + " --out " + b.path().string());
    ASSERT_EQ(r1.code, 0) << r1.out;
    // the report lists file names only, so the two runs print the same bytes
    EXPECT_EQ(r1.out, r2.out) << cmd;
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a.path())) {
    ++files;
    const auto other = b.path() / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << e.path();
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
  }
  EXPECT_GT(files, 0u);
}

TEST(Cli, InvalidCurveIsSpecError) {
  const auto r = run("verify --scenario " + scenario("invalid_figure_eight"));
  expect_spec_error(r);
  EXPECT_EQ(r.report()["error"]["code"], "SelfIntersecting");
}

TEST(Cli, MalformedInputsAreSpecErrors) {
  TempDir dir("bad");
  expect_spec_error(run("verify --scenario " + write_file(dir, "broken.json", "{\"curve\": ").string()));
  expect_spec_error(run("verify --scenario " + (dir.path() / "missing.json").string()));
  expect_spec_error(run("verify --scenario " +
                        write_file(dir, "tol.json",
                                   R"({"curve": {"kind": "circle", "radius": 1}, "map": {"type": "identity"},
                                       "tolerances": {"nonsense": 1}})")
                            .string()));
  expect_spec_error(run("verify --scenario " + scenario("circle_identity") + " --grid 64by256"));
  expect_spec_error(run("verify --scenario " + scenario("circle_identity") + " --nodes 1000"));
  expect_spec_error(run("transmogrify --scenario " + scenario("circle_identity")));
  expect_spec_error(run("verify"));
}

TEST(Cli, NumericalErrorsMapToThree) {
  EXPECT_EQ(kneser::exit_code_for(kneser::ErrorCode::InvalidSpec), 2);
  EXPECT_EQ(kneser::exit_code_for(kneser::ErrorCode::SelfIntersecting), 2);
  EXPECT_EQ(kneser::exit_code_for(kneser::ErrorCode::NumericalGuard), 3);
  EXPECT_EQ(kneser::exit_code_for(kneser::ErrorCode::DegenerateBoundary), 3);
  const auto j = kneser::error_report(kneser::ErrorCode::NumericalGuard, "x");
  EXPECT_EQ(j["error"]["class"], "numerical-guard");
}
