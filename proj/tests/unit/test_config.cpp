#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "issglf/config.hpp"
#include "issglf/pipeline.hpp"

using namespace issglf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kTransport = R"(scenario:
  class: transport
  k: 0.5
  d: [{start: 0, kind: constant, params: [0.2]}, {start: 1, kind: sinusoid, params: [0.1, 2.0]}]
  rho0: {kind: bump, params: [1.0, 0.5, 0.4]}
grid:
  n: 64
solver:
  t_end: 0.5
certify:
  q: [2, .inf]
)";

class ScopedOutputRoot {
 public:
  explicit ScopedOutputRoot(const fs::path& root) : root_(root) {
    fs::remove_all(root_);
    setenv(kOutputRootEnv, root_.c_str(), 1);
  }
  ~ScopedOutputRoot() {
    unsetenv(kOutputRootEnv);
    fs::remove_all(root_);
  }

 private:
  fs::path root_;
};

}  // namespace

TEST(ConfigParse, DefaultsFilledIn) {
  const auto cfg = parse_config(kTransport);
  EXPECT_EQ(cfg.scenario.cls, ScenarioClass::Transport);
  EXPECT_EQ(cfg.scenario.id, "transport");
  EXPECT_EQ(cfg.grid.n, 64);
  EXPECT_EQ(cfg.glf.p, 2.0);
  ASSERT_EQ(cfg.certify.q.size(), 2u);
  EXPECT_TRUE(std::isinf(cfg.certify.q[1]));
  ASSERT_EQ(cfg.scenario.d.size(), 2u);
  EXPECT_EQ(cfg.scenario.d[1].kind, PieceKind::Sinusoid);
}

TEST(ConfigParse, EchoRoundTrips) {
  const auto cfg = parse_config(kTransport);
  const auto echo = echo_config(cfg);
  EXPECT_EQ(parse_config(echo), cfg);
  EXPECT_EQ(echo_config(parse_config(echo)), echo);
}

TEST(ConfigParse, BundledConfigsRoundTrip) {
  std::size_t seen = 0;
  for (const auto& e : fs::directory_iterator(ISSGLF_SCENARIO_DIR)) {
    if (e.path().extension() != ".yaml") continue;
    ++seen;
    SCOPED_TRACE(e.path().filename().string());
    const auto cfg = parse_config(slurp(e.path()));
    EXPECT_EQ(cfg.scenario.id, e.path().stem().string());
    EXPECT_FALSE(cfg.scenario.description.empty());
    EXPECT_EQ(parse_config(echo_config(cfg)), cfg);
  }
  EXPECT_GE(seen, 7u);
}

TEST(ConfigParse, RejectsKOutsideUnitInterval) {
  const std::string text = "scenario:\n  class: transport\n  k: 1.0\n";
  EXPECT_EQ(config_error(text), "line 3: |k| must be < 1");
  EXPECT_NE(config_error("scenario:\n  class: transport\n  k: -1.5\n").find("|k| must be < 1"), std::string::npos);
}

TEST(ConfigParse, UnknownKeysCarryTheirLine) {
  const std::string text = "scenario:\n  class: wave\n  c: 2\n  speed: 3\n";
  const auto msg = config_error(text);
  EXPECT_EQ(msg.rfind("line 4:", 0), 0u) << msg;
  EXPECT_NE(msg.find("speed"), std::string::npos);
  EXPECT_EQ(config_error("scenario:\n  class: heat\nsolver:\n  dt: 0.01\nextra: 1\n").rfind("line 5:", 0), 0u);
}

TEST(ConfigParse, ClassSpecificRules) {
  EXPECT_NE(config_error("scenario:\n  class: parabolic\n").find("solver.dt"), std::string::npos);
  EXPECT_NE(config_error("scenario:\n  class: transport\n  k: 0.5\ngrid:\n  layout: node\n").find("cell grid"),
            std::string::npos);
  EXPECT_NE(config_error("scenario:\n  class: wave\n  c: 1\ncertify:\n  bounds: [parabolic_q]\n").find("does not apply"),
            std::string::npos);
  EXPECT_NE(config_error("scenario:\n  class: wave\n  c: 0\n").find("positive"), std::string::npos);
  EXPECT_NE(config_error("scenario:\n  class: wave\n  c: 1\ncertify:\n  q: [1.5]\n").find("[2, inf]"),
            std::string::npos);
  EXPECT_NE(config_error("scenario: [1, 2]\n").find("mapping"), std::string::npos);
}

TEST(ConfigBuild, TransportLowerBoundFromVelocityMap) {
  auto cfg = parse_config(
      "scenario:\n  class: transport\n  k: 0.5\n  lambda: {kind: gaussian, params: [0.5, 0.25]}\n");
  EXPECT_EQ(make_transport(cfg.scenario).lambda0, 0.25);
  cfg = parse_config(
      "scenario:\n  class: transport\n  k: 0.5\n  lambda: {kind: inverse_abs, params: [1, 1]}\n");
  EXPECT_THROW(make_transport(cfg.scenario), Error);
}

TEST(Pipeline, RunWritesArtifactsAndEchoesConfig) {
  const fs::path root = fs::temp_directory_path() / "issglf_test_config_run";
  ScopedOutputRoot guard(root);
  const auto cfg = parse_config(kTransport);
  const auto out = run_config(cfg);
  EXPECT_EQ(out.exit_code, 0) << out.summary;
  EXPECT_EQ(out.directory, root / "transport");
  for (const char* f : {"summary.txt", "glf.csv", "trajectory.csv", "trajectory.meta", "check_transport_q_q2.csv",
                        "check_transport_q_qinf.csv"}) {
    EXPECT_TRUE(fs::exists(out.directory / f)) << f;
  }
  EXPECT_EQ(slurp(out.directory / "summary.txt"), out.summary);
  EXPECT_EQ(parse_summary_echo(out.summary), cfg);
}

TEST(Pipeline, ValidationErrorsExitWithTwo) {
  const fs::path root = fs::temp_directory_path() / "issglf_test_config_err";
  ScopedOutputRoot guard(root);
  // A2 without R0 cannot be certified.
  const auto cfg = parse_config(
      "scenario:\n  class: transport\n  k: 0.5\n  assumption: A2\n  lambda: {kind: inverse_abs, params: [1, 1]}\n");
  const auto out = run_config(cfg);
  EXPECT_EQ(out.exit_code, 2);
  EXPECT_NE(out.summary.find("status = ERROR"), std::string::npos);
}
