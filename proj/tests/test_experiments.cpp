#include <doctest.h>

#include <sstream>

#include "geomgate/experiments.hpp"
#include "test_common.hpp"

using namespace geomgate;

namespace {

ExperimentConfig parse_config(const std::string& text) {
  return config_from_toml(minitoml::parse(text));
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("experiment names round-trip") {
  for (const char* name : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig6b",
                           "fig7", "fig8", "fig9", "custom"}) {
    const auto kind = experiment_from_name(name);
    REQUIRE(kind.has_value());
    CHECK(std::string(experiment_name(*kind)) == name);
  }
  CHECK(!experiment_from_name("fig10").has_value());
}

TEST_CASE("named gates carry the studied angle combinations") {
  const GateSpec sz = named_gate(NamedGate::SigmaZ);
  CHECK(sz.theta == doctest::Approx(kPi));
  CHECK(sz.eta() == doctest::Approx(kPi));
  const GateSpec t8 = named_gate(NamedGate::Pi8);
  CHECK(t8.theta == doctest::Approx(0.0));
  CHECK(t8.eta() == doctest::Approx(kPi / 4.0));
  const GateSpec sy = named_gate(NamedGate::SigmaY);
  CHECK(sy.psi == doctest::Approx(kPi / 2.0));
}

TEST_CASE("config defaults per experiment") {
  const auto fig6 = parse_config("experiment = \"fig6\"\n");
  CHECK(fig6.scheme.scheme == Scheme::BlockadePair);
  CHECK(fig6.scheme.V == doctest::Approx(100.0));
  CHECK(fig6.sweep.variable == "T");
  CHECK(fig6.sweep.points == 80);

  const auto fig9 = parse_config(R"(
experiment = "fig9"
[scheme]
g1 = 50.0
g2 = 50.0
)");
  CHECK(fig9.scheme.scheme == Scheme::Mediated);
  CHECK(fig9.scheme.g1 == doctest::Approx(50.0));
  CHECK(fig9.schedule.total_time == doctest::Approx(20.0));

  CHECK_THROWS_AS(parse_config("experiment = \"nope\"\n"),
                  std::invalid_argument);
}

TEST_CASE("validate: diagnostics, not exceptions") {
  SUBCASE("well-formed fig3 config has no diagnostics") {
    const auto cfg = parse_config("experiment = \"fig3\"\n");
    CHECK(validate(cfg).empty());
  }

  SUBCASE("noise on the mediated scheme") {
    const auto cfg = parse_config(R"(
experiment = "custom"
[scheme]
kind = "mediated"
g1 = 10.0
g2 = 10.0
[noise]
gamma_minus = 0.01
)");
    const auto diags = validate(cfg);
    bool found = false;
    for (const auto& d : diags) {
      found = found || d.find("no noise model") != std::string::npos;
    }
    CHECK(found);
  }

  SUBCASE("V = 0 in the blockade scheme") {
    const auto cfg = parse_config(R"(
experiment = "custom"
[scheme]
kind = "blockade"
V = 0.0
)");
    const auto diags = validate(cfg);
    bool found = false;
    for (const auto& d : diags) {
      found = found || d.find("V > 0") != std::string::npos;
    }
    CHECK(found);
  }

  SUBCASE("bad sweep bounds") {
    auto cfg = parse_config("experiment = \"fig2\"\n");
    cfg.sweep.min = 5.0;
    cfg.sweep.max = 1.0;
    CHECK(!validate(cfg).empty());
    cfg.sweep.max = 20.0;
    cfg.sweep.points = 1;
    CHECK(!validate(cfg).empty());
  }
}

TEST_CASE("custom experiment: 1-point sweep gives a single-row CSV") {
  const auto cfg = parse_config(R"(
experiment = "custom"
[schedule]
total_time = 2.0
theta = 3.14159265358979
tqd = true
[scheme]
kind = "single"
frame = "effective"
[sweep]
variable = "T"
min = 2.0
max = 2.0
points = 1
)");
  REQUIRE(validate(cfg).empty());
  const auto result = run_experiment(cfg);
  REQUIRE(result.files.size() == 1);
  CHECK(count_lines(result.files[0].second) == 2);  // header + one row
  CHECK(result.files[0].second.find("custom,T,2,") != std::string::npos);
}

TEST_CASE("run_experiment rejects invalid configs") {
  auto cfg = parse_config("experiment = \"fig2\"\n");
  cfg.fidelity_grid = 2;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("determinism: repeated runs and worker counts give identical CSV") {
  const std::string text = R"(
experiment = "fig2"
fidelity_grid = 8
[sweep]
min = 0.5
max = 2.0
points = 4
)";
  auto cfg = parse_config(text);
  cfg.workers = 1;
  const auto serial = run_experiment(cfg);
  const auto serial_again = run_experiment(cfg);
  CHECK(serial.files == serial_again.files);

  cfg.workers = 4;
  const auto parallel = run_experiment(cfg);
  CHECK(serial.files == parallel.files);
}

TEST_CASE("sweep_map: order-independent writes, exceptions propagate") {
  std::vector<int> out(64, -1);
  sweep_map(64, [&](int i) { out[i] = 2 * i; }, 4);
  for (int i = 0; i < 64; ++i) CHECK(out[i] == 2 * i);

  CHECK_THROWS_AS(sweep_map(8,
                            [](int i) {
                              if (i == 3) throw std::runtime_error("boom");
                            },
                            4),
                  std::runtime_error);
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 12638187200555641996ull);
  CHECK(fnv1a64("geomgate") == fnv1a64("geomgate"));
  CHECK(fnv1a64("geomgate") != fnv1a64("geomgatf"));
}

TEST_CASE("format_sig prints 12 significant digits") {
  CHECK(format_sig(1.0) == "1");
  CHECK(format_sig(0.123456789012345) == "0.123456789012");
  CHECK(format_sig(2.0 / 3.0) == "0.666666666667");
}
