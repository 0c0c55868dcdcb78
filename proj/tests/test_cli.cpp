#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "sqznb/budget.hpp"
#include "sqznb/squeezing.hpp"

namespace fs = std::filesystem;
using doctest::Approx;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sqznb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sqznb::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const fs::path kSource = SQZNB_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sqznb_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_CASE("propagate") {
  auto r = run({"propagate", "--inject-db", "10.3", "--eta", "0.44", "--phase-mrad", "37"});
  REQUIRE(r.code == 0);
  auto j = r.doc();
  CHECK(j["detected_db"].get<double>() == Approx(2.16).epsilon(0.005));
  CHECK(j["after_loss"]["v_minus"].get<double>() == Approx(0.6011).epsilon(1e-4));
  CHECK(j["efficiency"].get<double>() == 0.44);

  r = run({"propagate", "--inject-db", "0", "--eta", "0.5", "--phase-mrad", "10"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["detected_db"].get<double>() == 0.0);

  r = run({"propagate", "--inject-db", "10.3", "--loss", "mm=0.75", "--loss", "omc=0.82", "--loss",
           "faraday=0.80", "--phase-mrad", "0"});
  REQUIRE(r.code == 0);
  j = r.doc();
  CHECK(j["efficiency"].get<double>() == Approx(0.492).epsilon(1e-12));
  CHECK(j["chain"].size() == 3);
  CHECK(j["chain"][1]["label"] == "omc");

  r = run({"propagate", "--inject-db", "10", "--eta", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["detected_db"].get<double>() == 0.0);
}

TEST_CASE("propagate rejects bad flags with exit code 2") {
  CHECK(run({"propagate", "--inject-db", "-1", "--eta", "0.5"}).code == 2);
  CHECK(run({"propagate", "--inject-db", "10", "--eta", "1.5"}).code == 2);
  CHECK(run({"propagate", "--inject-db", "10"}).code == 2);
  CHECK(run({"propagate", "--inject-db", "10", "--eta", "0.5", "--loss", "a=0.5"}).code == 2);
  CHECK(run({"propagate", "--inject-db", "10", "--loss", "a=zero"}).code == 2);
  CHECK(run({"propagate", "--inject-db", "10", "--eta", "0.5", "--phase-mrad", "900"}).code == 2);
  CHECK(run({"propagate", "--inject-db", "abc", "--eta", "0.5"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  const auto bad = run({"propagate", "--inject-db", "10", "--eta", "1.5"});
  CHECK(bad.out.empty());
  CHECK(!bad.err.empty());
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("fit, uncertainty, optimize") {
  auto r = run({"fit", "--injected", "10.3", "--detected", "2.21", "--phase-mrad", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["efficiency"].get<double>() == Approx(0.44).epsilon(2e-3));

  CHECK(run({"fit", "--injected", "20", "--detected", "12", "--phase-mrad", "35"}).code == 3);
  CHECK(run({"fit", "--injected", "5", "--detected", "6"}).code == 2);

  r = run({"uncertainty"});
  REQUIRE(r.code == 0);
  auto j = r.doc();
  CHECK(j["samples"] == 100000);
  CHECK(j["seed"] == 42);
  CHECK(j["sigma_db"].get<double>() == Approx(0.13).epsilon(0.03 / 0.13));
  CHECK(run({"uncertainty", "--mc-samples", "10"}).code == 2);

  r = run({"optimize", "--eta", "1.0", "--phase-mrad", "35"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["inject_db"].get<double>() == Approx(14.6).epsilon(5e-3));
  CHECK(run({"optimize", "--eta", "1.0", "--phase-mrad", "0"}).code == 3);
}

TEST_CASE("budget on the H1 config agrees with propagate") {
  const auto prefix = scratch("h1").string();
  auto r = run({"budget", (kSource / "configs/h1.json").string(), "--out", prefix, "--svg"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto summary = json::parse(slurp(prefix + "-summary.json"));
  CHECK(summary == r.doc());

  const double detected =
      run({"propagate", "--inject-db", "10.3", "--eta", "0.44", "--phase-mrad", "37"}).doc()["detected_db"].get<double>();
  CHECK(std::abs(summary["improvement"]["max_db"].get<double>() - detected) <= 0.1);
  CHECK(std::abs(summary["improvement"]["median_db"].get<double>() - detected) <= 0.1);
  CHECK(summary["improvement"]["equivalent_power_increase"].get<double>() ==
        Approx(sqznb::equivalent_power_increase(summary["improvement"]["max_db"].get<double>())));
  // Still helping between 150 and 300 Hz.
  CHECK(summary["secondary_improvement"]["median_db"].get<double>() > 1.5);

  for (const char* suffix : {"-total.csv", "-reference-total.csv", "-quantum.csv", "-quantum-unsqueezed.csv", ".svg"}) {
    CHECK_MESSAGE(fs::exists(prefix + suffix), suffix);
  }
  const auto total = sqznb::ingest_asd(prefix + "-total.csv");
  CHECK(total.rows.size() == 1000);
  CHECK(slurp(prefix + ".svg").find("<svg") != std::string::npos);
}

TEST_CASE("budget without squeezing or components is the bare quantum curve") {
  const auto cfg = write_file("bare.json", R"({
    "interferometer": {"arm_length_m": 4000, "mirror_mass_kg": 10.7, "arm_power_w": 40000, "finesse": 204},
    "squeezer": {"angle_policy": "none"},
    "grid": {"f_min_hz": 50, "f_max_hz": 5000, "points": 64}
  })");
  const auto prefix = scratch("bare").string();
  REQUIRE(run({"budget", cfg.string(), "--out", prefix}).code == 0);
  CHECK(slurp(prefix + "-total.csv") == slurp(prefix + "-quantum.csv"));
  CHECK(slurp(prefix + "-total.csv") == slurp(prefix + "-reference-total.csv"));
  const auto summary = json::parse(slurp(prefix + "-summary.json"));
  CHECK(summary["improvement"]["max_db"].get<double>() == 0.0);
  CHECK(summary["improvement"]["equivalent_power_increase"].get<double>() == 0.0);
}

TEST_CASE("project on the aLIGO config") {
  const auto prefix = scratch("aligo").string();
  auto r = run({"project", (kSource / "configs/aligo.json").string(), "--out", prefix});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto j = r.doc();
  CHECK(j["modes"]["fixed"]["quantum_asd_ratio_in_band"]["min"].get<double>() >= 2.0);
  CHECK(j["fd_optimal_below_fixed"] == true);
  CHECK(j["predicted_detected_db"].get<double>() == Approx(6.54).epsilon(0.05 / 6.54));
  for (const char* m : {"none", "fixed", "fd-optimal"}) {
    CHECK(fs::exists(prefix + "-quantum-" + m + ".csv"));
    CHECK(fs::exists(prefix + "-total-" + m + ".csv"));
  }
  CHECK(fs::exists(prefix + ".svg"));

  // Squeezing at a fixed angle costs sensitivity at the low end.
  const auto none = sqznb::ingest_asd(prefix + "-quantum-none.csv");
  const auto fixed = sqznb::ingest_asd(prefix + "-quantum-fixed.csv");
  const auto fd = sqznb::ingest_asd(prefix + "-quantum-fd-optimal.csv");
  CHECK(fixed.rows.front().asd > none.rows.front().asd);
  CHECK(fd.rows.front().asd < none.rows.front().asd);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto cfg = (kSource / "configs/aligo.json").string();
  const auto a = scratch("det_a").string(), b = scratch("det_b").string();
  REQUIRE(run({"project", cfg, "--mode", "none", "--out", a}).code == 0);
  REQUIRE(run({"project", cfg, "--mode", "none", "--out", b}).code == 0);
  for (const char* suffix : {"-quantum-none.csv", "-total-none.csv", ".svg"}) {
    CHECK(slurp(a + suffix) == slurp(b + suffix));
  }
  CHECK(run({"uncertainty", "--seed", "7"}).out == run({"uncertainty", "--seed", "7"}).out);
}

TEST_CASE("config errors exit with 2, numerical failures with 3") {
  const auto prefix = scratch("err").string();
  const auto unknown = write_file("unknown.json", R"({"interferometer": {"arm_length_m": 1, "mirror_mass_kg": 1,
      "arm_power_w": 1, "cavity_pole_hz": 1, "colour": "blue"}})");
  CHECK(run({"budget", unknown.string(), "--out", prefix}).code == 2);

  const auto missing = write_file("missing.json", R"({"interferometer": {"arm_length_m": 4000, "mirror_mass_kg": 40,
      "arm_power_w": 1e5, "cavity_pole_hz": 100}, "components": [{"label": "x", "file": "no_such.csv"}]})");
  const auto r = run({"budget", missing.string(), "--out", prefix});
  CHECK(r.code == 2);
  CHECK(r.err.find("no_such.csv") != std::string::npos);

  CHECK(run({"budget", write_file("broken.json", "{").string(), "--out", prefix}).code == 2);
  CHECK(run({"budget", "/no/such/config.json", "--out", prefix}).code == 2);

  const auto overflow = write_file("overflow.json", R"({"interferometer": {"arm_length_m": 1e-150, "mirror_mass_kg": 1e-300,
      "arm_power_w": 1e300, "cavity_pole_hz": 1e100}, "grid": {"f_min_hz": 10, "f_max_hz": 1000, "points": 10},
      "band_hz": [100, 500], "secondary_band_hz": [100, 200]})");
  const auto num = run({"budget", overflow.string(), "--out", prefix});
  CHECK(num.code == 3);
  CHECK(num.err.find("Hz") != std::string::npos);

  const auto out_of_span = write_file("span.csv", "frequency_hz,asd_strain_per_sqrt_hz\n100,1e-23\n200,1e-23\n");
  const auto span_cfg = write_file("span.json", R"({"interferometer": {"arm_length_m": 4000, "mirror_mass_kg": 40,
      "arm_power_w": 1e5, "cavity_pole_hz": 100}, "components": [{"label": "narrow", "file": "span.csv"}]})");
  (void)out_of_span;
  CHECK(run({"budget", span_cfg.string(), "--out", prefix}).code == 2);
}

TEST_CASE("run config parsing") {
  const auto rc = sqznb::cli::load_run_config(kSource / "configs/h1.json");
  CHECK(rc.interferometer.cavity_pole == Approx(91.757).epsilon(1e-4));
  CHECK(rc.squeezer.chain.total() == 0.44);
  CHECK(rc.band == std::pair{400.0, 3000.0});
  const auto al = sqznb::cli::load_run_config(kSource / "configs/aligo.json");
  REQUIRE(al.components.size() == 1);
  CHECK(fs::exists(al.components[0].file));
  CHECK_THROWS_AS(sqznb::cli::parse_run_config(R"({"interferometer": {"arm_length_m": 1, "mirror_mass_kg": 1,
      "arm_power_w": 1, "cavity_pole_hz": 1, "finesse": 3}})", "."), sqznb::cli::ConfigError);
  CHECK(sqznb::cli::is_valid_label("coating_thermal-1"));
  CHECK(!sqznb::cli::is_valid_label("../evil"));
}
