#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "twm/config.hpp"
#include "twm/error.hpp"
#include "twm/outputs.hpp"

using namespace twm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimalConfig = R"({
  // top-of-file comment
  "process": "pdc",
  "seed": 42, /* inline block comment */
  "pump": { "photon_number": 1.0e6 }
})";

}  // namespace

TEST_CASE("parse_config strips comments and hashes the canonical document") {
  ScenarioConfig cfg = parse_config(kMinimalConfig, "/tmp");
  CHECK(cfg.doc.at("process") == "pdc");
  CHECK(cfg.master_seed() == 42);
  CHECK(cfg.base_dir == "/tmp");
  CHECK(cfg.hash.size() == 16);

  // The hash depends on content, not on comments or whitespace.
  ScenarioConfig dense = parse_config(R"({"process":"pdc","seed":42,"pump":{"photon_number":1.0e6}})");
  CHECK(dense.hash == cfg.hash);
  ScenarioConfig other = parse_config(R"({"process":"qfc","seed":42,"pump":{"photon_number":1.0e6}})");
  CHECK(other.hash != cfg.hash);
}

TEST_CASE("parse_config rejects malformed documents with a structured error") {
  CHECK_THROWS_WITH_AS(parse_config("{ not json"), doctest::Contains("malformed JSON"), SimError);
  CHECK_THROWS_WITH_AS(parse_config("[1, 2, 3]"), doctest::Contains("top level"), SimError);
}

TEST_CASE("master_seed requires an unsigned integer seed") {
  CHECK_THROWS_AS(parse_config(R"({"process":"pdc"})").master_seed(), SimError);
  CHECK_THROWS_AS(parse_config(R"({"process":"pdc","seed":-3})").master_seed(), SimError);
  CHECK_THROWS_AS(parse_config(R"({"process":"pdc","seed":"abc"})").master_seed(), SimError);
  CHECK(parse_config(R"({"process":"pdc","seed":0})").master_seed() == 0);
}

TEST_CASE("set/get_config_value follow dotted paths and refresh the hash") {
  ScenarioConfig cfg = parse_config(kMinimalConfig);
  CHECK(get_config_value(cfg, "pump.photon_number") == doctest::Approx(1.0e6));

  std::string before = cfg.hash;
  set_config_value(cfg, "pump.photon_number", 2.5e6);
  CHECK(get_config_value(cfg, "pump.photon_number") == doctest::Approx(2.5e6));
  CHECK(cfg.hash != before);

  // Unknown paths must not silently create knobs.
  CHECK_THROWS_WITH_AS(set_config_value(cfg, "pump.typo_key", 1.0),
                       doctest::Contains("unknown parameter path"), SimError);
  CHECK_THROWS_AS(get_config_value(cfg, "nope.nothing"), SimError);
  CHECK_THROWS_AS(get_config_value(cfg, "process"), SimError);  // not numeric
}

TEST_CASE("build_scenario instantiates the shipped squeezer template") {
  ScenarioConfig cfg = load_config(std::string(TWM_SOURCE_DIR) + "/templates/smpsg.json");
  BuiltScenario built = build_scenario(cfg, cfg.master_seed());

  const Scenario& s = built.scenario;
  CHECK(s.kind == ProcessKind::PDC);
  CHECK(s.length == doctest::Approx(2.0e-3).epsilon(1e-12));
  CHECK(s.signal_grid.count == 24);
  CHECK(s.idler_grid.count == 24);
  // Degenerate bands: the pump rides at the sum frequency.
  CHECK(s.pump.omega_p() == doctest::Approx(2.4306e15).epsilon(1e-9));
  // The shipped dispersion tables are built for a 1e5 rad/m baseline mismatch.
  CHECK(s.baseline_mismatch == doctest::Approx(1.0e5).epsilon(1e-3));
  // "auto" period compensates the baseline mismatch.
  CHECK_FALSE(built.ideal_poling.domains.empty());
  double first_width = built.ideal_poling.domains.front().z_right -
                       built.ideal_poling.domains.front().z_left;
  CHECK(first_width == doctest::Approx(M_PI / 1.0e5).epsilon(1e-2));
  CHECK(built.loss_db_cm == doctest::Approx(0.5));
  CHECK(s.loss.alpha_uniform == doctest::Approx(db_per_cm_to_linear(0.5)).epsilon(1e-12));
  CHECK(db_per_cm_to_linear(0.5) == doctest::Approx(11.5129254649702).epsilon(1e-10));
  CHECK(built.seed == 20240501);
}

TEST_CASE("build_scenario reports missing dispersion files with the path") {
  ScenarioConfig cfg = load_config(std::string(TWM_SOURCE_DIR) + "/templates/smpsg.json");
  cfg.doc["dispersion"]["signal_csv"] = "data/absent.csv";
  CHECK_THROWS_WITH_AS(build_scenario(cfg, 1), doctest::Contains("absent.csv"), SimError);
}

TEST_CASE("matrix CSV round trip is bit exact") {
  Eigen::MatrixXd m(3, 4);
  m << 1.0, -2.5e-17, M_PI, 0.0,
       1.0 / 3.0, 6.02214076e23, -0.0, 5e-324,
       std::nextafter(1.0, 2.0), 1e308, -1e-308, 42.0;
  const std::string path = "/tmp/twm_outputs_matrix.csv";
  write_matrix_csv(path, m);
  Eigen::MatrixXd back = read_matrix_csv(path);
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));
  std::remove(path.c_str());

  const std::string ragged = "/tmp/twm_outputs_ragged.csv";
  {
    std::ofstream out(ragged);
    out << "1,2,3\n4,5\n";
  }
  CHECK_THROWS_WITH_AS(read_matrix_csv(ragged), doctest::Contains("ragged"), SimError);
  std::remove(ragged.c_str());
  CHECK_THROWS_AS(read_matrix_csv("/tmp/twm_outputs_missing.csv"), SimError);
}

TEST_CASE("propagator JSON round trip preserves every entry") {
  Propagator p;
  p.kind = ProcessKind::QFC;
  p.n = 3;
  p.eta_tot = 0.875;
  p.frequency_dependent_loss = false;
  p.k = Eigen::MatrixXcd::Random(6, 6);
  const std::string path = "/tmp/twm_outputs_prop.json";
  write_propagator_json(path, p, "deadbeef01234567");
  Propagator back = read_propagator_json(path);
  CHECK(back.kind == ProcessKind::QFC);
  CHECK(back.n == 3);
  CHECK(back.eta_tot == p.eta_tot);
  CHECK(back.frequency_dependent_loss == false);
  REQUIRE(back.k.rows() == 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(back.k(i, j) == p.k(i, j));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_propagator_json("/tmp/twm_outputs_noprop.json"), SimError);
}

TEST_CASE("fom.json carries flagged values and the config hash") {
  FiguresOfMerit fom;
  fom.r1 = 0.7;
  fom.n_signal = 0.55;
  fom.n_idler = 0.55;
  fom.schmidt_number = {1.25, true};
  fom.purity = {std::numeric_limits<double>::quiet_NaN(), false};
  fom.separability = {std::numeric_limits<double>::quiet_NaN(), false};
  const std::string path = "/tmp/twm_outputs_fom.json";
  write_fom_json(path, fom, "0123456789abcdef", {{"edge_energy", 0.01}});

  nlohmann::json doc = nlohmann::json::parse(slurp(path));
  CHECK(doc.at("config_hash") == "0123456789abcdef");
  CHECK(doc.at("r1").get<double>() == doctest::Approx(0.7));
  CHECK(doc.at("n_signal").get<double>() == doctest::Approx(0.55));
  CHECK(doc.at("schmidt_number").at("defined") == true);
  CHECK(doc.at("schmidt_number").at("value").get<double>() == doctest::Approx(1.25));
  // Undefined flagged values serialize the flag only, never a NaN literal.
  CHECK(doc.at("purity").at("defined") == false);
  CHECK_FALSE(doc.at("purity").contains("value"));
  CHECK(doc.at("edge_energy").get<double>() == doctest::Approx(0.01));
  std::remove(path.c_str());
}

TEST_CASE("sweep CSV layout: hash header, column row, data rows") {
  std::vector<SweepRow> rows;
  rows.push_back({0.5, 111, false, "", {1.0, 2.0}});
  rows.push_back({0.5, 222, false, "", {3.0, 4.0}});
  rows.push_back({0.5, 0, true, "mean", {2.0, 3.0}});
  const std::string path = "/tmp/twm_outputs_sweep.csv";
  write_sweep_csv(path, {"n_signal", "r1"}, "errors.loss_db_cm", rows, "feedc0defeedc0de");

  std::istringstream in(slurp(path));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# config_hash=feedc0defeedc0de");
  REQUIRE(std::getline(in, line));
  CHECK(line == "errors.loss_db_cm,seed,aggregate,n_signal,r1");
  int data = 0, aggregates = 0;
  while (std::getline(in, line)) {
    ++data;
    if (line.find("mean") != std::string::npos) ++aggregates;
  }
  CHECK(data == 3);
  CHECK(aggregates == 1);
  std::remove(path.c_str());
}

TEST_CASE("grayscale PNG export carries the signature and payload") {
  Eigen::MatrixXd img(16, 24);
  for (int i = 0; i < img.rows(); ++i)
    for (int j = 0; j < img.cols(); ++j) img(i, j) = std::sin(0.3 * i) * std::cos(0.2 * j);
  const std::string path = "/tmp/twm_outputs_img.png";
  write_png_gray(path, img);
  std::string bytes = slurp(path);
  REQUIRE(bytes.size() > 8);
  const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  for (int i = 0; i < 8; ++i) CHECK(static_cast<unsigned char>(bytes[i]) == sig[i]);
  CHECK(bytes.find("IHDR") != std::string::npos);
  CHECK(bytes.find("IEND") != std::string::npos);
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_png_gray("/tmp/twm_outputs_bad.png", Eigen::MatrixXd()), SimError);
}
