#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "etpa/dataset_io.hpp"
#include "etpa/reference.hpp"
#include "etpa/sim_source.hpp"

using namespace etpa;

namespace {

const std::string kHeader{dataset_csv_header};

std::string small_csv() {
  return kHeader +
         "\n"
         "toluene,0,10,0,1,100,110,5\n"
         "toluene,0,10,1,1,98,104,7\n"
         "toluene,0,12.5,0,1,130,128,9\n"
         "zntpp_63uM,6.3e-05,10,0,1,90,88,4\n";
}

// what the parser objected to, for message assertions
template <class F>
std::string error_text(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse a well-formed dataset") {
  const Dataset ds = parse_dataset_csv(small_csv());
  REQUIRE(ds.samples.size() == 2);
  CHECK(ds.samples[0].sample.label == "toluene");
  CHECK(ds.samples[0].sample.is_solvent());
  REQUIRE(ds.samples[0].series.size() == 2);
  CHECK(ds.samples[0].series[0].bins.size() == 2);
  CHECK(ds.samples[0].series[1].bins.size() == 1);
  CHECK(to_milliwatts(ds.samples[0].series[1].pump_power) == 12.5);
  CHECK(ds.samples[1].sample.concentration.value() == 6.3e-05);
  CHECK(ds.samples[1].series[0].bins[0].coincidences == 4);
  CHECK(ds.solvent_index() == 0);
}

TEST_CASE("serialization is the parser's inverse, byte for byte") {
  const std::string text = small_csv();
  const Dataset ds = parse_dataset_csv(text);
  CHECK(dataset_to_csv(ds) == text);
}

TEST_CASE("simulated datasets round-trip byte-identically") {
  SourceConfig cfg;
  cfg.pump_powers = {milliwatts(5.0), milliwatts(12.5), milliwatts(20.0)};
  cfg.bins_per_point = 8;
  SampleSpec dye;
  dye.label = "zntpp_63uM";
  dye.concentration = micromolar(63.0);
  dye.sigma_e = cm2_per_molecule(5.1e-18);
  const Dataset ds = run_experiment(
      cfg, {SampleSpec::solvent("toluene"), dye}, reference::geometry());

  const std::string once = dataset_to_csv(ds);
  const std::string twice = dataset_to_csv(parse_dataset_csv(once));
  CHECK(once == twice);
  CHECK(once.find("\r") == std::string::npos);
  CHECK(once.rfind(kHeader, 0) == 0);
}

TEST_CASE("save and load through the filesystem") {
  const auto dir = std::filesystem::temp_directory_path() / "etpa_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "ds.csv").string();

  const Dataset ds = parse_dataset_csv(small_csv());
  save_dataset(ds, path);
  const Dataset back = load_dataset(path);
  CHECK(dataset_to_csv(back) == small_csv());

  // written file ends with exactly one LF
  std::ifstream in(path, std::ios::binary);
  std::string raw((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  CHECK(raw == small_csv());

  CHECK_THROWS_AS(load_dataset((dir / "missing.csv").string()), IoError);
  CHECK_THROWS_AS(save_dataset(ds, (dir / "no_dir" / "x.csv").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("header must match exactly") {
  CHECK_THROWS_AS(parse_dataset_csv(""), DataError);
  const std::string wrong = "label,conc\ntoluene,0\n";
  CHECK(error_text([&] { parse_dataset_csv(wrong); }).find("line 1") !=
        std::string::npos);
  // header alone carries no measurements
  CHECK_THROWS_AS(parse_dataset_csv(kHeader + "\n"), DataError);
}

TEST_CASE("malformed rows are reported with their line number") {
  const std::string base = kHeader + "\ntoluene,0,10,0,1,100,110,5\n";

  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,10,1,1,100,110\n");
        }).find("line 3: expected 8 fields") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(base + "\ntoluene,0,10,1,1,1,1,1\n");
        }).find("line 3: blank line") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(kHeader + "\r\ntoluene,0,10,0,1,100,110,5\n");
        }).find("LF") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,10,1,1,1e2,110,5\n");
        }).find("singles1") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,10,1,1,-3,110,5\n");
        }).find("singles1") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,abc,1,1,100,110,5\n");
        }).find("pump_power_mW") != std::string::npos);
}

TEST_CASE("structural rules") {
  const std::string base = kHeader + "\ntoluene,0,10,0,1,100,110,5\n";

  // bin indexes must be 0,1,2,... within a series
  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,10,2,1,100,110,5\n");
        }).find("expected bin index 1") != std::string::npos);

  // a pump power may not reappear later for the same sample
  CHECK(error_text([&] {
          parse_dataset_csv(base +
                            "toluene,0,12,0,1,100,110,5\n"
                            "toluene,0,10,0,1,100,110,5\n");
        }).find("duplicate pump power") != std::string::npos);

  // rows of one sample must be contiguous
  CHECK(error_text([&] {
          parse_dataset_csv(base +
                            "zntpp_63uM,6.3e-05,10,0,1,90,88,4\n"
                            "toluene,0,12,0,1,100,110,5\n");
        }).find("not contiguous") != std::string::npos);

  // concentration is a property of the sample, not of the row
  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,1e-6,12,0,1,100,110,5\n");
        }).find("concentration changed") != std::string::npos);

  // bin duration is a property of the series
  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,10,1,2,100,110,5\n");
        }).find("duration changed") != std::string::npos);

  // counters cannot see more coincidences than either singles channel
  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,12,0,1,100,110,105\n");
        }).find("coincidences exceed") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(base + "toluene,0,10,1,0,100,110,5\n");
        }).find("duration") != std::string::npos);

  CHECK(error_text([&] {
          parse_dataset_csv(base + "bad label,0,12,0,1,100,110,5\n");
        }).find("line 3") != std::string::npos);
}
