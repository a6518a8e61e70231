#include "doctest.h"
#include "resperf/device_profile.hpp"

using namespace resperf;

TEST_CASE("presets carry the published peak figures") {
  CHECK(find_preset("gtx1080ti")->peak_tflops == 11.34);
  CHECK(find_preset("gtx1080ti")->mem_bandwidth == 484.4);
  CHECK(find_preset("p1000")->peak_tflops == 1.894);
  CHECK(find_preset("p2000")->peak_tflops == 3.031);
  CHECK(find_preset("p5000")->peak_tflops == 8.873);
  for (const auto& p : device_presets()) {
    CHECK(p.problems().empty());
    CHECK(p.efficiency == 0.3);
    CHECK(p.noise_sigma == 0.05);
  }
}

TEST_CASE("profile text round trip and base presets") {
  const auto p = *find_preset("p5000");
  CHECK(parse_device_profile(format_device_profile(p)) == p);

  const auto q = parse_device_profile("# quiet device\nbase = p1000\nname = quiet\nnoise_sigma = 0\n");
  CHECK(q.name == "quiet");
  CHECK(q.noise_sigma == 0.0);
  CHECK(q.peak_tflops == 1.894);
}

TEST_CASE("invalid profiles are rejected") {
  CHECK_THROWS(parse_device_profile("base = p1000\nefficiency = 1.5\n"));
  CHECK_THROWS(parse_device_profile("base = nope\n"));
  CHECK_THROWS(parse_device_profile("base = p1000\nspeed = 3\n"));
  CHECK_THROWS(parse_device_profile("base = p1000\npeak_tflops\n"));
  CHECK_THROWS(resolve_device_profile("missing-device", std::nullopt));
}

TEST_CASE("profiles resolve from a directory") {
  const auto p = resolve_device_profile("p1000-exact", std::filesystem::path(RESPERF_FIXTURE_DIR) / "profiles");
  CHECK(p.name == "p1000-exact");
  CHECK(p.noise_sigma == 0.0);
}
