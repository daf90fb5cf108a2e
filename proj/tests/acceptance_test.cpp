#include <catch2/catch_amalgamated.hpp>

#include <iostream>

#include "vnfab/acceptance.hpp"

// Release gate: run every acceptance criterion at its pinned tolerance and
// print one pass/fail line per criterion.

TEST_CASE("acceptance criteria") {
  vnfab::Config cfg;
  vnfab::accept::Options opt;
  opt.programs_dir = std::string(VNFAB_SOURCE_DIR) + "/programs";
  auto results = vnfab::accept::run_all(cfg, opt);
  std::cout << vnfab::accept::render(results);
  REQUIRE(results.size() == 12);
  for (const auto& r : results) {
    INFO("criterion " << r.id << " (" << r.name << "): measured " << r.measured << ", target "
                      << r.target);
    CHECK(r.pass);
  }
}
