#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qrel/io.hpp"
#include "qrel/report.hpp"

using namespace qrel;
namespace fs = std::filesystem;

namespace {

std::vector<SequentialProbabilities> replica(int i) {
  return load_probabilities(fs::path(QREL_SOURCE_DIR) / "data/replica" / ("query" + std::to_string(i) + ".json"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("fixed-point formatting") {
  CHECK(fixed(0.12345) == "0.1235");
  CHECK(fixed(-0.00001) == "0.0000");
  CHECK(fixed(-0.0939) == "-0.0939");
  CHECK(fixed(80.6276, 2) == "80.63");
  CHECK(parse_format("md") == Format::Markdown);
  CHECK(parse_format("json") == Format::Json);
  CHECK_FALSE(parse_format("xml").has_value());
}

TEST_CASE("report contents for the replicas") {
  const auto r1 = render_report(replica(1), Format::Markdown);
  CHECK(contains(r1, "0.5939"));
  CHECK(contains(r1, "-0.0939"));
  const auto r2 = render_report(replica(2), Format::Markdown);
  CHECK(contains(r2, "| q2 | 0.5207 | 0.4857 |"));
  const auto r3 = render_report(replica(3), Format::Markdown);
  CHECK(contains(r3, "| P(R+\\|U-,T+) | 0.0000 |"));
}

TEST_CASE("reports match the golden files byte for byte") {
  for (int i = 1; i <= 3; ++i) {
    const auto golden = fs::path(QREL_SOURCE_DIR) / "tests/data/golden" / ("report_q" + std::to_string(i) + ".md");
    REQUIRE(fs::exists(golden));
    CHECK_MESSAGE(render_report(replica(i), Format::Markdown) == slurp(golden), golden.string());
  }
}

TEST_CASE("json report is well formed") {
  const auto js = nlohmann::json::parse(render_report(replica(1), Format::Json));
  REQUIRE(js.contains("queries"));
  const auto& q = js["queries"][0];
  CHECK(q["query_id"] == "q1");
  CHECK(q["wigner"]["w"][1][0].get<double>() == doctest::Approx(-0.094).epsilon(1e-2));
}

TEST_CASE("other renderers") {
  const auto w = render_wigner({{"t2=1", 1.0}}, Format::Markdown);
  CHECK(contains(w, "0.5000"));
  const QueryModel m("q1", RelevanceParams(0.873, 0.7602, 0.739, to_radians(80.62)));
  const auto ops = render_operators(m, Format::Markdown);
  CHECK(contains(ops, "0.1558"));
  // off-diagonal of U is 2u sqrt(1-u^2)
  CHECK(contains(ops, fixed(2 * 0.7602 * std::sqrt(1 - 0.7602 * 0.7602))));
  CHECK(contains(ops, "80.62"));
  CHECK(nlohmann::json::parse(render_operators(m, Format::Json)).is_object());
  const auto csv = render_sweep_csv(sweep_theta(m.params(), 3));
  CHECK(csv.rfind("theta_deg,interference,p_direct,p_ltp_sum\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
