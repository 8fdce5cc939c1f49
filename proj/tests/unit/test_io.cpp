#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "check.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"
#include "qrel/io.hpp"

using namespace qrel;
namespace fs = std::filesystem;

namespace {

const std::string kHeader = "respondent_id,query_id,sequence,answer1,answer2,answer3\n";

ResponseDataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_responses(in);
}

std::string dump(const ResponseDataset& d) {
  std::ostringstream out;
  write_responses(out, d);
  return out.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qrel_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<SequentialProbabilities> probs(const std::string& text) {
  std::istringstream in(text);
  return read_probabilities(in);
}

}  // namespace

TEST_CASE("response CSV examples") {
  CHECK(parse(kHeader).empty());
  const auto d = parse(kHeader + "p1,q1,TUR,yes,yes,no\n");
  REQUIRE(d.size() == 1);
  const auto& r = d.records()[0];
  CHECK(r.respondent_id == "p1");
  CHECK(r.query_id == "q1");
  CHECK(r.sequence == SequenceOrder::TUR);
  CHECK(r.answers[0] == true);
  CHECK(r.answers[1] == true);
  CHECK(r.answers[2] == false);
  CHECK(thrown_code([] { parse(kHeader + "p1,q1,URT,yes,yes,no\n"); }) == ErrorCode::UnknownSequenceTag);
}

TEST_CASE("response CSV leniency and errors") {
  const auto d = parse("Respondent_ID,query_id,sequence,answer1,answer2,answer3\r\n\r\np1,q1,tru,YES,No,yes\r\np2,q1,TUR,no,,\n");
  REQUIRE(d.size() == 2);
  CHECK(d.records()[0].sequence == SequenceOrder::TRU);
  CHECK_FALSE(d.records()[1].answers[1].has_value());

  try {
    parse(kHeader + "p1,q1,TUR,yes,yes,no\np2,q1,TUR,maybe,yes,no\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(thrown_code([] { parse(kHeader + "p1,q1,TUR,yes,yes,no\np1,q1,TRU,yes,yes,no\n"); }) ==
        ErrorCode::DuplicateRespondent);
  CHECK(thrown_code([] { parse(kHeader + "p1,q1,TUR,yes,yes\n"); }) == ErrorCode::Parse);
  CHECK(thrown_code([] { parse("id,q,s,a,b,c\n"); }) == ErrorCode::Parse);
  CHECK(thrown_code([] { parse(kHeader + "p1,q1,TUR,yes,,no\n"); }) == ErrorCode::Parse);
  CHECK(thrown_code([] { load_responses("/nonexistent/file.csv"); }) == ErrorCode::Io);
}

TEST_CASE("property: CSV round trip is lossless") {
  oracle::Gen g(12);
  for (int trial = 0; trial < 300; ++trial) {
    ResponseDataset d;
    const int n = g.integer(0, 40);
    for (int i = 0; i < n; ++i) {
      ResponseRecord r;
      r.respondent_id = "id" + std::to_string(i);
      r.query_id = "q" + std::to_string(g.integer(1, 3));
      r.sequence = g.coin() ? SequenceOrder::TUR : SequenceOrder::TRU;
      r.answers[0] = g.coin();
      if (*r.answers[0] || g.coin()) {
        r.answers[1] = g.coin();
        r.answers[2] = g.coin();
      }
      d.add(r);
    }
    const std::string once = dump(d);
    const auto back = parse(once);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      REQUIRE(back.records()[i].respondent_id == d.records()[i].respondent_id);
      REQUIRE(back.records()[i].answers == d.records()[i].answers);
      REQUIRE(back.records()[i].sequence == d.records()[i].sequence);
    }
    REQUIRE(dump(back) == once);
  }
}

TEST_CASE("response files") {
  const auto path = scratch("r.csv");
  ResponseDataset d;
  d.add(ResponseRecord{"a", "q", SequenceOrder::TUR, {true, false, true}});
  save_responses(path, d);
  CHECK(dump(load_responses(path)) == dump(d));
}

TEST_CASE("model documents") {
  const QueryModel m("q1", RelevanceParams(0.8, 0.7, 0.6, to_radians(80.62)), "fit");
  const std::string js = model_to_json(m);
  std::istringstream in(js);
  const auto back = read_model(in);
  CHECK(back.query_id() == "q1");
  CHECK(back.provenance() == "fit");
  CHECK(back.params().t() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(to_degrees(back.params().theta_r()) == doctest::Approx(80.62).epsilon(1e-12));
  const auto path = scratch("m.json");
  save_model(path, m);
  CHECK(load_model(path).params().r() == doctest::Approx(0.6));

  auto failure = [](const std::string& text) -> std::pair<std::optional<ErrorCode>, std::string> {
    std::istringstream s(text);
    try {
      read_model(s);
    } catch (const Error& e) {
      return {e.code(), e.what()};
    }
    return {std::nullopt, ""};
  };
  auto missing_u = failure(R"({"query_id":"q","t":0.5,"r":0.5,"theta_r_deg":10})");
  CHECK(missing_u.first == ErrorCode::Schema);
  CHECK(missing_u.second.find("'u'") != std::string::npos);
  auto bad_t = failure(R"({"query_id":"q","t":"x","u":0.5,"r":0.5,"theta_r_deg":10})");
  CHECK(bad_t.first == ErrorCode::Schema);
  CHECK(bad_t.second.find("'t'") != std::string::npos);
  CHECK(failure("not json").first == ErrorCode::Parse);
  CHECK(failure(R"({"query_id":"q","t":2,"u":0.5,"r":0.5,"theta_r_deg":10})").first.has_value());
}

TEST_CASE("probability documents: conditionals") {
  const auto v = probs(R"({"query_id":"q1","p_t_pos":0.7622,"p_u_pos_given_t_pos":0.5779,
                           "p_r_pos_given_t_pos":0.5462,"p_r_pos_given_u_pos_t_pos":0.5872})");
  REQUIRE(v.size() == 1);
  CHECK(v[0].p_u_pos_given_t_pos->p == 0.5779);
  CHECK_FALSE(v[0].p_u_pos_given_t_pos->counts.has_value());
  const auto list = probs(R"([{"query_id":"a","p_t_pos":0.5},{"query_id":"b","p_t_pos":{"k":3,"n":4}}])");
  REQUIRE(list.size() == 2);
  CHECK(list[1].p_t_pos->p == 0.75);
  CHECK(list[1].p_t_pos->counts->n == 4);
  const auto wrapped = probs(R"({"queries":[{"query_id":"a"}]})");
  CHECK(wrapped.size() == 1);
  CHECK(thrown_code([] { probs(R"({"query_id":"a","p_bogus":0.1})"); }) == ErrorCode::Schema);
  CHECK(thrown_code([] { probs(R"({"query_id":"a","p_t_pos":1.5})"); }) == ErrorCode::Schema);
  CHECK(thrown_code([] { probs(R"({"p_t_pos":0.5})"); }) == ErrorCode::Schema);
  CHECK(thrown_code([] { probs(R"({"query_id":"a","p_t_pos":{"k":5,"n":4}})"); }) == ErrorCode::Schema);
}

TEST_CASE("probability documents: replica joints become within-group conditionals") {
  for (int i = 0; i < 3; ++i) {
    const auto& q = reference::kQueries[i];
    const auto v = load_probabilities(fs::path(QREL_SOURCE_DIR) / "data/replica" / ("query" + std::to_string(i + 1) + ".json"));
    REQUIRE(v.size() == 1);
    const auto& s = v[0];
    CHECK(s.query_id == q.id);
    CHECK(std::abs(s.p_u_pos_given_t_pos->p - q.u_given_t) < 1e-3);
    CHECK(std::abs(s.p_r_pos_given_u_pos_t_pos->p - q.r_given_ut) < 1e-3);
    CHECK(std::abs(s.p_r_pos_given_u_neg_t_pos->p - q.r_given_unt) < 1e-3);
    CHECK(std::abs(s.p_r_pos_given_t_pos->p - q.r_given_t) < 1e-3);
    CHECK(std::abs(s.p_u_pos_given_r_pos_t_pos->p - q.u_given_rt) < 1e-3);
    CHECK(std::abs(s.p_u_pos_given_r_neg_t_pos->p - q.u_given_rnt) < 1e-3);
    // joints round-trip through the conditionals
    CHECK(*s.joint_u_pos_t_pos() == doctest::Approx(q.p_ut).epsilon(1e-12));
    CHECK(*s.joint_r_pos_t_pos() == doctest::Approx(q.p_rt).epsilon(1e-12));
    CHECK(*s.joint_r_pos_u_neg_t_pos() == doctest::Approx(q.p_rnut).epsilon(1e-12));
    CHECK(*s.joint_u_pos_r_neg_t_pos() == doctest::Approx(q.p_unrt).epsilon(1e-12));
  }
}

TEST_CASE("probability source detection") {
  const auto csv = scratch("d.csv");
  write_text(csv, kHeader + "a,q,TUR,yes,yes,yes\nb,q,TRU,yes,no,no\nc,z,TUR,no,,\nd,z,TRU,no,,\n");
  const auto from_csv = load_probability_source(csv);
  REQUIRE(from_csv.size() == 2);
  CHECK(from_csv[0].query_id == "q");
  CHECK(from_csv[0].p_r_pos_given_t_pos->p == 0.0);
  CHECK(from_csv[1].p_t_pos->p == 0.0);
  const auto js = scratch("d.json");
  write_text(js, "\n  [{\"query_id\":\"x\",\"p_t_pos\":0.3}]");
  CHECK(load_probability_source(js).at(0).query_id == "x");
  CHECK(thrown_code([] { load_probability_source("/nonexistent/x.json"); }) == ErrorCode::Io);
  CHECK(thrown_code([] { write_text("/nonexistent/dir/x.txt", "a"); }) == ErrorCode::Io);
}
