#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "check.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"
#include "qrel/simulator.hpp"

using namespace qrel;

namespace {

QueryModel query_model(int i) {
  const auto& q = reference::kQueries[i];
  return QueryModel(q.id, RelevanceParams(std::sqrt(q.t2), std::sqrt(q.u2), std::sqrt(q.r2), to_radians(q.theta_deg)));
}

bool same(const ResponseDataset& a, const ResponseDataset& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.records()[i];
    const auto& y = b.records()[i];
    if (x.respondent_id != y.respondent_id || x.query_id != y.query_id || x.sequence != y.sequence ||
        x.answers != y.answers)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rng stream follows the pinned derivation") {
  CHECK(kRngVersion == "mt19937_64+seed_seq/v1");
  const std::uint64_t seed = 0x0123456789abcdefULL, stream = 42;
  std::seed_seq seq{0x89abcdefu, 0x01234567u, 42u, 0u};
  std::mt19937_64 ref(seq);
  RngStream rng(seed, stream);
  for (int i = 0; i < 1000; ++i) {
    const double expected = static_cast<double>(ref() >> 11) / 9007199254740992.0;
    REQUIRE(rng.uniform() == expected);
  }
  RngStream a(1, 0), b(1, 1), c(1, 0);
  const double a0 = a.uniform();
  CHECK(a0 != b.uniform());
  CHECK(a0 == c.uniform());
  RngStream d(7, 3);
  for (int i = 0; i < 100000; ++i) {
    const double u = d.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("spin presets") {
  const SpinAxis axes[3] = {SpinAxis::Z, SpinAxis::X, SpinAxis::Y};
  for (auto a : axes) {
    const auto b = spin_basis(a);
    CHECK(std::abs(inner(b.plus(), b.minus())) < 1e-12);
    for (auto c : axes) {
      if (a == c) continue;
      const auto d = spin_basis(c);
      CHECK(prob_projection(b.plus(), d.plus()) == doctest::Approx(0.5));
      CHECK(prob_projection(b.minus(), d.minus()) == doctest::Approx(0.5));
    }
  }
  const double h = std::sqrt(0.5);
  CHECK(same_ray(spin_basis(SpinAxis::Y).plus(), Ket2(h, Complex(0, h))));
}

TEST_CASE("cascade spec validation") {
  CHECK(thrown_code([] { CascadeSpec({}, 10); }) == ErrorCode::Domain);
  CHECK(thrown_code([] { CascadeSpec({{Basis2::standard(), std::nullopt, "Z"}}, 0); }) == ErrorCode::Domain);
}

TEST_CASE("Stern-Gerlach setups") {
  const Ket2 up = spin_basis(SpinAxis::Z).plus();
  const Ket2 xp = spin_basis(SpinAxis::X).plus();
  const std::uint64_t shots = 10000;
  RngStream rng(2024, 0);

  // (a) from S_z+: all particles pass and stay +
  auto a = run_cascade(up, stern_gerlach_setup(SternGerlachSetup::A, shots), rng);
  CHECK(a[0].passed == shots);
  CHECK(a[1].positive == shots);
  CHECK(a[1].negative == 0);

  // (b) X after Z: 50/50 within 3 sigma
  auto b = run_cascade(up, stern_gerlach_setup(SternGerlachSetup::B, shots), rng);
  const double n_b = static_cast<double>(b[1].positive + b[1].negative);
  CHECK(std::abs(b[1].positive / n_b - 0.5) < 3 * oracle::se(0.5, n_b));

  // (c) Z, X, Z: both beams present again
  auto c = run_cascade(up, stern_gerlach_setup(SternGerlachSetup::C, shots), rng);
  const double n_c = static_cast<double>(c[2].positive + c[2].negative);
  CHECK(c[2].positive > 0);
  CHECK(c[2].negative > 0);
  CHECK(std::abs(c[2].positive / n_c - 0.5) < 3 * oracle::se(0.5, n_c));

  // (a) from S_x+: half are blocked first
  auto ax = run_cascade(xp, stern_gerlach_setup(SternGerlachSetup::A, shots), rng);
  CHECK(std::abs(ax[0].passed / double(shots) - 0.5) < 3 * oracle::se(0.5, shots));
  CHECK(ax[1].negative == 0);
}

TEST_CASE("cascade without blocking conserves counts") {
  oracle::Gen g(4);
  for (int i = 0; i < 50; ++i) {
    const auto v = g.ket();
    const Ket2 s(v.a, v.b);
    const auto basis = spin_basis(static_cast<SpinAxis>(i % 3));
    CascadeSpec spec({{basis, std::nullopt, "A"}, {basis, std::nullopt, "A"}, {basis, std::nullopt, "A"}}, 1000);
    RngStream rng(i, 0);
    const auto c = run_cascade(s, spec, rng);
    for (const auto& st : c) {
      REQUIRE(st.positive + st.negative == 1000);
      REQUIRE(st.passed == 1000);
    }
    // repeated measurement in the same basis never changes the outcome
    REQUIRE(c[0].positive == c[2].positive);
  }
}

TEST_CASE("deterministic respondents") {
  RngStream rng(1, 0);
  const QueryModel sure("s", RelevanceParams(1.0, 1.0, 1.0, 0.0));
  for (int i = 0; i < 1000; ++i) {
    const auto r = simulate_respondent(sure, i % 2 ? SequenceOrder::TUR : SequenceOrder::TRU, rng);
    REQUIRE(r.answers[0] == true);
    REQUIRE(r.answers[1] == true);
    REQUIRE(r.answers[2] == true);
  }
  const QueryModel never("n", RelevanceParams(0.0, 0.5, 0.5, 1.0));
  for (int i = 0; i < 1000; ++i) REQUIRE(simulate_respondent(never, SequenceOrder::TUR, rng).answers[0] == false);
}

TEST_CASE("query-1 TUR respondents match the predicted joint") {
  const auto m = query_model(0);
  const int n = 200000;
  RngStream rng(99, 0);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const auto r = simulate_respondent(m, SequenceOrder::TUR, rng);
    if (*r.answers[0] && *r.answers[1] && *r.answers[2]) ++hits;
  }
  using J = Judgment;
  const std::vector<J> path{{Dimension::Topicality, Outcome::Positive},
                            {Dimension::Understandability, Outcome::Positive},
                            {Dimension::Reliability, Outcome::Positive}};
  const double p = predict_sequence_prob(m, path);
  CHECK(std::abs(p - 0.2587) < 2e-3);
  const double emp = hits / double(n);
  CHECK(std::abs(emp - p) < 3 * oracle::se(p, n));
  CHECK(std::abs(emp - 0.2587) < 0.004);
}

TEST_CASE("config validation") {
  const auto m = query_model(1);
  CHECK(thrown_code([&] { SimConfig(m, 0, 1); }) == ErrorCode::Domain);
  SimOptions bad;
  bad.tur_fraction = 1.5;
  CHECK(thrown_code([&] { SimConfig(m, 10, 1, bad); }) == ErrorCode::Domain);
}

TEST_CASE("datasets are deterministic and thread-count independent") {
  const auto m = query_model(1);
  SimOptions one;
  one.threads = 1;
  SimOptions many;
  many.threads = 8;
  const auto a = simulate_dataset(SimConfig(m, 50000, 123, one));
  const auto b = simulate_dataset(SimConfig(m, 50000, 123, many));
  const auto c = simulate_dataset(SimConfig(m, 50000, 123));
  CHECK(same(a, b));
  CHECK(same(a, c));
  CHECK(a.records().front().respondent_id == "r1");
  CHECK_FALSE(same(a, simulate_dataset(SimConfig(m, 50000, 124, one))));

  SimOptions exact;
  exact.exact_split = true;
  exact.tur_fraction = 0.25;
  const auto e = simulate_dataset(SimConfig(m, 1000, 5, exact));
  std::size_t tur = 0;
  for (const auto& r : e.records()) tur += r.sequence == SequenceOrder::TUR;
  CHECK(tur == 250);
  for (std::size_t i = 0; i < 250; ++i) CHECK(e.records()[i].sequence == SequenceOrder::TUR);
}

TEST_CASE("property: every full outcome path converges at n = 1e5 per order") {
  const auto m = query_model(0);
  SimOptions opt;
  opt.tur_fraction = 0.5;
  const auto d = simulate_dataset(SimConfig(m, 200000, 777, opt));
  std::map<std::pair<int, int>, std::uint64_t> hits;  // (order, outcome mask)
  std::uint64_t n_order[2] = {0, 0};
  for (const auto& r : d.records()) {
    const int o = r.sequence == SequenceOrder::TUR ? 0 : 1;
    ++n_order[o];
    int mask = 0;
    for (int k = 0; k < 3; ++k) mask |= (*r.answers[k] ? 0 : 1) << k;
    ++hits[{o, mask}];
  }
  for (int o = 0; o < 2; ++o) {
    const auto seq = o == 0 ? SequenceOrder::TUR : SequenceOrder::TRU;
    CHECK(n_order[o] > 99000);
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<Judgment> path;
      for (int k = 0; k < 3; ++k)
        path.push_back({dimension_at(seq, k), (mask >> k) & 1 ? Outcome::Negative : Outcome::Positive});
      const double p = predict_sequence_prob(m, path);
      const double n = static_cast<double>(n_order[o]);
      const double emp = hits[{o, mask}] / n;
      CHECK_MESSAGE(std::abs(emp - p) <= 3 * oracle::se(p, n) + 1e-12, "order " << o << " mask " << mask);
    }
  }
  for (const auto& r : d.records()) REQUIRE(r.answers[2].has_value());
}
