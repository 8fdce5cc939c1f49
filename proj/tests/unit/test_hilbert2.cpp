#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "check.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"
#include "qrel/hilbert2.hpp"

using namespace qrel;
using oracle::Gen;

namespace {

const Ket2 kTp{1.0, 0.0};
const Ket2 kTm{0.0, 1.0};
const double kH = 1.0 / std::sqrt(2.0);

Ket2 to_ket(oracle::V v) { return Ket2(v.a, v.b); }

Ket2 ket_from_t2(double t2) { return Ket2(std::sqrt(t2), std::sqrt(1 - t2)); }

Basis2 u_basis(double u) {
  const double s = std::sqrt(1 - u * u);
  return Basis2(Ket2(u, s), Ket2(s, -u));
}

Basis2 random_basis(Gen& g) {
  auto v = g.ket();
  // orthogonal complement: (-conj(b), conj(a))
  return Basis2(to_ket(v), Ket2(-std::conj(v.b), std::conj(v.a)));
}

}  // namespace

TEST_CASE("ket construction validates normalization") {
  CHECK(thrown_code([] { Ket2(1.0, 1.0); }) == ErrorCode::Domain);
  CHECK(thrown_code([] { Ket2(NAN, 0.0); }) == ErrorCode::Domain);
  CHECK(thrown_code([] { Ket2::normalized(0.0, 0.0); }) == ErrorCode::Domain);
  const auto k = Ket2::normalized(3.0, 4.0);
  CHECK(k.a0().real() == doctest::Approx(0.6));
  CHECK(k.a1().real() == doctest::Approx(0.8));
  CHECK(same_ray(k, k.with_phase(std::polar(1.0, 1.3))));
  CHECK_FALSE(same_ray(kTp, kTm));
}

TEST_CASE("basis requires orthogonal kets") {
  CHECK(thrown_code([] { Basis2(Ket2(1.0, 0.0), Ket2(kH, kH)); }) == ErrorCode::Domain);
  CHECK_NOTHROW(u_basis(0.3));
}

TEST_CASE("inner product examples") {
  CHECK(std::abs(inner(kTp, kTp) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(inner(kTp, kTm)) < 1e-12);
  const Ket2 sx(kH, kH);
  const Ket2 sy(kH, Complex(0, kH));
  const Complex v = inner(sx, sy);
  CHECK(v.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(0.5).epsilon(1e-12));
  // conjugate symmetry on random kets
  Gen g(11);
  for (int i = 0; i < 1000; ++i) {
    const auto x = to_ket(g.ket()), y = to_ket(g.ket());
    CHECK(std::abs(inner(x, y) - std::conj(inner(y, x))) < 1e-12);
  }
}

TEST_CASE("projection probability examples") {
  CHECK(prob_projection(kTp, kTp) == doctest::Approx(1.0));
  CHECK(prob_projection(Ket2(kH, kH), kTp) == doctest::Approx(0.5));
  CHECK(prob_projection(ket_from_t2(0.7622), kTp) == doctest::Approx(0.7622).epsilon(1e-12));
}

TEST_CASE("collapse examples") {
  const Ket2 s = ket_from_t2(0.7622);
  CHECK(same_ray(collapse(s, kTp), kTp));
  CHECK(thrown_code([&] { collapse(kTp, kTm); }) == ErrorCode::ZeroProbabilityCollapse);
  // probability just above the threshold still collapses
  const double a = std::sqrt(1e-10);
  CHECK_NOTHROW(collapse(Ket2(std::sqrt(1 - a * a), a), kTm));
}

TEST_CASE("sequential probability examples") {
  const Ket2 s = ket_from_t2(0.7622);
  const auto ub = u_basis(std::sqrt(0.5779));
  const std::vector<Ket2> c1{kTp};
  const std::vector<Ket2> c2{kTp, ub.plus()};
  const std::vector<Ket2> c3{kTp, kTm};
  CHECK(sequential_prob(s, c1) == doctest::Approx(0.7622).epsilon(1e-12));
  // 0.7622 * 0.5779
  CHECK(sequential_prob(s, c2) == doctest::Approx(0.44047538).epsilon(1e-9));
  CHECK(std::abs(sequential_prob(kTp, c2) - 0.5779) < 1e-3);
  CHECK(sequential_prob(s, c3) == 0.0);
  CHECK(thrown_code([&] { sequential_prob(s, std::span<const Ket2>{}); }) == ErrorCode::Domain);
}

TEST_CASE("projector examples") {
  const auto p = projector(kTp);
  CHECK(p.max_abs_diff(Matrix2c(1, 0, 0, 0)) < 1e-15);
  const auto pu = projector(Ket2::normalized(0.7601, 0.6496));
  CHECK(pu.max_abs_diff(Matrix2c(0.5779, 0.4938, 0.4938, 0.4221)) < 1e-3);
}

TEST_CASE("observable examples") {
  const auto z = observable_from_basis(Basis2::standard());
  CHECK(z.matrix().max_abs_diff(Matrix2c(1, 0, 0, -1)) < 1e-15);
  const auto u = observable_from_basis(u_basis(std::sqrt(0.5779)));
  using reference::kU1;
  CHECK(u.matrix().max_abs_diff(Matrix2c(kU1[0][0], kU1[0][1], kU1[1][0], kU1[1][1])) < 1e-3);
  CHECK(thrown_code([] { Observable2(Matrix2c(0, 1, 0, 0)); }) == ErrorCode::Domain);
}

TEST_CASE("commutator examples") {
  const auto z = observable_from_basis(Basis2::standard());
  CHECK(commutator(z, z).frobenius_norm() < 1e-15);
  using reference::kU1;
  const Observable2 u(Matrix2c(kU1[0][0], kU1[0][1], kU1[1][0], kU1[1][1]));
  const auto c = commutator(z, u);
  // oracle: [[0, 2 u01], [-2 u10, 0]] by direct multiplication
  oracle::M zo{{{1, 0}, {0, -1}}};
  oracle::M uo{{{kU1[0][0], kU1[0][1]}, {kU1[1][0], kU1[1][1]}}};
  const auto co = oracle::sub(oracle::mul(zo, uo), oracle::mul(uo, zo));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(c(i, j) - co.m[i][j]) < 1e-12);
  CHECK(c(0, 1).real() == doctest::Approx(1.9748).epsilon(1e-9));
  CHECK(c.frobenius_norm() == doctest::Approx(reference::kCommTU1Norm).epsilon(1e-4));
}

TEST_CASE("change of basis examples") {
  const auto bc = change_of_basis(kH, kH, 1.0, 0.0);
  CHECK(same_ray(bc.c, Ket2(kH, kH)));
  CHECK(same_ray(bc.d, Ket2(kH, -kH)));
  CHECK(thrown_code([] { change_of_basis(0.6, 0.6, 1.0, 0.0); }) == ErrorCode::Domain);
  CHECK(thrown_code([] { change_of_basis(1.0, 0.0, 0.9, 0.0); }) == ErrorCode::Domain);
  // the state a|A>+b|B> equals c|C>+d|D>
  Gen g(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = g.uni(0, 2 * std::numbers::pi), y = g.uni(0, 2 * std::numbers::pi);
    const double a = std::cos(x), b = std::sin(x), c = std::cos(y), d = std::sin(y);
    const auto r = change_of_basis(a, b, c, d);
    const Complex s0 = c * r.c.a0() + d * r.d.a0();
    const Complex s1 = c * r.c.a1() + d * r.d.a1();
    REQUIRE(std::abs(s0 - a) < 1e-9);
    REQUIRE(std::abs(s1 - b) < 1e-9);
    REQUIRE(std::abs(inner(r.c, r.d)) < 1e-9);
  }
}

TEST_CASE("property: Born rule and operator algebra on random kets") {
  Gen g(20240601);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Ket2 s = to_ket(g.ket());
    const Basis2 a = random_basis(g);
    const Basis2 b = random_basis(g);
    // normalization closure
    REQUIRE(std::abs(prob_projection(s, a.plus()) + prob_projection(s, a.minus()) - 1.0) < 1e-9);
    // completeness
    REQUIRE((projector(a.plus()) + projector(a.minus())).max_abs_diff(Matrix2c::identity()) < 1e-9);
    // idempotence
    const auto p = projector(a.plus());
    REQUIRE((p * p).max_abs_diff(p) < 1e-9);
    // involution
    const auto oa = observable_from_basis(a);
    REQUIRE((oa.matrix() * oa.matrix()).max_abs_diff(Matrix2c::identity()) < 1e-9);
    // commutator anti-Hermitian and antisymmetric
    const auto ob = observable_from_basis(b);
    const auto ab = commutator(oa, ob);
    REQUIRE(is_anti_hermitian(ab));
    REQUIRE((ab + commutator(ob, oa)).max_abs_diff(Matrix2c::zero()) == 0.0);
    // chain product agrees with the amplitude oracle
    const oracle::V sv{s.a0(), s.a1()}, ap{a.plus().a0(), a.plus().a1()}, bp{b.plus().a0(), b.plus().a1()};
    const std::vector<Ket2> ch{a.plus(), b.plus()};
    REQUIRE(std::abs(sequential_prob(s, ch) - oracle::chain(sv, ap, bp)) < 1e-12);
    // collapse lands on the outcome ray
    if (prob_projection(s, a.plus()) > 1e-9) REQUIRE(same_ray(collapse(s, a.plus()), a.plus()));
  }
}
