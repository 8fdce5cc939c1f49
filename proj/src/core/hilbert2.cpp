#include "qrel/hilbert2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrel/error.hpp"

namespace qrel {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(Complex z, const char* what) {
  if (!finite(z)) throw Error(ErrorCode::Domain, std::string(what) + " is not finite");
}

}  // namespace

Ket2::Ket2(Complex a0, Complex a1) : a0_(a0), a1_(a1) {
  require_finite(a0, "ket amplitude a0");
  require_finite(a1, "ket amplitude a1");
  const double n = norm_squared();
  if (std::abs(n - 1.0) > kIdentityTol) {
    throw Error(ErrorCode::Domain, "ket is not normalized (|a0|^2+|a1|^2 = " + std::to_string(n) + ")");
  }
}

Ket2 Ket2::normalized(Complex a0, Complex a1) {
  require_finite(a0, "ket amplitude a0");
  require_finite(a1, "ket amplitude a1");
  const double n = std::sqrt(std::norm(a0) + std::norm(a1));
  if (n == 0.0) throw Error(ErrorCode::Domain, "cannot normalize the zero vector");
  return Ket2(a0 / n, a1 / n);
}

Ket2 Ket2::with_phase(Complex phase) const { return Ket2::normalized(phase * a0_, phase * a1_); }

bool same_ray(const Ket2& x, const Ket2& y, double tol) {
  return std::abs(std::abs(inner(x, y)) - 1.0) <= tol;
}

Basis2::Basis2(Ket2 plus, Ket2 minus) : plus_(plus), minus_(minus) {
  if (std::abs(inner(plus_, minus_)) > kIdentityTol) {
    throw Error(ErrorCode::Domain, "basis kets are not orthogonal");
  }
}

Basis2 Basis2::standard() { return Basis2(Ket2(1.0, 0.0), Ket2(0.0, 1.0)); }

Matrix2c::Matrix2c(Complex m00, Complex m01, Complex m10, Complex m11) : m_{m00, m01, m10, m11} {
  for (const auto& z : m_) require_finite(z, "matrix entry");
}

Matrix2c Matrix2c::identity() { return Matrix2c(1.0, 0.0, 0.0, 1.0); }

Matrix2c Matrix2c::adjoint() const {
  return Matrix2c(std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3]));
}

double Matrix2c::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : m_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix2c::max_abs_diff(const Matrix2c& other) const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(m_[i] - other.m_[i]));
  return worst;
}

Matrix2c operator+(const Matrix2c& a, const Matrix2c& b) {
  return Matrix2c(a.m_[0] + b.m_[0], a.m_[1] + b.m_[1], a.m_[2] + b.m_[2], a.m_[3] + b.m_[3]);
}

Matrix2c operator-(const Matrix2c& a, const Matrix2c& b) {
  return Matrix2c(a.m_[0] - b.m_[0], a.m_[1] - b.m_[1], a.m_[2] - b.m_[2], a.m_[3] - b.m_[3]);
}

Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
  return Matrix2c(a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                  a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1));
}

Matrix2c operator*(Complex s, const Matrix2c& a) {
  return Matrix2c(s * a.m_[0], s * a.m_[1], s * a.m_[2], s * a.m_[3]);
}

bool is_hermitian(const Matrix2c& m, double tol) { return m.max_abs_diff(m.adjoint()) <= tol; }

bool is_anti_hermitian(const Matrix2c& m, double tol) {
  return m.max_abs_diff(Complex(-1.0) * m.adjoint()) <= tol;
}

Observable2::Observable2(const Matrix2c& m) : m_(m) {
  if (!is_hermitian(m_)) throw Error(ErrorCode::Domain, "observable matrix is not Hermitian");
}

Complex inner(const Ket2& bra, const Ket2& ket) {
  return std::conj(bra.a0()) * ket.a0() + std::conj(bra.a1()) * ket.a1();
}

double prob_projection(const Ket2& state, const Ket2& onto) {
  return std::clamp(std::norm(inner(onto, state)), 0.0, 1.0);
}

Ket2 collapse(const Ket2& state, const Ket2& onto) {
  const Complex overlap = inner(onto, state);
  if (std::norm(overlap) <= kCollapseThreshold) {
    throw Error(ErrorCode::ZeroProbabilityCollapse, "outcome has zero probability in the current state");
  }
  // P|s> / ||P|s>|| keeps the phase picked up by the projection.
  return onto.with_phase(overlap / std::abs(overlap));
}

double sequential_prob(const Ket2& state, std::span<const Ket2> chain) {
  if (chain.empty()) throw Error(ErrorCode::Domain, "measurement chain is empty");
  double p = prob_projection(state, chain.front());
  for (std::size_t i = 1; i < chain.size(); ++i) p *= prob_projection(chain[i - 1], chain[i]);
  return p;
}

Matrix2c projector(const Ket2& k) {
  return Matrix2c(k.a0() * std::conj(k.a0()), k.a0() * std::conj(k.a1()), k.a1() * std::conj(k.a0()),
                  k.a1() * std::conj(k.a1()));
}

Observable2 observable_from_basis(const Basis2& basis) {
  return Observable2(projector(basis.plus()) - projector(basis.minus()));
}

Matrix2c commutator(const Observable2& a, const Observable2& b) {
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

BasisChange change_of_basis(double a, double b, double c, double d) {
  for (double x : {a, b, c, d}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::Domain, "change_of_basis coefficient is not finite");
  }
  if (std::abs(a * a + b * b - 1.0) > kIdentityTol) {
    throw Error(ErrorCode::Domain, "change_of_basis requires a^2 + b^2 = 1");
  }
  if (std::abs(c * c + d * d - 1.0) > kIdentityTol) {
    throw Error(ErrorCode::Domain, "change_of_basis requires c^2 + d^2 = 1");
  }
  return BasisChange{Ket2(a * c + b * d, b * c - a * d), Ket2(a * d - b * c, a * c + b * d)};
}

}  // namespace qrel
