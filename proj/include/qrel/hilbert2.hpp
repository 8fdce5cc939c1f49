#pragma once

// Complex two-dimensional Hilbert space: kets, bases, 2x2 operators.
//
// Everything here is an immutable value type. Kets are always normalized;
// equality of kets is only meaningful up to a global phase (see same_ray).

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace qrel {

using Complex = std::complex<double>;

// Tolerance for algebraic identities (normalization, orthogonality, ...).
inline constexpr double kIdentityTol = 1e-9;
// A collapse onto an outcome with probability at or below this is rejected.
inline constexpr double kCollapseThreshold = 1e-12;

enum class Outcome { Positive, Negative };

constexpr Outcome opposite(Outcome o) noexcept {
  return o == Outcome::Positive ? Outcome::Negative : Outcome::Positive;
}

class Ket2 {
 public:
  // Amplitudes must already be normalized to within kIdentityTol.
  Ket2(Complex a0, Complex a1);

  // Rescales (a0, a1) to unit length. Throws DomainError on the zero vector.
  static Ket2 normalized(Complex a0, Complex a1);

  Complex a0() const noexcept { return a0_; }
  Complex a1() const noexcept { return a1_; }
  Complex operator[](std::size_t i) const noexcept { return i == 0 ? a0_ : a1_; }

  double norm_squared() const noexcept { return std::norm(a0_) + std::norm(a1_); }

  // Same ket multiplied by a unit-modulus phase factor.
  Ket2 with_phase(Complex phase) const;

 private:
  Complex a0_;
  Complex a1_;
};

// True when the kets describe the same physical state (|<x|y>| = 1).
bool same_ray(const Ket2& x, const Ket2& y, double tol = kIdentityTol);

class Basis2 {
 public:
  // Throws DomainError unless <plus|minus> = 0 within kIdentityTol.
  Basis2(Ket2 plus, Ket2 minus);

  const Ket2& plus() const noexcept { return plus_; }
  const Ket2& minus() const noexcept { return minus_; }
  const Ket2& ket(Outcome o) const noexcept { return o == Outcome::Positive ? plus_ : minus_; }

  static Basis2 standard();

 private:
  Ket2 plus_;
  Ket2 minus_;
};

// General complex 2x2 matrix, row-major.
class Matrix2c {
 public:
  constexpr Matrix2c() = default;
  Matrix2c(Complex m00, Complex m01, Complex m10, Complex m11);

  static Matrix2c identity();
  static Matrix2c zero() { return Matrix2c{}; }

  Complex operator()(std::size_t row, std::size_t col) const noexcept { return m_[2 * row + col]; }

  Matrix2c adjoint() const;
  double frobenius_norm() const noexcept;
  // Largest entrywise modulus of (*this - other).
  double max_abs_diff(const Matrix2c& other) const noexcept;

  friend Matrix2c operator+(const Matrix2c& a, const Matrix2c& b);
  friend Matrix2c operator-(const Matrix2c& a, const Matrix2c& b);
  friend Matrix2c operator*(const Matrix2c& a, const Matrix2c& b);
  friend Matrix2c operator*(Complex s, const Matrix2c& a);

 private:
  std::array<Complex, 4> m_{};
};

bool is_hermitian(const Matrix2c& m, double tol = kIdentityTol);
bool is_anti_hermitian(const Matrix2c& m, double tol = kIdentityTol);

// A yes/no question: Hermitian, eigenvalues +1 (yes) and -1 (no).
class Observable2 {
 public:
  // Throws DomainError if the matrix is not Hermitian within kIdentityTol.
  explicit Observable2(const Matrix2c& m);

  const Matrix2c& matrix() const noexcept { return m_; }

 private:
  Matrix2c m_;
};

// <bra|ket> = conj(bra) . ket
Complex inner(const Ket2& bra, const Ket2& ket);

// |<onto|state>|^2, clamped to [0, 1].
double prob_projection(const Ket2& state, const Ket2& onto);

// State after the outcome `onto` has been observed. Equal to `onto` up to a
// global phase. Throws ZeroProbabilityCollapse when the outcome is impossible.
Ket2 collapse(const Ket2& state, const Ket2& onto);

// Probability of observing chain[0], then chain[1], ... starting from state:
// |<c0|s>|^2 * |<c1|c0>|^2 * ... Throws DomainError on an empty chain.
double sequential_prob(const Ket2& state, std::span<const Ket2> chain);

// |k><k|
Matrix2c projector(const Ket2& k);

// |plus><plus| - |minus><minus|
Observable2 observable_from_basis(const Basis2& basis);

// ab - ba
Matrix2c commutator(const Observable2& a, const Observable2& b);

// Re-expresses the basis {|C>, |D>} of a state written both as a|A> + b|B>
// and c|C> + d|D> in terms of {|A>, |B>}. Real coefficients only; the
// returned kets hold the (A, B) components.
struct BasisChange {
  Ket2 c;
  Ket2 d;
};
BasisChange change_of_basis(double a, double b, double c, double d);

}  // namespace qrel
