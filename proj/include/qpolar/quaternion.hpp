#pragma once

// Quaternion scalars q = w + x i + y j + z k and their split q = alpha + beta j
// over the slice C_i. The library fixes the slice pair (m, n) = (i, j).

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <utility>

namespace qpolar {

using Complex = std::complex<double>;

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  // Embeds c in the slice C_i.
  static constexpr Quaternion from_complex(Complex c) { return {c.real(), c.imag(), 0.0, 0.0}; }

  constexpr double real() const { return w; }
  constexpr bool is_zero() const { return w == 0.0 && x == 0.0 && y == 0.0 && z == 0.0; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline constexpr Quaternion kOne{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion kI{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion kJ{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion kK{0.0, 0.0, 0.0, 1.0};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

// Hamilton product: i^2 = j^2 = k^2 = ijk = -1.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double abs(const Quaternion& q) { return std::sqrt(norm2(q)); }

inline std::pair<Quaternion, double> conj_norm(const Quaternion& q) { return {conj(q), abs(q)}; }

inline Quaternion inverse(const Quaternion& q) { return conj(q) / norm2(q); }

// q = alpha + beta * j with alpha, beta in C_i.
struct ComplexPair {
  Complex alpha;
  Complex beta;
};

constexpr ComplexPair split(const Quaternion& q) { return {{q.w, q.x}, {q.y, q.z}}; }

// alpha + beta * j; beta * j = (b0 + b1 i) j = b0 j + b1 k.
constexpr Quaternion join(const ComplexPair& p) {
  return {p.alpha.real(), p.alpha.imag(), p.beta.real(), p.beta.imag()};
}

// Text form "w x y z"; 17 significant digits round-trip exactly.
std::string to_string(const Quaternion& q);
// Throws std::invalid_argument on anything but four reals.
Quaternion parse_quaternion(std::string_view text);

}  // namespace qpolar
