#pragma once

#include <array>
#include <cmath>
#include <string>

#include "ggsel/errors.hpp"

// Fixed-size helpers for the 2x2 / 3x3 systems that appear in the
// information-matrix computations. Row-major storage.

namespace ggsel::math {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Mat2 = std::array<double, 4>;
using Mat3 = std::array<double, 9>;

inline double det2(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

inline double det3(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

inline double frobenius2(const Mat2& m) {
  return std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3]);
}

inline double frobenius3(const Mat3& m) {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

// Inverses of symmetric 2x2 / 3x3 matrices. Information matrices here mix
// the scales of (a, b, sigma2), so the near-singularity test runs on the
// diagonally equilibrated matrix (unit diagonal), where a small determinant
// really means a near-singular correlation structure.
inline Mat2 invert2(const Mat2& m, const char* what = "2x2 matrix") {
  const double d0 = std::sqrt(std::fabs(m[0]) > 0 ? std::fabs(m[0]) : 1.0);
  const double d1 = std::sqrt(std::fabs(m[3]) > 0 ? std::fabs(m[3]) : 1.0);
  const Mat2 s = {m[0] / (d0 * d0), m[1] / (d0 * d1), m[2] / (d1 * d0), m[3] / (d1 * d1)};
  const double d = det2(s);
  if (!(std::fabs(d) > 1e-12) || !std::isfinite(d)) {
    throw NumericalError(std::string(what) + " is near-singular (scaled det=" +
                         std::to_string(d) + ", |M|_F=" + std::to_string(frobenius2(m)) + ")");
  }
  const Mat2 si = {s[3] / d, -s[1] / d, -s[2] / d, s[0] / d};
  return {si[0] / (d0 * d0), si[1] / (d0 * d1), si[2] / (d1 * d0), si[3] / (d1 * d1)};
}

inline Mat3 invert3(const Mat3& m, const char* what = "3x3 matrix") {
  double sc[3];
  for (int i = 0; i < 3; ++i) {
    const double v = std::fabs(m[i * 3 + i]);
    sc[i] = std::sqrt(v > 0 ? v : 1.0);
  }
  Mat3 s;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s[i * 3 + j] = m[i * 3 + j] / (sc[i] * sc[j]);
  }
  const double d = det3(s);
  if (!(std::fabs(d) > 1e-12) || !std::isfinite(d)) {
    throw NumericalError(std::string(what) + " is near-singular (scaled det=" +
                         std::to_string(d) + ", |M|_F=" + std::to_string(frobenius3(m)) + ")");
  }
  Mat3 si;
  si[0] = (s[4] * s[8] - s[5] * s[7]) / d;
  si[1] = (s[2] * s[7] - s[1] * s[8]) / d;
  si[2] = (s[1] * s[5] - s[2] * s[4]) / d;
  si[3] = (s[5] * s[6] - s[3] * s[8]) / d;
  si[4] = (s[0] * s[8] - s[2] * s[6]) / d;
  si[5] = (s[2] * s[3] - s[0] * s[5]) / d;
  si[6] = (s[3] * s[7] - s[4] * s[6]) / d;
  si[7] = (s[1] * s[6] - s[0] * s[7]) / d;
  si[8] = (s[0] * s[4] - s[1] * s[3]) / d;
  Mat3 inv;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) inv[i * 3 + j] = si[i * 3 + j] / (sc[i] * sc[j]);
  }
  return inv;
}

inline Vec2 mul2(const Mat2& m, const Vec2& v) {
  return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

inline double dot2(const Vec2& a, const Vec2& b) {
  return a[0] * b[0] + a[1] * b[1];
}

// x^T M x for symmetric 2x2.
inline double quadform2(const Mat2& m, const Vec2& x) {
  return dot2(x, mul2(m, x));
}

inline Mat3 symmetrize3(const Mat3& m) {
  Mat3 s = m;
  s[1] = s[3] = 0.5 * (m[1] + m[3]);
  s[2] = s[6] = 0.5 * (m[2] + m[6]);
  s[5] = s[7] = 0.5 * (m[5] + m[7]);
  return s;
}

inline double max_asymmetry3(const Mat3& m) {
  double d = std::fabs(m[1] - m[3]);
  d = std::max(d, std::fabs(m[2] - m[6]));
  d = std::max(d, std::fabs(m[5] - m[7]));
  return d;
}

}  // namespace ggsel::math
