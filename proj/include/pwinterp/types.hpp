#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace pwinterp {

// Largest ambient dimension supported. Vectors below carry their runtime size
// but never allocate.
inline constexpr int kMaxDim = 4;

// Points of R^n are column vectors, covectors (linear functionals) are row
// vectors, so that l * v is the pairing l[v].
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Covector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim>;
using BarycentricCoords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1>;

inline double pair(const Covector& l, const Point& v) { return l.dot(v.transpose()); }

inline Point zero_point(int n) { return Point::Zero(n); }
inline Covector zero_covector(int n) { return Covector::Zero(n); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegenerateSimplexError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// A triangulation vertex sits (numerically) on the discontinuity set of a BV
// field, so it is not a usable Lebesgue point. Callers resample the offset.
class LebesgueGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace pwinterp
