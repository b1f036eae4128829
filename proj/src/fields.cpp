#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "pwinterp/fields.hpp"

namespace pwinterp {

std::string to_string(FieldClass c) {
  switch (c) {
    case FieldClass::affine:
      return "affine";
    case FieldClass::smooth:
      return "smooth";
    case FieldClass::bv_indicator:
      return "bv_indicator";
  }
  return "unknown";
}

void ScalarField::evaluate_batch(std::span<const double* const> coords, std::span<double> values,
                                 std::span<double* const> grads) const {
  const int n = dim();
  Point x(n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    for (int j = 0; j < n; ++j) x(j) = coords[static_cast<std::size_t>(j)][k];
    values[k] = value(x);
    if (!grads.empty()) {
      const auto g = gradient(x);
      if (!g) throw Error("field " + name() + " has no pointwise gradient");
      for (int j = 0; j < n; ++j) grads[static_cast<std::size_t>(j)][k] = (*g)(j);
    }
  }
}

Box default_window(int n) { return Box::cube(n, -1.0, 1.0); }

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) throw DimensionError("field dimension " + std::to_string(n) + " unsupported");
}

void check_point(const ScalarField& f, const Point& x) {
  if (x.size() != f.dim()) throw DimensionError("point dimension does not match field " + f.name());
}

class AffineField final : public ScalarField {
 public:
  AffineField(std::string name, double c, Covector l) : name_(std::move(name)), c_(c), l_(std::move(l)) {
    check_dim(static_cast<int>(l_.size()));
  }
  std::string name() const override { return name_; }
  int dim() const override { return static_cast<int>(l_.size()); }
  FieldClass field_class() const override { return FieldClass::affine; }
  double value(const Point& x) const override {
    check_point(*this, x);
    return c_ + pair(l_, x);
  }
  std::optional<Covector> gradient(const Point& x) const override {
    check_point(*this, x);
    return l_;
  }
  Box support() const override { return default_window(dim()); }

 private:
  std::string name_;
  double c_;
  Covector l_;
};

class QuadraticField final : public ScalarField {
 public:
  QuadraticField(std::string name, Eigen::MatrixXd a, Covector b, double c)
      : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)), c_(c) {
    check_dim(static_cast<int>(b_.size()));
    if (a_.rows() != b_.size() || a_.cols() != b_.size()) throw DimensionError("quadratic form size mismatch");
    if (!a_.isApprox(a_.transpose())) throw Error("quadratic form must be symmetric");
  }
  std::string name() const override { return name_; }
  int dim() const override { return static_cast<int>(b_.size()); }
  FieldClass field_class() const override { return FieldClass::smooth; }
  double value(const Point& x) const override {
    check_point(*this, x);
    const Eigen::VectorXd xv = x;
    return 0.5 * xv.dot(a_ * xv) + pair(b_, x) + c_;
  }
  std::optional<Covector> gradient(const Point& x) const override {
    check_point(*this, x);
    const Eigen::VectorXd xv = x;
    Covector g = (a_ * xv).transpose();
    return Covector(g + b_);
  }
  Box support() const override { return default_window(dim()); }

 private:
  std::string name_;
  Eigen::MatrixXd a_;
  Covector b_;
  double c_;
};

// ∫_{|x| > radius} |x|^k exp(-c |x|^2) dx over R^n.
double radial_gaussian_tail(int n, double k, double c, double radius) {
  const double sphere_area = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  const double s = 0.5 * (n + k);
  return sphere_area * std::tgamma(s) * boost::math::gamma_q(s, c * radius * radius) / (2.0 * std::pow(c, s));
}

class GaussianField final : public ScalarField {
 public:
  explicit GaussianField(int n) : n_(n) { check_dim(n); }

  // exp(-R^2) < 1e-16 beyond this half-width.
  static constexpr double kHalfWidth = 6.1;

  std::string name() const override { return "gaussian"; }
  int dim() const override { return n_; }
  FieldClass field_class() const override { return FieldClass::smooth; }
  double value(const Point& x) const override {
    check_point(*this, x);
    return std::exp(-x.squaredNorm());
  }
  std::optional<Covector> gradient(const Point& x) const override {
    check_point(*this, x);
    return Covector(-2.0 * std::exp(-x.squaredNorm()) * x.transpose());
  }
  Box support() const override { return Box::cube(n_, -kHalfWidth, kHalfWidth); }
  double tail_bound(double p, double q) const override {
    return radial_gaussian_tail(n_, 0.0, q, kHalfWidth) +
           std::pow(2.0, p) * radial_gaussian_tail(n_, p, p, kHalfWidth);
  }
  void evaluate_batch(std::span<const double* const> coords, std::span<double> values,
                      std::span<double* const> grads) const override {
    for (std::size_t k = 0; k < values.size(); ++k) {
      double sq = 0.0;
      for (int j = 0; j < n_; ++j) sq += coords[static_cast<std::size_t>(j)][k] * coords[static_cast<std::size_t>(j)][k];
      const double v = std::exp(-sq);
      values[k] = v;
      if (!grads.empty()) {
        for (int j = 0; j < n_; ++j) {
          grads[static_cast<std::size_t>(j)][k] = -2.0 * v * coords[static_cast<std::size_t>(j)][k];
        }
      }
    }
  }

 private:
  int n_;
};

class BumpField final : public ScalarField {
 public:
  BumpField(Point center, double radius) : center_(std::move(center)), radius_(radius) {
    check_dim(static_cast<int>(center_.size()));
    if (!(radius_ > 0.0)) throw Error("bump radius must be positive");
  }
  std::string name() const override { return "bump"; }
  int dim() const override { return static_cast<int>(center_.size()); }
  FieldClass field_class() const override { return FieldClass::smooth; }
  double value(const Point& x) const override {
    check_point(*this, x);
    const double s = (x - center_).squaredNorm() / (radius_ * radius_);
    return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
  }
  std::optional<Covector> gradient(const Point& x) const override {
    check_point(*this, x);
    const double s = (x - center_).squaredNorm() / (radius_ * radius_);
    if (!(s < 1.0)) return Covector::Zero(dim());
    const double u = std::exp(1.0 - 1.0 / (1.0 - s));
    if (u == 0.0) return Covector::Zero(dim());
    const double factor = -u / ((1.0 - s) * (1.0 - s)) * 2.0 / (radius_ * radius_);
    return Covector(factor * (x - center_).transpose());
  }
  Box support() const override { return Box(center_.array() - radius_, center_.array() + radius_); }

 private:
  Point center_;
  double radius_;
};

double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

class IndicatorTriangle final : public ScalarField {
 public:
  IndicatorTriangle(const Point& a, const Point& b, const Point& c) : triangle_({a, b, c}) {
    if (a.size() != 2) throw DimensionError("indicator triangle lives in R^2");
  }
  std::string name() const override { return "indicator_triangle"; }
  int dim() const override { return 2; }
  FieldClass field_class() const override { return FieldClass::bv_indicator; }
  double value(const Point& x) const override {
    check_point(*this, x);
    const auto beta = triangle_.barycentric(x);
    return (beta.array() >= 0.0).all() ? 1.0 : 0.0;
  }
  std::optional<Covector> gradient(const Point& x) const override {
    check_point(*this, x);
    return std::nullopt;
  }
  Box support() const override {
    Point lo = triangle_.vertex(0);
    Point hi = triangle_.vertex(0);
    for (int i = 1; i < 3; ++i) {
      lo = lo.cwiseMin(triangle_.vertex(i));
      hi = hi.cwiseMax(triangle_.vertex(i));
    }
    return Box(lo, hi);
  }
  double singular_distance(const Point& x) const override {
    check_point(*this, x);
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) d = std::min(d, segment_distance(x, triangle_.vertex(i), triangle_.vertex((i + 1) % 3)));
    return d;
  }
  std::optional<double> exact_total_variation() const override {
    // |D 1_T|(R^2) is the perimeter of T.
    double perimeter = 0.0;
    for (int i = 0; i < 3; ++i) perimeter += (triangle_.vertex(i) - triangle_.vertex((i + 1) % 3)).norm();
    return perimeter;
  }

 private:
  Simplex triangle_;
};

class ScaledField final : public ScalarField {
 public:
  ScaledField(FieldPtr source, double factor) : source_(std::move(source)), factor_(factor) {
    if (!source_) throw Error("scaled field needs a source");
    if (!(factor_ > 0.0)) throw Error("scale factor must be positive");
  }
  std::string name() const override { return source_->name() + "_scaled"; }
  int dim() const override { return source_->dim(); }
  FieldClass field_class() const override { return source_->field_class(); }
  double value(const Point& x) const override { return source_->value(x / factor_); }
  std::optional<Covector> gradient(const Point& x) const override {
    auto g = source_->gradient(x / factor_);
    if (g) *g /= factor_;
    return g;
  }
  Box support() const override { return source_->support().scaled(factor_); }
  double singular_distance(const Point& x) const override {
    return factor_ * source_->singular_distance(x / factor_);
  }
  double tail_bound(double p, double q) const override {
    const int n = dim();
    return std::max(std::pow(factor_, n), std::pow(factor_, n - p)) * source_->tail_bound(p, q);
  }
  std::optional<double> exact_total_variation() const override {
    auto tv = source_->exact_total_variation();
    if (tv) *tv *= std::pow(factor_, dim() - 1);
    return tv;
  }

 private:
  FieldPtr source_;
  double factor_;
};

class TranslatedField final : public ScalarField {
 public:
  TranslatedField(FieldPtr source, Point shift) : source_(std::move(source)), shift_(std::move(shift)) {
    if (!source_) throw Error("translated field needs a source");
    if (shift_.size() != source_->dim()) throw DimensionError("shift dimension mismatch");
  }
  std::string name() const override { return source_->name() + "_translated"; }
  int dim() const override { return source_->dim(); }
  FieldClass field_class() const override { return source_->field_class(); }
  double value(const Point& x) const override { return source_->value(x - shift_); }
  std::optional<Covector> gradient(const Point& x) const override { return source_->gradient(x - shift_); }
  Box support() const override { return source_->support().translated(shift_); }
  double singular_distance(const Point& x) const override { return source_->singular_distance(x - shift_); }
  double tail_bound(double p, double q) const override { return source_->tail_bound(p, q); }
  std::optional<double> exact_total_variation() const override { return source_->exact_total_variation(); }

 private:
  FieldPtr source_;
  Point shift_;
};

Point point_of(std::initializer_list<double> values) {
  Point p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) p(i++) = v;
  return p;
}

}  // namespace

FieldPtr make_constant(int n, double c) {
  check_dim(n);
  return std::make_shared<AffineField>("constant", c, Covector::Zero(n));
}

FieldPtr make_affine(double c, Covector l) { return std::make_shared<AffineField>("affine", c, std::move(l)); }

FieldPtr make_quadratic(Eigen::MatrixXd a, Covector b, double c) {
  return std::make_shared<QuadraticField>("quadratic", std::move(a), std::move(b), c);
}

FieldPtr make_norm_squared(int n) {
  check_dim(n);
  return std::make_shared<QuadraticField>("norm_squared", 2.0 * Eigen::MatrixXd::Identity(n, n), Covector::Zero(n),
                                          0.0);
}

FieldPtr make_gaussian(int n) { return std::make_shared<GaussianField>(n); }

FieldPtr make_bump(Point center, double radius) { return std::make_shared<BumpField>(std::move(center), radius); }

FieldPtr make_indicator_triangle(const Point& a, const Point& b, const Point& c) {
  return std::make_shared<IndicatorTriangle>(a, b, c);
}

FieldPtr make_reference_indicator() {
  return make_indicator_triangle(point_of({0.0, 0.0}), point_of({0.0, 1.0}), point_of({1.0, 0.0}));
}

FieldPtr make_scaled(FieldPtr source, double factor) {
  return std::make_shared<ScaledField>(std::move(source), factor);
}

FieldPtr make_translated(FieldPtr source, Point shift) {
  return std::make_shared<TranslatedField>(std::move(source), std::move(shift));
}

std::span<const std::string> field_names() {
  static const std::array<std::string, 6> names{"constant", "affine",   "quadratic",
                                                "gaussian", "bump",     "indicator_triangle"};
  return names;
}

FieldPtr make_field(const std::string& name, int n) {
  check_dim(n);
  if (name == "constant") return make_constant(n, 1.5);
  if (name == "affine") {
    const Covector l = point_of({1.0, -2.0, 0.75, 0.25}).head(n).transpose();
    return make_affine(0.5, l);
  }
  if (name == "quadratic") {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = i == j ? 2.0 + 0.5 * i : 0.3;
    }
    const Covector b = point_of({0.3, -0.2, 0.1, 0.05}).head(n).transpose();
    return make_quadratic(a, b, 0.25);
  }
  if (name == "gaussian") return make_gaussian(n);
  if (name == "bump") return make_bump(Point::Zero(n), 1.0);
  if (name == "indicator_triangle") {
    if (n != 2) throw DimensionError("indicator_triangle exists only for n = 2");
    return make_reference_indicator();
  }
  throw Error("unknown field '" + name + "'");
}

}  // namespace pwinterp
