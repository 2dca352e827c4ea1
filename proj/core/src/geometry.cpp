#include "aamr/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aamr/matrix.hpp"

namespace aamr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSvdCutoff = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_nonzero_normal(std::string_view kind, const Vector& normal) {
  if (normal.size() < 1) throw InvalidInput(std::string(kind) + ": empty normal");
  require_finite(kind, normal);
  if (normal.squaredNorm() == 0.0) {
    throw InvalidInput(std::string(kind) + ": normal must be nonzero");
  }
}

Vector project_affine(const AffineSubspace& s, const Vector& x) {
  return x - s.pseudo_inverse * (s.rows * x - s.rhs);
}

Vector project_spectral(int order, double lo, double hi, const Vector& x) {
  return embedded_from_dense(
      clamp_spectrum(dense_from_embedded(x, order), lo, hi));
}

Vector project_unchecked(const ConvexSet& set, const Vector& x) {
  return std::visit(
      Overloaded{
          [&](const Hyperplane& h) -> Vector {
            return x - (h.normal.dot(x) - h.offset) / h.normal.squaredNorm() *
                           h.normal;
          },
          [&](const Halfspace& h) -> Vector {
            const double excess = h.normal.dot(x) - h.offset;
            if (excess <= 0.0) return x;
            return x - excess / h.normal.squaredNorm() * h.normal;
          },
          [&](const Box& b) -> Vector {
            return x.cwiseMax(b.lower).cwiseMin(b.upper);
          },
          [&](const Ball& b) -> Vector {
            const Vector d = x - b.center;
            const double norm = d.norm();
            if (norm <= b.radius) return x;
            return b.center + (b.radius / norm) * d;
          },
          [&](const AffineSubspace& a) -> Vector {
            return project_affine(a, x);
          },
          [&](const PsdCone& p) -> Vector {
            return project_spectral(p.order, 0.0, kInf, x);
          },
          [&](const SpectralBox& s) -> Vector {
            return project_spectral(s.order, s.eig_lower, s.eig_upper, x);
          },
          [&](const NonnegOrthant&) -> Vector { return x.cwiseMax(0.0); },
          [&](const Shifted& s) -> Vector {
            return project_unchecked(*s.inner, x - s.shift) + s.shift;
          },
      },
      set.variant());
}

double spectral_slack(int order, double lo, double hi, const Vector& x) {
  const Vector lambda = eigenvalues(unembed(x, order));
  return std::min(lambda[0] - lo, hi - lambda[lambda.size() - 1]);
}

double slack_unchecked(const ConvexSet& set, const Vector& x) {
  return std::visit(
      Overloaded{
          [&](const Hyperplane&) { return -kInf; },
          [&](const Halfspace& h) {
            return (h.offset - h.normal.dot(x)) / h.normal.norm();
          },
          [&](const Box& b) {
            double slack = kInf;
            for (Index i = 0; i < x.size(); ++i) {
              if (std::isfinite(b.lower[i])) slack = std::min(slack, x[i] - b.lower[i]);
              if (std::isfinite(b.upper[i])) slack = std::min(slack, b.upper[i] - x[i]);
            }
            return slack;
          },
          [&](const Ball& b) { return b.radius - (x - b.center).norm(); },
          [&](const AffineSubspace&) { return -kInf; },
          [&](const PsdCone& p) { return spectral_slack(p.order, 0.0, kInf, x); },
          [&](const SpectralBox& s) {
            return spectral_slack(s.order, s.eig_lower, s.eig_upper, x);
          },
          [&](const NonnegOrthant&) { return x.minCoeff(); },
          [&](const Shifted& s) { return slack_unchecked(*s.inner, x - s.shift); },
      },
      set.variant());
}

void check_point(std::string_view context, const ConvexSet& set,
                 const Vector& x) {
  require_dimension(context, set.dimension(), x.size());
  require_finite(context, x);
}

}  // namespace

ConvexSet ConvexSet::hyperplane(Vector normal, double offset) {
  require_nonzero_normal("Hyperplane", normal);
  if (!std::isfinite(offset)) throw InvalidInput("Hyperplane: offset must be finite");
  const Index dim = normal.size();
  return ConvexSet(Hyperplane{std::move(normal), offset}, dim);
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_nonzero_normal("Halfspace", normal);
  if (!std::isfinite(offset)) throw InvalidInput("Halfspace: offset must be finite");
  const Index dim = normal.size();
  return ConvexSet(Halfspace{std::move(normal), offset}, dim);
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() < 1) throw InvalidInput("Box: empty bounds");
  require_dimension("Box upper", lower.size(), upper.size());
  for (Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i])) {
      throw InvalidInput("Box: NaN bound at coordinate " + std::to_string(i));
    }
    if (!(lower[i] <= upper[i]) || lower[i] == kInf || upper[i] == -kInf) {
      throw InvalidInput("Box: requires lower <= upper at coordinate " +
                         std::to_string(i));
    }
  }
  const Index dim = lower.size();
  return ConvexSet(Box{std::move(lower), std::move(upper)}, dim);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() < 1) throw InvalidInput("Ball: empty center");
  require_finite("Ball center", center);
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("Ball: radius must be finite and > 0, got " +
                       std::to_string(radius));
  }
  const Index dim = center.size();
  return ConvexSet(Ball{std::move(center), radius}, dim);
}

ConvexSet ConvexSet::affine(Eigen::MatrixXd rows, Vector rhs) {
  if (rows.rows() < 1 || rows.cols() < 1) {
    throw InvalidInput("AffineSubspace: needs at least one constraint row");
  }
  require_dimension("AffineSubspace rhs", rows.rows(), rhs.size());
  if (!rows.allFinite() || !rhs.allFinite()) {
    throw InvalidInput("AffineSubspace: non-finite data");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma[0] == 0.0) {
    throw InvalidInput("AffineSubspace: constraint matrix is zero");
  }
  const double cutoff = kSvdCutoff * sigma[0];
  Vector inv_sigma = Vector::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) inv_sigma[i] = 1.0 / sigma[i];
  }
  Eigen::MatrixXd pinv =
      svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
  // Nonempty iff rhs lies in the range of rows.
  const Vector residual = rows * (pinv * rhs) - rhs;
  if (residual.norm() > 1e-9 * (1.0 + rhs.norm())) {
    throw InvalidInput("AffineSubspace: inconsistent constraints (empty set)");
  }
  const Index dim = rows.cols();
  return ConvexSet(AffineSubspace{std::move(rows), std::move(rhs), std::move(pinv)},
                   dim);
}

ConvexSet ConvexSet::psd_cone(int order) {
  if (order < 1) throw InvalidInput("PsdCone: order must be >= 1");
  return ConvexSet(PsdCone{order}, embedded_dimension(order));
}

ConvexSet ConvexSet::spectral_box(int order, double eig_lower,
                                  double eig_upper) {
  if (order < 1) throw InvalidInput("SpectralBox: order must be >= 1");
  if (std::isnan(eig_lower) || std::isnan(eig_upper) || !(eig_lower <= eig_upper) ||
      eig_lower == kInf || eig_upper == -kInf) {
    throw InvalidInput("SpectralBox: requires eig_lower <= eig_upper");
  }
  return ConvexSet(SpectralBox{order, eig_lower, eig_upper},
                   embedded_dimension(order));
}

ConvexSet ConvexSet::nonneg_orthant(Index dimension) {
  if (dimension < 1) throw InvalidInput("NonnegOrthant: dimension must be >= 1");
  return ConvexSet(NonnegOrthant{dimension}, dimension);
}

ConvexSet ConvexSet::shifted(ConvexSet inner, Vector shift) {
  require_dimension("Shifted shift", inner.dimension(), shift.size());
  require_finite("Shifted shift", shift);
  const Index dim = inner.dimension();
  return ConvexSet(
      Shifted{std::make_shared<const ConvexSet>(std::move(inner)), std::move(shift)},
      dim);
}

ConvexSet ConvexSet::whole_space(Index dimension) {
  if (dimension < 1) throw InvalidInput("whole space: dimension must be >= 1");
  return box(Vector::Constant(dimension, -kInf), Vector::Constant(dimension, kInf));
}

std::string_view ConvexSet::kind() const {
  return std::visit(
      Overloaded{
          [](const Hyperplane&) { return std::string_view("hyperplane"); },
          [](const Halfspace&) { return std::string_view("halfspace"); },
          [](const Box&) { return std::string_view("box"); },
          [](const Ball&) { return std::string_view("ball"); },
          [](const AffineSubspace&) { return std::string_view("affine"); },
          [](const PsdCone&) { return std::string_view("psd_cone"); },
          [](const SpectralBox&) { return std::string_view("spectral_box"); },
          [](const NonnegOrthant&) { return std::string_view("nonneg_orthant"); },
          [](const Shifted&) { return std::string_view("shifted"); },
      },
      set_);
}

bool ConvexSet::is_cone() const {
  auto conic_bound = [](double b) { return b == 0.0 || std::isinf(b); };
  return std::visit(
      Overloaded{
          [](const Hyperplane& h) { return h.offset == 0.0; },
          [](const Halfspace& h) { return h.offset == 0.0; },
          [&](const Box& b) {
            return std::all_of(b.lower.begin(), b.lower.end(), conic_bound) &&
                   std::all_of(b.upper.begin(), b.upper.end(), conic_bound);
          },
          [](const Ball&) { return false; },
          [](const AffineSubspace& a) { return a.rhs.isZero(0.0); },
          [](const PsdCone&) { return true; },
          [&](const SpectralBox& s) {
            return conic_bound(s.eig_lower) && conic_bound(s.eig_upper);
          },
          [](const NonnegOrthant&) { return true; },
          [](const Shifted& s) { return s.shift.isZero(0.0) && s.inner->is_cone(); },
      },
      set_);
}

Vector project(const ConvexSet& set, const Vector& x) {
  check_point("project", set, x);
  return project_unchecked(set, x);
}

Vector project_shifted(const ConvexSet& inner, const Vector& shift,
                       const Vector& y) {
  require_dimension("project_shifted shift", inner.dimension(), shift.size());
  check_point("project_shifted", inner, y);
  return project_unchecked(inner, y - shift) + shift;
}

Vector modified_reflect(const ConvexSet& set, const Vector& x, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw InvalidInput("modified_reflect: beta must lie in (0, 1], got " +
                       std::to_string(beta));
  }
  check_point("modified_reflect", set, x);
  return 2.0 * beta * project_unchecked(set, x) - x;
}

double distance(const ConvexSet& set, const Vector& x) {
  check_point("distance", set, x);
  return (x - project_unchecked(set, x)).norm();
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  if (!(tol >= 0.0)) throw InvalidInput("contains: tol must be >= 0");
  return distance(set, x) <= tol;
}

double interior_slack(const ConvexSet& set, const Vector& x) {
  check_point("interior_slack", set, x);
  return slack_unchecked(set, x);
}

bool interior_contains(const ConvexSet& set, const Vector& x, double margin) {
  if (!(margin > 0.0)) throw InvalidInput("interior_contains: margin must be > 0");
  return interior_slack(set, x) >= margin;
}

}  // namespace aamr
