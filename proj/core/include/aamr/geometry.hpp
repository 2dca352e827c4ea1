#ifndef AAMR_GEOMETRY_HPP_
#define AAMR_GEOMETRY_HPP_

#include <Eigen/Core>

#include <memory>
#include <string_view>
#include <variant>

#include "aamr/error.hpp"

namespace aamr {

inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kInteriorMargin = 1e-12;

// {x : <normal, x> = offset}
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
};

// {x : <normal, x> <= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

// Componentwise lower <= x <= upper; bounds may be infinite.
struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

// {x : rows * x = rhs}. The pseudo-inverse of `rows` is computed once at
// construction with a singular-value cutoff of 1e-10 * sigma_max.
struct AffineSubspace {
  Eigen::MatrixXd rows;
  Vector rhs;
  Eigen::MatrixXd pseudo_inverse;
};

// Positive semidefinite cone of order-n symmetric matrices, embedded.
struct PsdCone {
  int order = 1;
};

// Symmetric matrices with spectrum in [eig_lower, eig_upper], embedded.
struct SpectralBox {
  int order = 1;
  double eig_lower = 0.0;
  double eig_upper = 1.0;
};

struct NonnegOrthant {
  Index dimension = 1;
};

class ConvexSet;

// inner + shift
struct Shifted {
  std::shared_ptr<const ConvexSet> inner;
  Vector shift;
};

// Immutable description of a nonempty closed convex set with an exact
// metric projection. Construct through the named factories, which check
// every invariant and throw InvalidInput on violation.
class ConvexSet {
 public:
  using Variant = std::variant<Hyperplane, Halfspace, Box, Ball,
                               AffineSubspace, PsdCone, SpectralBox,
                               NonnegOrthant, Shifted>;

  static ConvexSet hyperplane(Vector normal, double offset);
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet affine(Eigen::MatrixXd rows, Vector rhs);
  static ConvexSet psd_cone(int order);
  static ConvexSet spectral_box(int order, double eig_lower, double eig_upper);
  static ConvexSet nonneg_orthant(Index dimension);
  static ConvexSet shifted(ConvexSet inner, Vector shift);
  // Box with infinite bounds.
  static ConvexSet whole_space(Index dimension);

  Index dimension() const noexcept { return dimension_; }
  const Variant& variant() const noexcept { return set_; }
  std::string_view kind() const;

  // True for the variants whose data describe a closed convex cone
  // (orthant, PSD cone, homogeneous half-spaces/hyperplanes/subspaces, boxes
  // with bounds in {0, +-inf}, and zero shifts of those).
  bool is_cone() const;

 private:
  ConvexSet(Variant set, Index dimension)
      : set_(std::move(set)), dimension_(dimension) {}

  Variant set_;
  Index dimension_;
};

Vector project(const ConvexSet& set, const Vector& x);

// P_{inner + shift}(y) = P_inner(y - shift) + shift
Vector project_shifted(const ConvexSet& inner, const Vector& shift,
                       const Vector& y);

// 2 * beta * P(x) - x, beta in (0, 1].
Vector modified_reflect(const ConvexSet& set, const Vector& x, double beta);

double distance(const ConvexSet& set, const Vector& x);
bool contains(const ConvexSet& set, const Vector& x,
              double tol = kMembershipTol);

// Radius of the largest ball around x contained in the set, negative when x
// is outside; -inf for sets with empty interior (hyperplanes, affine
// subspaces). For PsdCone this is the minimum eigenvalue.
double interior_slack(const ConvexSet& set, const Vector& x);
bool interior_contains(const ConvexSet& set, const Vector& x,
                       double margin = kInteriorMargin);

}  // namespace aamr

#endif  // AAMR_GEOMETRY_HPP_
