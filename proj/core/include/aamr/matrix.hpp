#ifndef AAMR_MATRIX_HPP_
#define AAMR_MATRIX_HPP_

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "aamr/error.hpp"

namespace aamr {

// Real symmetric matrix with packed upper-triangular storage.
//
// Symmetric matrices are mapped onto coordinate vectors by `embed`: the
// diagonal comes first, then the strictly upper entries row by row, each
// scaled by sqrt(2). The map is an isometry between the Frobenius inner
// product and the Euclidean one, so Euclidean projections in the embedded
// space are Frobenius projections of the matrices.
class SymMatrix {
 public:
  explicit SymMatrix(int order);

  static SymMatrix identity(int order);
  static SymMatrix diagonal(const Vector& diag);
  // Validates |M_ij - M_ji| <= symmetry_tol * max(1, |M_ij|, |M_ji|) and
  // stores (M + M^T) / 2.
  static SymMatrix from_dense(const Eigen::MatrixXd& m,
                              double symmetry_tol = 1e-12);

  int order() const noexcept { return order_; }
  double operator()(int i, int j) const;
  void set(int i, int j, double value);
  Eigen::MatrixXd dense() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t offset(int i, int j) const;

  int order_;
  std::vector<double> upper_;
};

// n(n+1)/2
Index embedded_dimension(int order);
// Inverse of embedded_dimension; throws InvalidInput if `dim` is not a
// triangular number.
int order_from_dimension(Index dim);

Vector embed(const SymMatrix& m);
SymMatrix unembed(const Vector& x, int order);

// Dense helpers used by the projection code paths.
Eigen::MatrixXd dense_from_embedded(const Vector& x, int order);
Vector embedded_from_dense(const Eigen::MatrixXd& m);

// Eigenvalues in ascending order.
Vector eigenvalues(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

// Nearest matrix (Frobenius) whose spectrum lies in [lo, hi]. Either bound
// may be infinite. Eigenvalues within 1e-14 of a bound are snapped to it.
Eigen::MatrixXd clamp_spectrum(const Eigen::MatrixXd& m, double lo, double hi);

SymMatrix psd_project(const SymMatrix& m);
SymMatrix spectral_box_project(const SymMatrix& m, double lo, double hi);

// Text format: first line `n`, then n rows of n whitespace-separated reals.
SymMatrix read_matrix(std::istream& in);
SymMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const SymMatrix& m);

}  // namespace aamr

#endif  // AAMR_MATRIX_HPP_
