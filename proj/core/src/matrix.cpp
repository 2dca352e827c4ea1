#include "aamr/matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace aamr {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSnapTol = 1e-14;

void require_order(int order) {
  if (order < 1) {
    throw InvalidInput("matrix order must be >= 1, got " +
                       std::to_string(order));
  }
}

}  // namespace

SymMatrix::SymMatrix(int order) : order_(order) {
  require_order(order);
  upper_.assign(static_cast<std::size_t>(embedded_dimension(order)), 0.0);
}

SymMatrix SymMatrix::identity(int order) {
  SymMatrix m(order);
  for (int i = 0; i < order; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.order(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m,
                                double symmetry_tol) {
  if (m.rows() != m.cols()) {
    throw InvalidInput("matrix is not square (" + std::to_string(m.rows()) +
                       "x" + std::to_string(m.cols()) + ")");
  }
  if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
  SymMatrix out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.order(); ++i) {
    for (int j = i; j < out.order(); ++j) {
      const double a = m(i, j);
      const double b = m(j, i);
      const double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (std::abs(a - b) > symmetry_tol * scale) {
        throw InvalidInput("matrix is not symmetric at (" + std::to_string(i) +
                           "," + std::to_string(j) + ")");
      }
      out.set(i, j, 0.5 * (a + b));
    }
  }
  return out;
}

std::size_t SymMatrix::offset(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= order_) throw InvalidInput("matrix index out of range");
  // Row-major packed upper triangle.
  const auto n = static_cast<std::size_t>(order_);
  const auto r = static_cast<std::size_t>(i);
  return r * n - r * (r - 1) / 2 + static_cast<std::size_t>(j - i);
}

double SymMatrix::operator()(int i, int j) const { return upper_[offset(i, j)]; }

void SymMatrix::set(int i, int j, double value) { upper_[offset(i, j)] = value; }

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd m(order_, order_);
  for (int i = 0; i < order_; ++i) {
    for (int j = i; j < order_; ++j) {
      m(i, j) = m(j, i) = (*this)(i, j);
    }
  }
  return m;
}

Index embedded_dimension(int order) {
  require_order(order);
  return static_cast<Index>(order) * (order + 1) / 2;
}

int order_from_dimension(Index dim) {
  const auto n = static_cast<int>(
      std::lround((std::sqrt(8.0 * static_cast<double>(dim) + 1.0) - 1.0) / 2.0));
  if (dim < 1 || static_cast<Index>(n) * (n + 1) / 2 != dim) {
    throw InvalidInput("dimension " + std::to_string(dim) +
                       " is not n(n+1)/2 for any matrix order n");
  }
  return n;
}

Eigen::MatrixXd dense_from_embedded(const Vector& x, int order) {
  require_dimension("unembed", embedded_dimension(order), x.size());
  Eigen::MatrixXd m(order, order);
  Index k = order;
  for (int i = 0; i < order; ++i) m(i, i) = x[i];
  for (int i = 0; i < order; ++i) {
    for (int j = i + 1; j < order; ++j) {
      m(i, j) = m(j, i) = x[k++] / kSqrt2;
    }
  }
  return m;
}

Vector embedded_from_dense(const Eigen::MatrixXd& m) {
  const auto order = static_cast<int>(m.rows());
  Vector x(embedded_dimension(order));
  Index k = order;
  for (int i = 0; i < order; ++i) x[i] = m(i, i);
  for (int i = 0; i < order; ++i) {
    for (int j = i + 1; j < order; ++j) {
      x[k++] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return x;
}

Vector embed(const SymMatrix& m) { return embedded_from_dense(m.dense()); }

SymMatrix unembed(const Vector& x, int order) {
  // Round trips agree to one ulp in the off-diagonal entries; scaling by
  // sqrt(2) is not invertible in floating point.
  require_dimension("unembed", embedded_dimension(order), x.size());
  SymMatrix m(order);
  Index k = order;
  for (int i = 0; i < order; ++i) m.set(i, i, x[i]);
  for (int i = 0; i < order; ++i) {
    for (int j = i + 1; j < order; ++j) m.set(i, j, x[k++] / kSqrt2);
  }
  return m;
}

Vector eigenvalues(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver failed");
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const SymMatrix& m) { return eigenvalues(m)[0]; }

Eigen::MatrixXd clamp_spectrum(const Eigen::MatrixXd& m, double lo,
                               double hi) {
  if (!(lo <= hi)) throw InvalidInput("spectral bounds require lo <= hi");
  if (!m.allFinite()) throw NumericalFailure("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver failed");
  }
  Vector lambda = solver.eigenvalues();
  bool outside = false;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < lo || lambda[i] > hi) outside = true;
  }
  // The projection of a member is the member itself.
  if (!outside) return m;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] <= lo + kSnapTol) lambda[i] = lo;
    if (lambda[i] >= hi - kSnapTol) lambda[i] = hi;
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd out = v * lambda.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

SymMatrix psd_project(const SymMatrix& m) {
  return spectral_box_project(m, 0.0, std::numeric_limits<double>::infinity());
}

SymMatrix spectral_box_project(const SymMatrix& m, double lo, double hi) {
  return SymMatrix::from_dense(clamp_spectrum(m.dense(), lo, hi), 1e-9);
}

SymMatrix read_matrix(std::istream& in) {
  long long order = 0;
  if (!(in >> order) || order < 1) {
    throw InvalidInput("matrix file: first line must be a positive order n");
  }
  const auto n = static_cast<int>(order);
  Eigen::MatrixXd m(n, n);
  std::string token;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(in >> token)) {
        throw InvalidInput("matrix file: expected " + std::to_string(n * n) +
                           " entries, found " + std::to_string(i * n + j));
      }
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw InvalidInput("matrix file: bad number '" + token + "' at row " +
                           std::to_string(i + 1));
      }
      m(i, j) = v;
    }
  }
  if (in >> token) {
    throw InvalidInput("matrix file: trailing data after " +
                       std::to_string(n * n) + " entries");
  }
  return SymMatrix::from_dense(m);
}

SymMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file " + path.string());
  try {
    return read_matrix(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const SymMatrix& m) {
  std::ostringstream buf;
  buf.precision(17);
  buf << m.order() << '\n';
  for (int i = 0; i < m.order(); ++i) {
    for (int j = 0; j < m.order(); ++j) {
      if (j > 0) buf << ' ';
      buf << m(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

}  // namespace aamr
