#ifndef AAMR_PROBLEM_HPP_
#define AAMR_PROBLEM_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "aamr/error.hpp"
#include "aamr/geometry.hpp"
#include "aamr/solver.hpp"

namespace aamr {

struct ParamOverrides {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::int64_t> max_iter;
  std::optional<double> fp_tol;
};

struct FiniteTermSpec {
  Vector e;
  double gamma = 0.0;
  double margin = kInteriorMargin;
};

struct ProblemFile {
  Index dimension = 0;
  ConvexSet a;
  ConvexSet b;
  Vector q;
  Vector x0;
  ParamOverrides params;
  std::optional<FiniteTermSpec> finite_term;
};

// Problem files are JSON objects:
//
//   {
//     "dimension": 2,
//     "A": {"kind": "hyperplane", "normal": [0, 1], "offset": 0},
//     "B": {"kind": "ball", "center": [0, 0], "radius": 1},
//     "q": [1, 1],
//     "x0": [0, 0],                                   (optional, zero)
//     "params": {"alpha": 0.5, "beta": 0.7,
//                "max_iter": 100000, "fp_tol": 1e-10}, (optional)
//     "finite_term": {"e": [1, 1], "gamma": 0.1,
//                     "margin": 1e-12}                 (optional)
//   }
//
// Set kinds: hyperplane, halfspace {normal, offset}; box {lower, upper};
// ball {center, radius}; affine {rows, rhs}; psd_cone {order};
// spectral_box {order, eig_lower, eig_upper}; nonneg_orthant {};
// shifted {inner, shift}.
//
// A point is a number array ("inf"/"-inf" strings are accepted, e.g. for box
// bounds), or a symmetric matrix in embedded coordinates given either inline
// as {"matrix": [[...], ...]} or as {"matrix_file": "relative/path"} in the
// plain-text matrix format. Relative paths resolve against `base_dir`.
//
// Unknown keys are rejected. Errors throw InvalidInput naming the field.
ProblemFile parse_problem_text(const std::string& text,
                               const std::filesystem::path& base_dir = {});
ProblemFile parse_problem(const std::filesystem::path& path);

// Defaults < file params, with q and x0 from the file.
AamrParams make_params(const ProblemFile& problem);

}  // namespace aamr

#endif  // AAMR_PROBLEM_HPP_
