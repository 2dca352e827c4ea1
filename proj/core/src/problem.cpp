#include "aamr/problem.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include "aamr/matrix.hpp"

namespace aamr {
namespace {

using Json = nlohmann::json;

struct Context {
  std::filesystem::path base_dir;
  Index dimension = 0;
};

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw InvalidInput(field + ": " + msg);
}

void reject_unknown(const Json& obj, const std::string& field,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(field, "unknown key '" + key + "'");
  }
}

const Json& require(const Json& obj, const std::string& field,
                    const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(field, std::string("missing required key '") + key + "'");
  return *it;
}

double parse_real(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(field, "expected a number, got " + j.dump());
}

std::int64_t parse_integer(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
  }
  fail(field, "expected an integer, got " + j.dump());
}

Eigen::MatrixXd parse_dense_matrix(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const auto n = static_cast<Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      fail(rf, "expected a row of " + std::to_string(n) + " numbers");
    }
    for (Index k = 0; k < n; ++k) {
      m(i, k) = parse_real(row[static_cast<std::size_t>(k)], rf);
    }
  }
  return m;
}

Vector parse_point(const Json& j, const std::string& field, const Context& ctx) {
  Vector x;
  if (j.is_array()) {
    x.resize(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      x[static_cast<Index>(i)] = parse_real(j[i], field + "[" + std::to_string(i) + "]");
    }
  } else if (j.is_object() && j.contains("matrix")) {
    reject_unknown(j, field, {"matrix"});
    try {
      x = embed(SymMatrix::from_dense(parse_dense_matrix(j["matrix"], field + ".matrix")));
    } catch (const InvalidInput& e) {
      fail(field, e.what());
    }
  } else if (j.is_object() && j.contains("matrix_file")) {
    reject_unknown(j, field, {"matrix_file"});
    const Json& p = j["matrix_file"];
    if (!p.is_string()) fail(field + ".matrix_file", "expected a path string");
    std::filesystem::path path = p.get<std::string>();
    if (path.is_relative()) path = ctx.base_dir / path;
    if (!std::filesystem::exists(path)) {
      fail(field + ".matrix_file", "file not found: " + path.string());
    }
    try {
      x = embed(read_matrix_file(path));
    } catch (const InvalidInput& e) {
      fail(field, e.what());
    }
  } else {
    fail(field, "expected a number array or a {\"matrix\"|\"matrix_file\"} object");
  }
  if (ctx.dimension > 0 && x.size() != ctx.dimension) {
    throw DimensionMismatch(field, ctx.dimension, x.size());
  }
  return x;
}

ConvexSet parse_set(const Json& j, const std::string& field, const Context& ctx) {
  if (!j.is_object()) fail(field, "expected a set object");
  const Json& kind_json = require(j, field, "kind");
  if (!kind_json.is_string()) fail(field + ".kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();

  auto real = [&](const char* key) {
    return parse_real(require(j, field, key), field + "." + key);
  };
  auto point = [&](const char* key) {
    return parse_point(require(j, field, key), field + "." + key, ctx);
  };
  auto order = [&]() {
    const std::int64_t n = parse_integer(require(j, field, "order"), field + ".order");
    if (n < 1 || n > 10000) fail(field + ".order", "must be a positive matrix order");
    return static_cast<int>(n);
  };

  try {
    if (kind == "hyperplane" || kind == "halfspace") {
      reject_unknown(j, field, {"kind", "normal", "offset"});
      Vector normal = point("normal");
      const double offset = real("offset");
      return kind == "hyperplane" ? ConvexSet::hyperplane(std::move(normal), offset)
                                  : ConvexSet::halfspace(std::move(normal), offset);
    }
    if (kind == "box") {
      reject_unknown(j, field, {"kind", "lower", "upper"});
      return ConvexSet::box(point("lower"), point("upper"));
    }
    if (kind == "ball") {
      reject_unknown(j, field, {"kind", "center", "radius"});
      return ConvexSet::ball(point("center"), real("radius"));
    }
    if (kind == "affine") {
      reject_unknown(j, field, {"kind", "rows", "rhs"});
      const Json& rows = require(j, field, "rows");
      if (!rows.is_array() || rows.empty()) {
        fail(field + ".rows", "expected a non-empty array of points");
      }
      Eigen::MatrixXd m(static_cast<Index>(rows.size()), ctx.dimension);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        m.row(static_cast<Index>(i)) =
            parse_point(rows[i], field + ".rows[" + std::to_string(i) + "]", ctx)
                .transpose();
      }
      Vector rhs = [&] {
        Context flat = ctx;
        flat.dimension = 0;
        return parse_point(require(j, field, "rhs"), field + ".rhs", flat);
      }();
      if (rhs.size() != m.rows()) throw DimensionMismatch(field + ".rhs", m.rows(), rhs.size());
      return ConvexSet::affine(std::move(m), std::move(rhs));
    }
    if (kind == "psd_cone") {
      reject_unknown(j, field, {"kind", "order"});
      return ConvexSet::psd_cone(order());
    }
    if (kind == "spectral_box") {
      reject_unknown(j, field, {"kind", "order", "eig_lower", "eig_upper"});
      const int n = order();
      return ConvexSet::spectral_box(n, real("eig_lower"), real("eig_upper"));
    }
    if (kind == "nonneg_orthant") {
      reject_unknown(j, field, {"kind"});
      return ConvexSet::nonneg_orthant(ctx.dimension);
    }
    if (kind == "shifted") {
      reject_unknown(j, field, {"kind", "inner", "shift"});
      ConvexSet inner = parse_set(require(j, field, "inner"), field + ".inner", ctx);
      return ConvexSet::shifted(std::move(inner), point("shift"));
    }
  } catch (const DimensionMismatch&) {
    throw;
  } catch (const InvalidInput& e) {
    const std::string what = e.what();
    // Nested parse errors already carry their field path.
    if (what.rfind(field, 0) == 0) throw;
    fail(field, what);
  }
  fail(field + ".kind", "unknown set kind '" + kind + "'");
}

ProblemFile parse_root(const Json& root, const Context& base) {
  if (!root.is_object()) fail("problem", "top level must be a JSON object");
  reject_unknown(root, "problem",
                 {"dimension", "A", "B", "q", "x0", "params", "finite_term"});
  Context ctx = base;
  const std::int64_t dim = parse_integer(require(root, "problem", "dimension"), "dimension");
  if (dim < 1) fail("dimension", "must be >= 1");
  ctx.dimension = static_cast<Index>(dim);

  ConvexSet a = parse_set(require(root, "problem", "A"), "A", ctx);
  ConvexSet b = parse_set(require(root, "problem", "B"), "B", ctx);
  if (a.dimension() != ctx.dimension) throw DimensionMismatch("A", ctx.dimension, a.dimension());
  if (b.dimension() != ctx.dimension) throw DimensionMismatch("B", ctx.dimension, b.dimension());

  Vector q = parse_point(require(root, "problem", "q"), "q", ctx);
  require_finite("q", q);
  Vector x0 = root.contains("x0") ? parse_point(root["x0"], "x0", ctx)
                                  : Vector::Zero(ctx.dimension);
  require_finite("x0", x0);

  ParamOverrides params;
  if (root.contains("params")) {
    const Json& p = root["params"];
    if (!p.is_object()) fail("params", "expected an object");
    reject_unknown(p, "params", {"alpha", "beta", "max_iter", "fp_tol"});
    if (p.contains("alpha")) params.alpha = parse_real(p["alpha"], "params.alpha");
    if (p.contains("beta")) params.beta = parse_real(p["beta"], "params.beta");
    if (p.contains("max_iter")) params.max_iter = parse_integer(p["max_iter"], "params.max_iter");
    if (p.contains("fp_tol")) params.fp_tol = parse_real(p["fp_tol"], "params.fp_tol");
  }

  std::optional<FiniteTermSpec> finite_term;
  if (root.contains("finite_term")) {
    const Json& f = root["finite_term"];
    if (!f.is_object()) fail("finite_term", "expected an object");
    reject_unknown(f, "finite_term", {"e", "gamma", "margin"});
    FiniteTermSpec spec;
    spec.e = parse_point(require(f, "finite_term", "e"), "finite_term.e", ctx);
    require_finite("finite_term.e", spec.e);
    spec.gamma = parse_real(require(f, "finite_term", "gamma"), "finite_term.gamma");
    if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) fail("finite_term.gamma", "must be > 0");
    if (f.contains("margin")) {
      spec.margin = parse_real(f["margin"], "finite_term.margin");
      if (!(spec.margin > 0.0) || !std::isfinite(spec.margin)) fail("finite_term.margin", "must be > 0");
    }
    finite_term = std::move(spec);
  }

  ProblemFile problem{ctx.dimension, std::move(a),      std::move(b),
                      std::move(q),  std::move(x0),     params,
                      std::move(finite_term)};
  // Surface invalid alpha/beta/tolerances at load time.
  make_params(problem).validate(problem.dimension);
  return problem;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text,
                               const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidInput("parse error at line " + std::to_string(line) +
                       ", column " + std::to_string(col) + ": " + e.what());
  }
  return parse_root(root, Context{base_dir, 0});
}

ProblemFile parse_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem_text(buf.str(), path.parent_path());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

AamrParams make_params(const ProblemFile& problem) {
  AamrParams p;
  p.alpha = problem.params.alpha.value_or(kDefaultAlpha);
  p.beta = problem.params.beta.value_or(kDefaultBeta);
  p.max_iter = problem.params.max_iter.value_or(kDefaultMaxIter);
  p.fp_tol = problem.params.fp_tol.value_or(kDefaultFpTol);
  p.q = problem.q;
  p.x0 = problem.x0;
  return p;
}

}  // namespace aamr
