#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "starsolve/matrix.hpp"
#include "starsolve/rect_embedding.hpp"
#include "starsolve/solvers.hpp"

namespace starsolve::io {

using json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1";

/// Malformed input: bad JSON, wrong schema, or inconsistent shapes.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Backend { exact, floating };

inline std::string_view to_string(Backend b) { return b == Backend::exact ? "exact" : "float"; }

inline Backend parse_backend(std::string_view s) {
  if (s == "exact") return Backend::exact;
  if (s == "float") return Backend::floating;
  throw ParseError("unknown backend '" + std::string(s) + "'");
}

inline Involution parse_involution(std::string_view s) {
  if (s == "conjugate_transpose") return Involution::conjugate_transpose;
  if (s == "transpose") return Involution::transpose;
  throw ParseError("unknown involution '" + std::string(s) + "'");
}

/// Instance kinds accepted by the CLI.
enum class InstanceKind { minus, plus, sym_right, sym_left, rect_minus, rect_plus };

inline std::string_view to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::minus: return "minus";
    case InstanceKind::plus: return "plus";
    case InstanceKind::sym_right: return "sym_right";
    case InstanceKind::sym_left: return "sym_left";
    case InstanceKind::rect_minus: return "rect_minus";
    case InstanceKind::rect_plus: return "rect_plus";
  }
  return "?";
}

inline InstanceKind parse_kind(std::string_view s) {
  for (auto k : {InstanceKind::minus, InstanceKind::plus, InstanceKind::sym_right, InstanceKind::sym_left,
                 InstanceKind::rect_minus, InstanceKind::rect_plus})
    if (to_string(k) == s) return k;
  throw ParseError("unknown kind '" + std::string(s) + "'");
}

inline bool is_rect(InstanceKind k) { return k == InstanceKind::rect_minus || k == InstanceKind::rect_plus; }
inline bool is_symmetric(InstanceKind k) { return k == InstanceKind::sym_right || k == InstanceKind::sym_left; }

inline Sign sign_of(InstanceKind k) {
  return (k == InstanceKind::minus || k == InstanceKind::rect_minus) ? Sign::minus : Sign::plus;
}

inline EquationKind equation_kind(InstanceKind k) {
  switch (k) {
    case InstanceKind::minus:
    case InstanceKind::rect_minus: return EquationKind::minus;
    case InstanceKind::plus:
    case InstanceKind::rect_plus: return EquationKind::plus;
    case InstanceKind::sym_right: return EquationKind::sym_right;
    case InstanceKind::sym_left: return EquationKind::sym_left;
  }
  return EquationKind::minus;
}

/// Operand names per kind: (a, b, c) for minus/plus, (a, b) for the
/// symmetric kinds where b is the right-hand side, (A, B, C) for rect kinds.
inline std::vector<std::string> operand_names(InstanceKind k) {
  if (is_rect(k)) return {"A", "B", "C"};
  if (is_symmetric(k)) return {"a", "b"};
  return {"a", "b", "c"};
}

// ---- scalars and matrices ----

inline json to_json(const GaussianRational& z) {
  return json::array({z.re().numerator_string(), z.re().denominator_string(), z.im().numerator_string(),
                      z.im().denominator_string()});
}

inline json to_json(const ComplexFloat& z) { return json::array({z.re(), z.im()}); }

template <Scalar S>
json to_json(const Matrix<S>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string integer_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError("exact entry components must be decimal integer strings");
}

template <Scalar S>
S scalar_from_json(const json& j);

template <>
inline GaussianRational scalar_from_json<GaussianRational>(const json& j) {
  if (!j.is_array() || j.size() != 4) throw ParseError("exact entry must be [re_num, re_den, im_num, im_den]");
  try {
    return {Rational::from_strings(integer_string(j[0]), integer_string(j[1])),
            Rational::from_strings(integer_string(j[2]), integer_string(j[3]))};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(e.what());
  }
}

template <>
inline ComplexFloat scalar_from_json<ComplexFloat>(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("float entry must be [re, im]");
  try {
    return {j[0].get<double>(), j[1].get<double>()};
  } catch (const std::domain_error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace detail

/// Parses a list of rows. Every row must have the same length.
template <Scalar S>
Matrix<S> matrix_from_json(const json& j, Involution inv) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  std::vector<S> e;
  e.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw ParseError("matrix rows must have equal length");
    for (const auto& x : row) e.push_back(detail::scalar_from_json<S>(x));
  }
  try {
    return Matrix<S>(rows, cols, std::move(e), inv);
  } catch (const InvolutionError& err) {
    throw ParseError(err.what());
  }
}

// ---- instance files ----

/// A parsed problem instance. Operands are held for the file's backend only.
struct InstanceFile {
  std::string version{kFormatVersion};
  InstanceKind kind = InstanceKind::minus;
  Backend backend = Backend::exact;
  Involution involution = Involution::conjugate_transpose;
  std::map<std::string, Matrix<GaussianRational>> exact_operands;
  std::map<std::string, Matrix<ComplexFloat>> float_operands;
  std::optional<RectDims> dims;
  std::optional<std::uint64_t> seed;

  template <Scalar S>
  const std::map<std::string, Matrix<S>>& operands() const {
    if constexpr (is_exact_v<S>)
      return exact_operands;
    else
      return float_operands;
  }
  template <Scalar S>
  std::map<std::string, Matrix<S>>& operands() {
    if constexpr (is_exact_v<S>)
      return exact_operands;
    else
      return float_operands;
  }
  template <Scalar S>
  const Matrix<S>& operand(const std::string& name) const {
    return operands<S>().at(name);
  }

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

namespace detail {

template <Scalar S>
void check_shapes(const InstanceFile& f) {
  const auto& ops = f.operands<S>();
  const auto& a = ops.at(is_rect(f.kind) ? "A" : "a");
  const auto& b = ops.at(is_rect(f.kind) ? "B" : "b");
  if (is_rect(f.kind)) {
    RectProblem<S> p{a, b, ops.at("C")};
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    if (f.dims && !(*f.dims == p.dims())) throw ParseError("dims do not match operand shapes");
    return;
  }
  const std::size_t n = a.rows();
  if (!a.is_square()) throw ParseError("operand a must be square");
  if (b.rows() != n || b.cols() != n) throw ParseError("operand b must match a's shape");
  if (!is_symmetric(f.kind)) {
    const auto& c = ops.at("c");
    if (c.rows() != n || c.cols() != n) throw ParseError("operand c must match a's shape");
  }
}

}  // namespace detail

inline InstanceFile instance_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    InstanceFile f;
    f.version = j.at("version").get<std::string>();
    if (f.version != kFormatVersion) throw ParseError("unsupported format version '" + f.version + "'");
    f.kind = parse_kind(j.at("kind").get<std::string>());
    f.backend = parse_backend(j.at("backend").get<std::string>());
    f.involution = parse_involution(j.at("involution").get<std::string>());
    const auto& ops = j.at("operands");
    if (!ops.is_object()) throw ParseError("operands must be an object");
    for (const auto& name : operand_names(f.kind)) {
      if (!ops.contains(name)) throw ParseError("missing operand '" + name + "'");
      if (f.backend == Backend::exact)
        f.exact_operands.emplace(name, matrix_from_json<GaussianRational>(ops.at(name), f.involution));
      else
        f.float_operands.emplace(name, matrix_from_json<ComplexFloat>(ops.at(name), f.involution));
    }
    if (j.contains("dims")) {
      if (!is_rect(f.kind)) throw ParseError("dims are only valid for rect kinds");
      const auto& d = j.at("dims");
      if (!d.is_array() || d.size() != 3) throw ParseError("dims must be [m, n, p]");
      f.dims = RectDims{d[0].get<std::size_t>(), d[1].get<std::size_t>(), d[2].get<std::size_t>()};
    }
    if (j.contains("seed")) f.seed = j.at("seed").get<std::uint64_t>();
    if (f.backend == Backend::exact)
      detail::check_shapes<GaussianRational>(f);
    else
      detail::check_shapes<ComplexFloat>(f);
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance schema: ") + e.what());
  }
}

inline json to_json(const InstanceFile& f) {
  json ops = json::object();
  for (const auto& [name, m] : f.exact_operands) ops[name] = to_json(m);
  for (const auto& [name, m] : f.float_operands) ops[name] = to_json(m);
  json j = {{"version", f.version},
            {"kind", to_string(f.kind)},
            {"backend", to_string(f.backend)},
            {"involution", to_string(f.involution)},
            {"operands", ops}};
  if (f.dims) j["dims"] = json::array({f.dims->m, f.dims->n, f.dims->p});
  if (f.seed) j["seed"] = *f.seed;
  return j;
}

// ---- files ----

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

inline InstanceFile read_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

}  // namespace starsolve::io
