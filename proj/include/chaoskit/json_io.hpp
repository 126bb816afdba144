#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "chaoskit/kernels.hpp"

namespace chaoskit {

using nlohmann::json;

/// Parse failure with 1-based line/column position inside the input text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line_, std::size_t column_)
      : std::runtime_error(msg), line(line_), column(column_) {}
  std::size_t line;
  std::size_t column;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column_of_byte(const std::string& text,
                                                               std::size_t byte) {
  // `byte` is a 1-based offset as reported by the JSON parser.
  std::size_t line = 1, col = 1;
  const std::size_t stop = byte == 0 ? 0 : byte - 1;
  for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] inline void fail_schema(const std::string& msg) {
  throw ParseError("schema: " + msg, 0, 0);
}

inline mpq_class rational_from_string(const std::string& s, const std::string& where) {
  mpq_class q;
  try {
    q = mpq_class(s);
  } catch (const std::invalid_argument&) {
    fail_schema(where + ": '" + s + "' is not a rational (expected e.g. \"3\" or \"-3/4\")");
  }
  q.canonicalize();
  return q;
}

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

inline Scalar coef_from_json(const json& j, Mode mode, const std::string& where) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    fail_schema(where + ": coef must be an object with 're' and 'im'");
  if (mode == Mode::exact) {
    if (!j["re"].is_string() || !j["im"].is_string())
      fail_schema(where + ": exact mode requires 're'/'im' as rational strings");
    return Scalar::from_exact(rational_from_string(j["re"].get<std::string>(), where + ".re"),
                              rational_from_string(j["im"].get<std::string>(), where + ".im"));
  }
  if (!j["re"].is_number() || !j["im"].is_number())
    fail_schema(where + ": floating mode requires 're'/'im' as numbers");
  return Scalar::from_double(j["re"].get<double>(), j["im"].get<double>());
}

inline json coef_to_json(const Scalar& c) {
  json j;
  if (c.mode() == Mode::exact) {
    j["re"] = rational_to_string(c.re_exact());
    j["im"] = rational_to_string(c.im_exact());
  } else {
    j["re"] = c.to_complex_double().real();
    j["im"] = c.to_complex_double().imag();
  }
  return j;
}

inline int index_from_key(const std::string& key, const std::string& where) {
  std::size_t pos = 0;
  int k = 0;
  try {
    k = std::stoi(key, &pos);
  } catch (const std::exception&) {
    fail_schema(where + ": index key '" + key + "' is not an integer");
  }
  if (pos != key.size()) fail_schema(where + ": index key '" + key + "' is not an integer");
  if (k <= 0) fail_schema(where + ": basis indices must be positive, got " + key);
  return k;
}

inline int count_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    fail_schema(where + ": multiplicity must be a positive integer");
  const auto n = j.get<long long>();
  if (n <= 0) fail_schema(where + ": multiplicity must be positive");
  return static_cast<int>(n);
}

inline IndexMultiset index_list_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail_schema(where + " must be an array of positive indices");
  IndexMultiset m;
  for (const auto& e : j) {
    if (!e.is_number_integer()) fail_schema(where + ": entries must be integers");
    const auto k = e.get<long long>();
    if (k <= 0) fail_schema(where + ": basis indices must be positive");
    m[static_cast<int>(k)] += 1;
  }
  return m;
}

inline json index_list_to_json(const IndexMultiset& m) {
  json arr = json::array();
  for (const auto& [k, c] : m)
    for (int i = 0; i < c; ++i) arr.push_back(k);
  return arr;
}

}  // namespace detail

inline Mode mode_from_json(const json& j) {
  if (!j.contains("mode") || !j["mode"].is_string())
    detail::fail_schema("top level needs \"mode\": \"exact\" or \"float\"");
  const std::string m = j["mode"].get<std::string>();
  if (m == "exact") return Mode::exact;
  if (m == "float") return Mode::floating;
  detail::fail_schema("unknown mode '" + m + "' (expected \"exact\" or \"float\")");
}

/// Parse text as JSON; on malformed input throw ParseError carrying the
/// 1-based line/column of the offending byte.
inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column_of_byte(text, e.byte);
    throw ParseError(std::string("JSON parse error at line ") + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what(),
                     line, col);
  }
}

// --- real kernels -----------------------------------------------------------

inline json to_json(const RealKernel& k) {
  json j;
  j["space"] = "real";
  j["degree"] = k.degree;
  j["mode"] = mode_name(k.mode);
  json terms = json::array();
  for (const auto& [m, c] : k.terms) {
    json u = json::object(), v = json::object();
    for (const auto& [label, count] : m.mult) {
      json& side = label.kind == BasisLabel::Kind::U ? u : v;
      side[std::to_string(label.index)] = count;
    }
    json mono = json::object();
    if (!u.empty()) mono["U"] = u;
    if (!v.empty()) mono["V"] = v;
    terms.push_back({{"monomial", mono}, {"coef", detail::coef_to_json(c)}});
  }
  j["terms"] = terms;
  return j;
}

inline RealKernel real_kernel_from_json(const json& j) {
  if (!j.is_object()) detail::fail_schema("kernel must be a JSON object");
  if (!j.contains("space") || j["space"] != "real")
    detail::fail_schema("real kernel needs \"space\": \"real\"");
  if (!j.contains("degree") || !j["degree"].is_number_integer())
    detail::fail_schema("real kernel needs an integer \"degree\"");
  const int degree = j["degree"].get<int>();
  if (degree < 0) detail::fail_schema("degree must be nonnegative");
  const Mode mode = mode_from_json(j);
  RealKernel k = RealKernel::zero(degree, mode);
  if (!j.contains("terms") || !j["terms"].is_array())
    detail::fail_schema("kernel needs a \"terms\" array");
  std::size_t t = 0;
  for (const auto& term : j["terms"]) {
    const std::string where = "terms[" + std::to_string(t++) + "]";
    if (!term.is_object() || !term.contains("monomial") || !term.contains("coef"))
      detail::fail_schema(where + " must have 'monomial' and 'coef'");
    const json& mono = term["monomial"];
    if (!mono.is_object()) detail::fail_schema(where + ".monomial must be an object");
    RealMultiIndex m;
    for (const auto& [side, kind] :
         {std::pair<const char*, BasisLabel::Kind>{"U", BasisLabel::Kind::U},
          std::pair<const char*, BasisLabel::Kind>{"V", BasisLabel::Kind::V}}) {
      if (!mono.contains(side)) continue;
      const json& block = mono[side];
      if (!block.is_object())
        detail::fail_schema(where + ".monomial." + side + " must map indices to counts");
      for (const auto& [key, val] : block.items()) {
        const int idx = detail::index_from_key(key, where + ".monomial." + side);
        m.add(BasisLabel{kind, idx},
              detail::count_from_json(val, where + ".monomial." + side));
      }
    }
    for (const auto& key : mono.items())
      if (key.key() != "U" && key.key() != "V")
        detail::fail_schema(where + ".monomial: unknown key '" + key.key() + "'");
    k.add_term(m, detail::coef_from_json(term["coef"], mode, where + ".coef"));
  }
  return k;
}

// --- complex kernels ---------------------------------------------------------

inline json to_json(const ComplexKernel& k) {
  json j;
  j["space"] = "complex";
  j["bidegree"] = json::array({k.p, k.q});
  j["mode"] = mode_name(k.mode);
  json terms = json::array();
  for (const auto& [m, c] : k.terms) {
    json mono;
    mono["holo"] = detail::index_list_to_json(m.holo);
    mono["anti"] = detail::index_list_to_json(m.anti);
    terms.push_back({{"monomial", mono}, {"coef", detail::coef_to_json(c)}});
  }
  j["terms"] = terms;
  return j;
}

inline ComplexKernel complex_kernel_from_json(const json& j) {
  if (!j.is_object()) detail::fail_schema("kernel must be a JSON object");
  if (!j.contains("space") || j["space"] != "complex")
    detail::fail_schema("complex kernel needs \"space\": \"complex\"");
  if (!j.contains("bidegree") || !j["bidegree"].is_array() || j["bidegree"].size() != 2 ||
      !j["bidegree"][0].is_number_integer() || !j["bidegree"][1].is_number_integer())
    detail::fail_schema("complex kernel needs \"bidegree\": [p, q]");
  const int p = j["bidegree"][0].get<int>();
  const int q = j["bidegree"][1].get<int>();
  if (p < 0 || q < 0) detail::fail_schema("bidegree entries must be nonnegative");
  const Mode mode = mode_from_json(j);
  ComplexKernel k = ComplexKernel::zero(p, q, mode);
  if (!j.contains("terms") || !j["terms"].is_array())
    detail::fail_schema("kernel needs a \"terms\" array");
  std::size_t t = 0;
  for (const auto& term : j["terms"]) {
    const std::string where = "terms[" + std::to_string(t++) + "]";
    if (!term.is_object() || !term.contains("monomial") || !term.contains("coef"))
      detail::fail_schema(where + " must have 'monomial' and 'coef'");
    const json& mono = term["monomial"];
    if (!mono.is_object() || !mono.contains("holo") || !mono.contains("anti"))
      detail::fail_schema(where + ".monomial must have 'holo' and 'anti' arrays");
    ComplexMultiIndex m;
    m.holo = detail::index_list_from_json(mono["holo"], where + ".monomial.holo");
    m.anti = detail::index_list_from_json(mono["anti"], where + ".monomial.anti");
    k.add_term(m, detail::coef_from_json(term["coef"], mode, where + ".coef"));
  }
  return k;
}

// --- generic entry point ------------------------------------------------------

using KernelVariant = std::variant<RealKernel, ComplexKernel>;

/// Dispatch on the "space" field.
inline KernelVariant kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space") || !j["space"].is_string())
    detail::fail_schema("kernel needs \"space\": \"real\" or \"complex\"");
  const std::string space = j["space"].get<std::string>();
  if (space == "real") return real_kernel_from_json(j);
  if (space == "complex") return complex_kernel_from_json(j);
  detail::fail_schema("unknown space '" + space + "'");
}

}  // namespace chaoskit
