#ifndef TCMAP_DOMAIN_IO_HPP
#define TCMAP_DOMAIN_IO_HPP

// Domain-spec files:
//   {"outer": curve, "inner": curve, "reference_point": [re, im]}
// with curve = {"fourier": [[n, re, im], ...]} for z(t) = sum (re + i im) e^{int}
// or {"samples": [[re, im], ...]} at equispaced t. reference_point is optional.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tcmap/domain_geometry.hpp"
#include "tcmap/error.hpp"
#include "tcmap/spectral.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

inline constexpr std::size_t kDefaultNodes = 256;

namespace detail {

inline int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline double number_at(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError("field '" + field + "' must be a number");
  return v.get<double>();
}

inline Complex complex_pair(const nlohmann::json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw ParseError("field '" + field + "' must be a [re, im] pair");
  return {number_at(v[0], field + "[0]"), number_at(v[1], field + "[1]")};
}

inline Curve parse_curve(const nlohmann::json& spec, const std::string& name, CurveRole role, std::size_t nodes) {
  if (!spec.is_object()) throw ParseError("field '" + name + "' must be an object");
  const bool has_fourier = spec.contains("fourier");
  const bool has_samples = spec.contains("samples");
  if (has_fourier == has_samples)
    throw ParseError("field '" + name + "' needs exactly one of 'fourier' or 'samples'");
  if (has_fourier) {
    const auto& list = spec["fourier"];
    if (!list.is_array() || list.empty()) throw ParseError("field '" + name + ".fourier' must be a non-empty array");
    std::vector<FourierTerm> terms;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string f = name + ".fourier[" + std::to_string(i) + "]";
      const auto& t = list[i];
      if (!t.is_array() || t.size() != 3) throw ParseError("field '" + f + "' must be [n, re, im]");
      if (!t[0].is_number_integer()) throw ParseError("field '" + f + "[0]' must be an integer");
      terms.push_back({t[0].get<int>(), {number_at(t[1], f), number_at(t[2], f)}});
    }
    return curve_from_fourier(terms, nodes, role);
  }
  const auto& list = spec["samples"];
  if (!list.is_array()) throw ParseError("field '" + name + ".samples' must be an array");
  std::vector<Complex> samples;
  for (std::size_t i = 0; i < list.size(); ++i)
    samples.push_back(complex_pair(list[i], name + ".samples[" + std::to_string(i) + "]"));
  return curve_from_samples(samples, nodes, role);
}

}  // namespace detail

inline TwoConnectedDomain parse_domain_spec(const std::string& text, std::size_t nodes = kDefaultNodes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!doc.is_object()) throw ParseError("top level must be a JSON object", 1);
  for (const char* key : {"outer", "inner"})
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  for (const auto& item : doc.items())
    if (item.key() != "outer" && item.key() != "inner" && item.key() != "reference_point")
      throw ParseError("unknown field '" + item.key() + "'");
  Curve outer = detail::parse_curve(doc["outer"], "outer", CurveRole::outer, nodes);
  Curve inner = detail::parse_curve(doc["inner"], "inner", CurveRole::inner, nodes);
  std::optional<Complex> ref;
  if (doc.contains("reference_point")) ref = detail::complex_pair(doc["reference_point"], "reference_point");
  return TwoConnectedDomain(std::move(outer), std::move(inner), ref);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TwoConnectedDomain load_domain(const std::string& path, std::size_t nodes = kDefaultNodes) {
  return parse_domain_spec(read_text_file(path), nodes);
}

/// Samples form of a domain, readable by parse_domain_spec.
inline nlohmann::json domain_to_json(const TwoConnectedDomain& domain) {
  auto samples = [](const Curve& c) {
    nlohmann::json list = nlohmann::json::array();
    for (auto z : c.samples()) list.push_back({z.real(), z.imag()});
    return nlohmann::json{{"samples", list}};
  };
  const Complex ref = domain.reference_point();
  return {{"outer", samples(domain.outer())},
          {"inner", samples(domain.inner())},
          {"reference_point", {ref.real(), ref.imag()}}};
}

}  // namespace tcmap

#endif  // TCMAP_DOMAIN_IO_HPP
