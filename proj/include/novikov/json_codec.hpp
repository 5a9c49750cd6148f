#ifndef NOVIKOV_JSON_CODEC_HPP
#define NOVIKOV_JSON_CODEC_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/int_poly.hpp"
#include "novikov/laurent_series.hpp"
#include "novikov/novikov_rational.hpp"
#include "novikov/transfer.hpp"

namespace novikov {

using json = nlohmann::json;

// Integers travel as base-10 strings so the round trip is bit-exact at any
// precision.

inline json to_json(const Int& v) { return v.get_str(); }

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (!j.is_string()) throw invalid_params("expected integer string");
  try {
    return Int(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw invalid_params("malformed integer string: " + j.get<std::string>());
  }
}

inline json to_json(const IntPoly& p) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(c.get_str());
  return arr;
}

inline IntPoly poly_from_json(const json& j) {
  if (!j.is_array()) throw invalid_params("polynomial must be an array of integer strings");
  std::vector<Int> c;
  c.reserve(j.size());
  for (const auto& e : j) c.push_back(int_from_json(e));
  return IntPoly(std::move(c));
}

inline json to_json(const LaurentSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(c.get_str());
  return json{{"lead", s.lead()}, {"coeffs", coeffs}, {"truncation", s.truncation()}};
}

inline LaurentSeries series_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lead") || !j.contains("coeffs"))
    throw invalid_params("series must be {lead, coeffs, truncation}");
  long lead = j.at("lead").get<long>();
  std::vector<Int> c;
  for (const auto& e : j.at("coeffs")) c.push_back(int_from_json(e));
  if (j.contains("truncation") && j.at("truncation").get<std::size_t>() != c.size())
    throw invalid_params("series truncation does not match coefficient count");
  return LaurentSeries(lead, std::move(c));
}

inline json to_json(const NovikovRational& r) {
  return json{{"P", to_json(r.numerator())},
              {"m", r.shift()},
              {"Q", to_json(r.denominator())}};
}

inline NovikovRational rational_from_json(const json& j) {
  if (!j.is_object() || !j.contains("P") || !j.contains("Q"))
    throw invalid_params("rational must be {P, m, Q}");
  long m = j.contains("m") ? j.at("m").get<long>() : 0;
  return NovikovRational(poly_from_json(j.at("P")), m, poly_from_json(j.at("Q")));
}

inline json to_json(const MonodromyData& d) {
  json h = json::array();
  for (std::size_t i = 0; i < d.h.rank(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < d.h.rank(); ++j) row.push_back(d.h.at(i, j).get_str());
    h.push_back(row);
  }
  json lambda = json::array(), p = json::array();
  for (const auto& v : d.lambda) lambda.push_back(v.get_str());
  for (const auto& v : d.p) p.push_back(v.get_str());
  return json{{"h", h}, {"lambda", lambda}, {"p", p}, {"m", d.shift}};
}

inline MonodromyData monodromy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("h") || !j.contains("lambda") || !j.contains("p"))
    throw invalid_params("monodromy data must be {h, lambda, p, m}");
  const json& hj = j.at("h");
  if (!hj.is_array() || hj.empty()) throw invalid_params("h must be a nonempty square matrix");
  std::size_t r = hj.size();
  std::vector<Int> entries;
  entries.reserve(r * r);
  for (const auto& row : hj) {
    if (!row.is_array() || row.size() != r) throw invalid_params("h must be square");
    for (const auto& e : row) entries.push_back(int_from_json(e));
  }
  std::vector<Int> lambda, p;
  for (const auto& e : j.at("lambda")) lambda.push_back(int_from_json(e));
  for (const auto& e : j.at("p")) p.push_back(int_from_json(e));
  long m = j.contains("m") ? j.at("m").get<long>() : 0;
  if (lambda.size() != r || p.size() != r)
    throw dimension_mismatch("lambda/p length does not match h");
  return MonodromyData{Endomorphism(r, std::move(entries)), std::move(lambda), std::move(p), m};
}

}  // namespace novikov

#endif
