#pragma once

#include <json.hpp>

#include "iterlab/formal/poly.hpp"
#include "iterlab/formal/series.hpp"

namespace iterlab::formal {

// Numbers are always emitted as strings: "num/den" for rationals and the
// round-trip decimal form for reals.

inline nlohmann::json coefficient_json(const Rational& q) { return q.to_string(); }
inline nlohmann::json coefficient_json(const Real& x) { return x.to_string(); }

template <CoefficientRing R>
nlohmann::json coefficient_json(const Poly<R>& p);

template <CoefficientRing R>
nlohmann::json to_json(const Poly<R>& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(coefficient_json(c));
  return {{"symbol", p.symbol()}, {"coefficients", coeffs}};
}

template <CoefficientRing R>
nlohmann::json coefficient_json(const Poly<R>& p) {
  return to_json(p);
}

template <CoefficientRing R>
nlohmann::json to_json(const Series<R>& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : s.coefficients()) coeffs.push_back(coefficient_json(c));
  nlohmann::json out = {{"variable", s.variable()}, {"order", s.order()}, {"coefficients", coeffs}};
  out["principal"] = s.principal() ? coefficient_json(*s.principal()) : nlohmann::json(nullptr);
  out["log"] = s.log_coefficient() ? coefficient_json(*s.log_coefficient()) : nlohmann::json(nullptr);
  return out;
}

}  // namespace iterlab::formal
