#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dbrk/analytic.hpp"
#include "dbrk/errors.hpp"
#include "dbrk/rational.hpp"

namespace dbrk {

// Declarative description of b, as consumed from configuration files:
//   { "factors": [
//       {"kind": "blaschke",     "zero": ["0", "1"], "phase": "0"},
//       {"kind": "point_mass",   "location": "2",    "mass": "0.5"},
//       {"kind": "exp_infinity", "a": "1"},
//       {"kind": "outer_dip",    "dips": [{"center": "3", "half_width": "1", "depth": "0.5"}]},
//       {"kind": "phase",        "alpha": "0.25"}
//     ] }
// Numbers are strings: rationals "p/q" or decimals (parsed exactly); complex
// values are [re, im] pairs.

namespace detail {

inline Rational json_rational(const nlohmann::json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  fail(errc::parse, std::string(what) + " must be a rational string");
}

inline GaussianRational json_complex(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    fail(errc::parse, std::string(what) + " must be a [re, im] pair");
  return {json_rational(j[0], what), json_rational(j[1], what)};
}

}  // namespace detail

inline UnitBallFunction parse_function(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
    fail(errc::parse, "function description needs a \"factors\" array");
  std::vector<Factor> factors;
  Rational phase(0);
  for (const auto& f : j["factors"]) {
    if (!f.is_object() || !f.contains("kind") || !f["kind"].is_string())
      fail(errc::parse, "factor record needs a \"kind\" string");
    const std::string kind = f["kind"].get<std::string>();
    if (kind == "blaschke") {
      BlaschkeFactor bl;
      bl.zero = detail::json_complex(f.at("zero"), "blaschke zero");
      if (f.contains("phase")) bl.phase = detail::json_rational(f["phase"], "blaschke phase");
      factors.push_back(bl);
    } else if (kind == "point_mass") {
      PointMassFactor pm;
      pm.location = detail::json_rational(f.at("location"), "point-mass location");
      pm.mass = detail::json_rational(f.at("mass"), "point-mass mass");
      factors.push_back(pm);
    } else if (kind == "exp_infinity") {
      ExpInfinityFactor ei;
      ei.coefficient = detail::json_rational(f.at("a"), "exp_infinity coefficient");
      factors.push_back(ei);
    } else if (kind == "outer_dip") {
      OuterDipFactor od;
      if (!f.contains("dips") || !f["dips"].is_array())
        fail(errc::parse, "outer_dip factor needs a \"dips\" array");
      for (const auto& d : f["dips"]) {
        Dip dip;
        dip.center = detail::json_rational(d.at("center"), "dip center");
        dip.half_width = detail::json_rational(d.at("half_width"), "dip half-width");
        dip.depth = detail::json_rational(d.at("depth"), "dip depth");
        od.dips.push_back(dip);
      }
      factors.push_back(od);
    } else if (kind == "phase") {
      phase += detail::json_rational(f.at("alpha"), "phase alpha");
    } else {
      fail(errc::parse, "unknown factor kind '" + kind + "'");
    }
  }
  try {
    return UnitBallFunction(std::move(factors), std::move(phase));
  } catch (const error& e) {
    fail(errc::parse, std::string("invalid function description: ") + e.what());
  }
}

inline UnitBallFunction parse_function_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(errc::parse, "function description is not valid JSON");
  return parse_function(j);
}

}  // namespace dbrk
