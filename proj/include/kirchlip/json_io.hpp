#ifndef KIRCHLIP_JSON_IO_HPP
#define KIRCHLIP_JSON_IO_HPP

#include <json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kirchlip/cech.hpp"
#include "kirchlip/cexgen.hpp"
#include "kirchlip/circuits.hpp"
#include "kirchlip/cover.hpp"
#include "kirchlip/ints.hpp"
#include "kirchlip/newton.hpp"
#include "kirchlip/poly.hpp"
#include "kirchlip/sets.hpp"
#include "kirchlip/splitter.hpp"
#include "kirchlip/window_fn.hpp"

namespace kirchlip::jsonio {

using json = nlohmann::ordered_json;

// Integers ride as plain JSON numbers while they fit in 64 bits; anything
// larger becomes a decimal string so no reader ever truncates it.
inline json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
  return json(v.get_str());
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    require(!s.empty(), "json: empty integer string");
    try {
      return Int(s);
    } catch (const std::invalid_argument&) {
      throw InputError("json: bad integer literal '" + s + "'");
    }
  }
  throw InputError("json: expected an integer, got " + std::string(j.type_name()));
}

inline json rat_to_json(const Rat& q) {
  if (q.get_den() == 1) return int_to_json(q.get_num());
  return json(q.get_num().get_str() + "/" + q.get_den().get_str());
}

inline Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(int_from_json(j));
  require(j.is_string(), "json: expected a rational");
  const std::string s = j.get<std::string>();
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Rat q(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InputError("json: bad rational literal '" + s + "'");
  }
}

inline json int_list(const std::vector<Int>& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(int_to_json(x));
  return a;
}

inline std::vector<Int> int_list_from(const json& j) {
  require(j.is_array(), "json: expected an array of integers");
  std::vector<Int> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(int_from_json(e));
  return v;
}

inline json set_to_json(const sets::SetExpression& s) {
  using K = sets::SetExpression::Kind;
  json j;
  switch (s.kind) {
    case K::progression:
      j["kind"] = "progression";
      j["a"] = int_to_json(s.prog.a);
      j["d"] = int_to_json(s.prog.d);
      break;
    case K::almost:
      j["kind"] = "almost";
      j["base"] = {{"kind", "progression"},
                   {"a", int_to_json(s.prog.a)},
                   {"d", int_to_json(s.prog.d)}};
      j["excluded"] = int_list(s.excluded);
      break;
    case K::finite:
      if (s.points.empty()) {
        j["kind"] = "empty";
      } else {
        j["kind"] = "finite";
        j["points"] = int_list(s.points);
      }
      break;
    case K::united:
      j["kind"] = "union";
      j["parts"] = json::array();
      for (const auto& p : s.parts) j["parts"].push_back(set_to_json(p));
      break;
  }
  return j;
}

inline sets::SetExpression set_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "json: set needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "progression")
    return sets::SetExpression::progression(int_from_json(j.at("a")),
                                            int_from_json(j.at("d")));
  if (kind == "almost") {
    sets::SetExpression base = set_from_json(j.at("base"));
    require(base.kind == sets::SetExpression::Kind::progression,
            "json: almost set base must be a progression");
    return sets::SetExpression::almost(base.prog,
                                       int_list_from(j.at("excluded")));
  }
  if (kind == "finite") return sets::SetExpression::finite(int_list_from(j.at("points")));
  if (kind == "empty") return sets::SetExpression::finite({});
  if (kind == "union") {
    require(j.at("parts").is_array(), "json: union needs a \"parts\" array");
    std::vector<sets::SetExpression> parts;
    for (const auto& p : j.at("parts")) parts.push_back(set_from_json(p));
    return sets::SetExpression::union_of(std::move(parts));
  }
  throw InputError("json: unknown set kind '" + kind + "'");
}

inline json function_to_json(const lip::WindowFunction& f) {
  json rows = json::array();
  for (const auto& [x, y] : f.values) rows.push_back({int_to_json(x), int_to_json(y)});
  return {{"domain", set_to_json(f.domain)},
          {"window", int_to_json(f.window)},
          {"repr", "table"},
          {"values", rows}};
}

inline lip::WindowFunction function_from_json(
    const json& j, std::optional<Int> window_override = std::nullopt) {
  require(j.is_object(), "json: function must be an object");
  require(j.contains("domain"), "json: function needs a \"domain\"");
  sets::SetExpression dom = set_from_json(j.at("domain"));
  const std::string repr = j.contains("repr") ? j.at("repr").get<std::string>() : "table";

  std::optional<Int> window = window_override;
  if (!window && j.contains("window")) window = int_from_json(j.at("window"));

  if (repr == "table") {
    require(j.contains("values"), "json: table function needs \"values\"");
    std::vector<std::pair<Int, Int>> rows;
    for (const auto& r : j.at("values")) {
      require(r.is_array() && r.size() == 2, "json: table row must be [x, y]");
      rows.emplace_back(int_from_json(r[0]), int_from_json(r[1]));
    }
    if (!window) {
      Int top = 0;
      for (const auto& [x, y] : rows) top = std::max(top, x);
      window = top;
    }
    return lip::WindowFunction::from_table(std::move(dom), *window, rows);
  }
  if (repr == "product-sum") {
    if (j.contains("enumeration"))
      require(j.at("enumeration").get<std::string>() == "increasing",
              "json: only the increasing enumeration is supported");
    require(window.has_value(), "json: product-sum function needs a \"window\"");
    std::vector<Int> pts = sets::enumerate_window(dom, *window);
    std::vector<Int> coeffs = int_list_from(j.at("coeffs"));
    require(coeffs.size() <= pts.size(),
            "json: more product-sum coefficients than window points");
    lip::ProductSum ps;
    ps.enumeration = pts;
    for (const Int& c : coeffs) ps.coeffs.emplace_back(c);
    std::map<Int, Int> vals;
    for (const Int& x : pts) {
      Rat y = lip::product_sum_eval(ps, x);
      vals[x] = y.get_num();
    }
    return lip::WindowFunction(std::move(dom), *window, std::move(vals));
  }
  if (repr == "poly") {
    require(window.has_value(), "json: poly function needs a \"window\"");
    IntPoly p(int_list_from(j.at("coeffs")));
    return lip::WindowFunction::from_poly(std::move(dom), *window, p);
  }
  throw InputError("json: unknown function repr '" + repr + "'");
}

struct CoverDoc {
  std::vector<sets::SetExpression> pieces;
  Int window = 0;
};

inline CoverDoc cover_from_json(const json& j) {
  require(j.is_object() && j.contains("pieces"), "json: cover needs \"pieces\"");
  CoverDoc doc;
  for (const auto& p : j.at("pieces")) doc.pieces.push_back(set_from_json(p));
  require(!doc.pieces.empty(), "json: cover has no pieces");
  if (j.contains("window")) doc.window = int_from_json(j.at("window"));
  return doc;
}

inline json cover_to_json(const std::vector<sets::SetExpression>& pieces,
                          const Int& window) {
  json parts = json::array();
  for (const auto& p : pieces) parts.push_back(set_to_json(p));
  return {{"pieces", parts}, {"window", int_to_json(window)}};
}

inline std::string face_key(const std::vector<int>& face) {
  std::string key;
  for (size_t t = 0; t < face.size(); ++t) {
    if (t) key += ',';
    key += std::to_string(face[t]);
  }
  return key;
}

inline std::vector<int> face_from_key(const std::string& key) {
  std::vector<int> face;
  std::istringstream in(key);
  std::string part;
  while (std::getline(in, part, ','))
    try {
      face.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw InputError("json: bad face key '" + key + "'");
    }
  require(!face.empty(), "json: empty face key");
  for (size_t t = 1; t < face.size(); ++t)
    require(face[t - 1] < face[t], "json: face key indices must increase");
  return face;
}

inline json cochain_to_json(const cech::CechCochain& c) {
  json comp = json::object();
  for (const auto& [face, f] : c.components)
    comp[face_key(face)] = function_to_json(f);
  return {{"degree", c.degree}, {"components", comp}};
}

inline cech::CechCochain cochain_from_json(const json& j) {
  require(j.is_object() && j.contains("degree"), "json: cochain needs a \"degree\"");
  cech::CechCochain c;
  c.degree = j.at("degree").get<int>();
  require(c.degree >= 0, "json: negative cochain degree");
  if (j.contains("components")) {
    require(j.at("components").is_object(), "json: cochain components must be an object");
    for (const auto& [key, val] : j.at("components").items()) {
      std::vector<int> face = face_from_key(key);
      require(static_cast<int>(face.size()) == c.degree + 1,
              "json: face key arity does not match the degree");
      c.components.emplace(std::move(face), function_from_json(val));
    }
  }
  return c;
}

inline json circuit_to_json(const lip::Circuit& c) {
  return {{"points", int_list(c.points)},
          {"leading", rat_to_json(c.leading)},
          {"denominator", int_to_json(c.denominator)}};
}

inline json product_sum_to_json(const lip::ProductSum& ps) {
  json coeffs = json::array();
  for (const Rat& q : ps.coeffs) coeffs.push_back(rat_to_json(q));
  return {{"enumeration", int_list(ps.enumeration)},
          {"coeffs", coeffs},
          {"integral", ps.is_integral()}};
}

inline json ratpoly_to_json(const RatPoly& p) {
  json coeffs = json::array();
  for (const Rat& q : p.c) coeffs.push_back(rat_to_json(q));
  return {{"repr", "poly"}, {"coeffs", coeffs}};
}

inline json intpoly_to_json(const IntPoly& p) { return int_list(p.c); }

inline json classification_to_json(const kirch::CoverClassification& cc) {
  json edges = json::array();
  for (const auto& [i, k] : cc.nerve_edges) edges.push_back({i, k});
  json j = {{"piece_count", cc.piece_count},
            {"nerve_edges", edges},
            {"all_almost_basic", cc.all_almost_basic},
            {"nerve_complete", cc.nerve_complete},
            {"nerve_connected", cc.nerve_connected},
            {"star_like", cc.star_like},
            {"tree_like", cc.tree_like}};
  if (cc.nest) {
    j["nest"] = {{"is_nest", cc.nest->is_nest},
                 {"reason", cc.nest->reason},
                 {"straw", cc.nest->straw},
                 {"core", cc.nest->core}};
  }
  return j;
}

inline json cohomology_to_json(const cech::CohomologyReport& r) {
  return {{"degree", r.degree}, {"rank", r.rank}, {"torsion", int_list(r.torsion)}};
}

inline json coboundary_to_json(const cech::CoboundaryReport& r) {
  json j = {{"is_coboundary", r.is_coboundary}};
  if (r.witness) j["witness"] = cochain_to_json(*r.witness);
  if (!r.is_coboundary) {
    j["certificate"] = r.certificate;
    j["detail"] = r.detail;
  }
  return j;
}

inline json split_to_json(const splitter::SplitResult& r) {
  return {{"g", function_to_json(r.g)},
          {"h", function_to_json(r.h)},
          {"certificate",
           {{"difference_ok", r.certificate.difference_ok},
            {"g_lip", r.certificate.g_lip},
            {"h_lip", r.certificate.h_lip},
            {"window", int_to_json(r.certificate.window)}}}};
}

inline json pair_state_to_json(const cexgen::PairState& st) {
  return {{"i", st.i},        {"j", st.j},
          {"m", st.m},        {"k", st.k},
          {"f", intpoly_to_json(st.f)}, {"g", intpoly_to_json(st.g)},
          {"mu", intpoly_to_json(st.mu)}, {"tau", intpoly_to_json(st.tau)}};
}

inline json cex_certificate_to_json(const cexgen::CexCertificate& cert) {
  json pieces = json::array();
  for (const auto& [piece, ok] : cert.pieces)
    pieces.push_back({{"set", set_to_json(piece)}, {"lip", ok}});
  json j = {{"pieces", pieces}};
  if (cert.circuit) j["circuit"] = circuit_to_json(*cert.circuit);
  return j;
}

inline std::vector<cech::ObstructionFunctional> catalog_from_json(const json& j) {
  require(j.is_object() && j.contains("functionals"),
          "json: catalog needs a \"functionals\" array");
  std::vector<cech::ObstructionFunctional> out;
  for (const auto& e : j.at("functionals")) {
    cech::ObstructionFunctional fn;
    fn.name = e.at("name").get<std::string>();
    for (const auto& p : e.at("pieces")) fn.cover.push_back(set_from_json(p));
    for (const auto& t : e.at("terms")) {
      require(t.is_array() && t.size() == 2, "json: functional term must be [point, sign]");
      fn.terms.emplace_back(int_from_json(t[0]),
                            static_cast<int>(t[1].get<std::int64_t>()));
    }
    fn.modulus = int_from_json(e.at("modulus"));
    out.push_back(std::move(fn));
  }
  return out;
}

}  // namespace kirchlip::jsonio

#endif
