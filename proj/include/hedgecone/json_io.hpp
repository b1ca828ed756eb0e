#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "hedgecone/model.hpp"
#include "hedgecone/polyhedron.hpp"
#include "json.hpp"

namespace hedgecone {

using Json = nlohmann::ordered_json;

inline Rat rat_from_json(const Json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rat(Int(std::to_string(j.get<std::uint64_t>())));
    return Rat(Int(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_number_float()) {
    // shortest round-trip text of the double, read exactly
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
    return parse_rat(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  throw ParseError("expected a rational, got " + std::string(j.type_name()));
}

inline Json rat_to_json(const Rat& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) return r.get_num().get_si();
  return r.get_str();
}

inline Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  Vec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

inline Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (const Rat& x : v) a.push_back(rat_to_json(x));
  return a;
}

inline Json polyhedron_to_json(const Polyhedron& p) {
  Json j;
  j["dim"] = p.dim();
  if (p.is_empty()) {
    j["empty"] = true;
    return j;
  }
  Polyhedron c = canonicalize(p);
  Json h = Json::array();
  for (const auto& s : c.hrep().equalities) {
    h.push_back({{"normal", vec_to_json(s.normal)}, {"offset", rat_to_json(s.offset)}});
    h.push_back({{"normal", vec_to_json(-s.normal)}, {"offset", rat_to_json(-s.offset)}});
  }
  for (const auto& s : c.hrep().inequalities)
    h.push_back({{"normal", vec_to_json(s.normal)}, {"offset", rat_to_json(s.offset)}});
  j["hrep"] = h;
  Json pts = Json::array(), rays = Json::array();
  for (const auto& x : c.vrep().points) pts.push_back(vec_to_json(x));
  for (const auto& l : c.vrep().lines) {
    rays.push_back(vec_to_json(l));
    rays.push_back(vec_to_json(-l));
  }
  for (const auto& r : c.vrep().rays) rays.push_back(vec_to_json(r));
  j["vrep"] = {{"points", pts}, {"rays", rays}};
  return j;
}

inline Polyhedron polyhedron_from_json(const Json& j) {
  std::size_t d = j.at("dim").get<std::size_t>();
  if (j.value("empty", false)) return Polyhedron::empty_set(d);
  std::optional<HRep> h;
  std::optional<VRep> v;
  if (j.contains("hrep")) {
    h.emplace();
    for (const auto& s : j.at("hrep")) h->inequalities.push_back({vec_from_json(s.at("normal")), rat_from_json(s.at("offset"))});
  }
  if (j.contains("vrep")) {
    v.emplace();
    for (const auto& x : j.at("vrep").value("points", Json::array())) v->points.push_back(vec_from_json(x));
    for (const auto& x : j.at("vrep").value("rays", Json::array())) v->rays.push_back(vec_from_json(x));
  }
  if (!h && !v) throw ParseError("polyhedron needs an hrep or a vrep");
  if (h && v) {
    Polyhedron a = Polyhedron::canonical_from_hrep(d, *h);
    Polyhedron b = Polyhedron::canonical_from_vrep(d, *v);
    if (!(a == b)) throw GeometryError("inconsistent representations: halfspace and generator sets differ");
    return a;
  }
  return h ? Polyhedron::canonical_from_hrep(d, std::move(*h)) : Polyhedron::canonical_from_vrep(d, std::move(*v));
}

inline Model model_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ModelError("model document must be an object");
    if (!j.contains("d") || !j.contains("T") || !j.contains("nodes")) throw ModelError("model document needs d, T and nodes");
    long long d = j.at("d").get<long long>();
    long long T = j.at("T").get<long long>();
    if (d <= 0) throw ModelError("asset count d must be positive");
    if (T < 0) throw ModelError("horizon T must be non-negative");
    std::vector<ModelNode> nodes;
    for (const auto& n : j.at("nodes")) {
      ModelNode m;
      m.id = n.at("id").get<std::string>();
      m.t = n.at("t").get<int>();
      if (n.contains("parent") && !n.at("parent").is_null()) m.parent = n.at("parent").get<std::string>();
      if (n.contains("succ"))
        for (const auto& s : n.at("succ")) m.succ.push_back(s.get<std::string>());
      if (n.contains("lattice_key") && !n.at("lattice_key").is_null()) m.lattice_key = n.at("lattice_key").get<std::string>();
      if (!n.contains("pi")) throw ModelError("node '" + m.id + "' has no exchange matrix");
      for (const auto& row : n.at("pi")) m.pi.push_back(vec_from_json(row));
      if (!n.contains("xi")) throw ModelError("node '" + m.id + "' is missing its payoff");
      m.xi = vec_from_json(n.at("xi"));
      nodes.push_back(std::move(m));
    }
    Model model = Model::build(static_cast<std::size_t>(d), static_cast<int>(T), std::move(nodes));
    if (j.contains("metadata") && j.at("metadata").is_object())
      for (const auto& [k, v] : j.at("metadata").items()) model.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  } catch (const ParseError& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

inline Json model_to_json(const Model& m) {
  Json j;
  j["d"] = m.dim();
  j["T"] = m.horizon();
  if (!m.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : m.metadata) meta[k] = v;
    j["metadata"] = meta;
  }
  Json nodes = Json::array();
  for (const auto& n : m.nodes()) {
    Json e;
    e["id"] = n.id;
    e["t"] = n.t;
    e["parent"] = n.parent ? Json(*n.parent) : Json(nullptr);
    e["succ"] = n.succ;
    e["lattice_key"] = n.lattice_key ? Json(*n.lattice_key) : Json(nullptr);
    Json pi = Json::array();
    for (const auto& row : n.pi) pi.push_back(vec_to_json(row));
    e["pi"] = pi;
    e["xi"] = vec_to_json(n.xi);
    nodes.push_back(std::move(e));
  }
  j["nodes"] = nodes;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

inline Model load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

}  // namespace hedgecone
