#pragma once

#include <string>

#include "hedgecone/buyer.hpp"
#include "hedgecone/json_io.hpp"
#include "hedgecone/seller.hpp"

namespace hedgecone {

class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t node_of(const ScenarioTree& tree, const std::string& id) {
  auto v = tree.find(id);
  if (!v) throw ArtifactError("unknown node '" + id + "'");
  return *v;
}

template <class F>
Json per_node(const ScenarioTree& tree, F&& value) {
  Json out = Json::object();
  for (std::size_t v = 0; v < tree.size(); ++v) out[tree.id(v)] = value(v);
  return out;
}

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ArtifactError(std::string("artifact has no '") + name + "' field");
  return j.at(name);
}

// Every tree node must be present exactly once.
template <class T, class F>
std::vector<T> read_per_node(const ScenarioTree& tree, const Json& j, const char* what, F&& read) {
  if (!j.is_object()) throw ArtifactError(std::string("'") + what + "' must map node ids to values");
  std::vector<std::optional<T>> tmp(tree.size());
  for (const auto& [id, val] : j.items()) tmp[node_of(tree, id)] = read(val);
  std::vector<T> out;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (!tmp[v]) throw ArtifactError(std::string("'") + what + "' is missing node '" + tree.id(v) + "'");
    out.push_back(std::move(*tmp[v]));
  }
  return out;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed artifact: ") + e.what());
  } catch (const ParseError& e) {
    throw ArtifactError(std::string("malformed artifact: ") + e.what());
  }
}

}  // namespace detail

inline Json stopping_time_to_json(const ScenarioTree& tree, const MixedStoppingTime& chi) {
  return Json{{"chi", detail::per_node(tree, [&](std::size_t v) { return rat_to_json(chi.chi[v]); })}};
}

inline MixedStoppingTime stopping_time_from_json(const ScenarioTree& tree, const Json& j) {
  return detail::guarded([&] {
    return MixedStoppingTime{detail::read_per_node<Rat>(tree, detail::field(j, "chi"), "chi", rat_from_json)};
  });
}

inline Json certificate_to_json(const ScenarioTree& tree, const DualCertificate& c) {
  Json j;
  j["side"] = c.side;
  j["currency"] = c.currency + 1;
  j["value"] = rat_to_json(c.value);
  j["chi"] = detail::per_node(tree, [&](std::size_t v) { return rat_to_json(c.chi.chi[v]); });
  j["q"] = detail::per_node(tree, [&](std::size_t v) { return rat_to_json(c.q[v]); });
  j["S"] = detail::per_node(tree, [&](std::size_t v) { return vec_to_json(c.S[v]); });
  return j;
}

inline DualCertificate certificate_from_json(const ScenarioTree& tree, const Json& j) {
  return detail::guarded([&] {
    DualCertificate c;
    c.side = detail::field(j, "side").get<std::string>();
    if (c.side != "seller" && c.side != "buyer") throw ArtifactError("certificate side must be seller or buyer");
    long long cur = detail::field(j, "currency").get<long long>();
    if (cur < 1 || static_cast<std::size_t>(cur) > tree.model().dim()) throw ArtifactError("certificate currency out of range");
    c.currency = static_cast<std::size_t>(cur - 1);
    c.value = rat_from_json(detail::field(j, "value"));
    c.chi.chi = detail::read_per_node<Rat>(tree, detail::field(j, "chi"), "chi", rat_from_json);
    c.q = detail::read_per_node<Rat>(tree, detail::field(j, "q"), "q", rat_from_json);
    c.S = detail::read_per_node<Vec>(tree, detail::field(j, "S"), "S", vec_from_json);
    return c;
  });
}

inline Json liquidation_to_json(const ScenarioTree& tree, const LiquidationStrategy& l) {
  Json hold = Json::object();
  for (const auto& [v, x] : l.hold) hold[tree.id(v)] = vec_to_json(x);
  return Json{{"start", tree.id(l.start)}, {"z", vec_to_json(l.z)}, {"hold", hold}};
}

inline LiquidationStrategy liquidation_from_json(const ScenarioTree& tree, const Json& j) {
  LiquidationStrategy l;
  l.start = detail::node_of(tree, detail::field(j, "start").get<std::string>());
  l.z = vec_from_json(detail::field(j, "z"));
  for (const auto& [id, x] : detail::field(j, "hold").items()) l.hold[detail::node_of(tree, id)] = vec_from_json(x);
  return l;
}

inline Json strategy_fields(const ScenarioTree& tree, const Strategy& y) {
  return Json{{"endowment", vec_to_json(y.y0)}, {"hold", detail::per_node(tree, [&](std::size_t v) { return vec_to_json(y.hold[v]); })}};
}

inline Strategy strategy_from_json(const ScenarioTree& tree, const Json& j) {
  Strategy y;
  y.y0 = vec_from_json(detail::field(j, "endowment"));
  y.hold = detail::read_per_node<Vec>(tree, detail::field(j, "hold"), "hold", vec_from_json);
  for (const Vec& h : y.hold)
    if (h.size() != y.y0.size()) throw ArtifactError("portfolio dimensions differ");
  return y;
}

inline Json hedge_to_json(const ScenarioTree& tree, const SellerHedge& h) {
  Json j = strategy_fields(tree, h.y);
  j["side"] = "seller";
  Json z = Json::object(), x = Json::object();
  for (const auto& [v, l] : h.z_liq) z[tree.id(v)] = liquidation_to_json(tree, l);
  for (const auto& [v, l] : h.x_liq) x[tree.id(v)] = liquidation_to_json(tree, l);
  j["z_liquidation"] = z;
  j["x_liquidation"] = x;
  return j;
}

inline SellerHedge hedge_from_json(const ScenarioTree& tree, const Json& j) {
  return detail::guarded([&] {
    SellerHedge h;
    h.y = strategy_from_json(tree, j);
    for (const auto& [id, l] : detail::field(j, "z_liquidation").items()) h.z_liq.emplace(detail::node_of(tree, id), liquidation_from_json(tree, l));
    for (const auto& [id, l] : detail::field(j, "x_liquidation").items()) h.x_liq.emplace(detail::node_of(tree, id), liquidation_from_json(tree, l));
    return h;
  });
}

inline Json buyer_strategy_to_json(const ScenarioTree& tree, const BuyerStrategy& b) {
  Json j = strategy_fields(tree, b.y);
  j["side"] = "buyer";
  j["chi"] = detail::per_node(tree, [&](std::size_t v) { return rat_to_json(b.chi.chi[v]); });
  j["p"] = detail::per_node(tree, [&](std::size_t v) { return rat_to_json(b.p[v]); });
  j["lambda"] = detail::per_node(tree, [&](std::size_t v) { return rat_to_json(b.lambda[v]); });
  j["z"] = detail::per_node(tree, [&](std::size_t v) { return vec_to_json(b.z[v]); });
  Json l = Json::object();
  for (const auto& [v, s] : b.v_liq) l[tree.id(v)] = liquidation_to_json(tree, s);
  j["liquidation"] = l;
  return j;
}

// Only the parts the verifier needs: y and χ.
inline BuyerStrategy buyer_strategy_from_json(const ScenarioTree& tree, const Json& j) {
  return detail::guarded([&] {
    BuyerStrategy b;
    b.y = strategy_from_json(tree, j);
    b.chi.chi = detail::read_per_node<Rat>(tree, detail::field(j, "chi"), "chi", rat_from_json);
    return b;
  });
}

inline Json claim_to_json(const ScenarioTree& tree, const EuropeanClaim& c) {
  Json z = Json::object();
  for (std::size_t leaf : tree.leaves()) z[tree.id(leaf)] = vec_to_json(c.zeta[leaf]);
  return Json{{"zeta", z}};
}

inline EuropeanClaim claim_from_json(const ScenarioTree& tree, const Json& j) {
  return detail::guarded([&] {
    EuropeanClaim c;
    c.zeta.assign(tree.size(), zeros(tree.model().dim()));
    std::vector<bool> seen(tree.size(), false);
    for (const auto& [id, val] : detail::field(j, "zeta").items()) {
      std::size_t v = detail::node_of(tree, id);
      if (!tree.is_leaf(v)) throw ArtifactError("claim entry '" + id + "' is not a leaf");
      c.zeta[v] = vec_from_json(val);
      seen[v] = true;
    }
    for (std::size_t leaf : tree.leaves())
      if (!seen[leaf]) throw ArtifactError("claim is missing leaf '" + tree.id(leaf) + "'");
    return c;
  });
}

// Per model node polyhedra keyed by node id.
inline Json cone_process_to_json(const Model& m, const std::vector<Polyhedron>& sets) {
  Json out = Json::object();
  for (std::size_t i = 0; i < m.size(); ++i) out[m.node(i).id] = polyhedron_to_json(sets[i]);
  return out;
}

}  // namespace hedgecone
