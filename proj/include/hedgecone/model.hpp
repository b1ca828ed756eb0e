#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hedgecone/polyhedron.hpp"
#include "hedgecone/rational.hpp"

namespace hedgecone {

using Matrix = std::vector<Vec>;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelNode {
  std::string id;
  int t = 0;
  std::optional<std::string> parent;
  std::vector<std::string> succ;
  std::optional<std::string> lattice_key;
  Matrix pi;  // pi[j][k]: units of asset j per unit of asset k
  Vec xi;
};

// Validated market. Node 0 is the root; nodes are ordered by time. Successor lists may share
// nodes (recombining lattice), in which case `parents` has more than one entry.
class Model {
 public:
  static Model build(std::size_t d, int T, std::vector<ModelNode> nodes);

  std::size_t dim() const { return d_; }
  int horizon() const { return T_; }
  std::size_t size() const { return nodes_.size(); }
  const ModelNode& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<ModelNode>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& successors(std::size_t i) const { return succ_.at(i); }
  const std::vector<std::size_t>& predecessors(std::size_t i) const { return pred_.at(i); }
  const std::vector<std::size_t>& at_time(int t) const { return by_time_.at(static_cast<std::size_t>(t)); }
  bool is_leaf(std::size_t i) const { return succ_.at(i).empty(); }
  bool is_tree() const { return tree_; }
  // Representative of the node's recombination class; backward passes compute once per class.
  std::size_t representative(std::size_t i) const { return rep_.at(i); }
  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index_of(const std::string& id) const {
    auto i = find(id);
    if (!i) throw ModelError("unknown node id '" + id + "'");
    return *i;
  }

  std::map<std::string, std::string> metadata;

 private:
  std::size_t d_ = 0;
  int T_ = 0;
  bool tree_ = true;
  std::vector<ModelNode> nodes_;
  std::vector<std::vector<std::size_t>> succ_, pred_, by_time_;
  std::vector<std::size_t> rep_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Model Model::build(std::size_t d, int T, std::vector<ModelNode> nodes) {
  if (d == 0) throw ModelError("asset count d must be positive");
  if (T < 0) throw ModelError("horizon T must be non-negative");
  if (nodes.empty()) throw ModelError("model has no nodes");
  std::stable_sort(nodes.begin(), nodes.end(), [](const ModelNode& a, const ModelNode& b) { return a.t < b.t; });
  Model m;
  m.d_ = d;
  m.T_ = T;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ModelNode& n = nodes[i];
    if (n.id.empty()) throw ModelError("node with empty id");
    if (!m.index_.emplace(n.id, i).second) throw ModelError("duplicate node id '" + n.id + "'");
    if (n.t < 0 || n.t > T) throw ModelError("node '" + n.id + "' has time " + std::to_string(n.t) + " outside 0.." + std::to_string(T));
    if (n.xi.size() != d) throw ModelError("node '" + n.id + "' is missing its payoff (expected " + std::to_string(d) + " entries)");
    if (n.pi.size() != d) throw ModelError("node '" + n.id + "' exchange matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    for (std::size_t j = 0; j < d; ++j) {
      if (n.pi[j].size() != d) throw ModelError("node '" + n.id + "' exchange matrix must be " + std::to_string(d) + "x" + std::to_string(d));
      for (std::size_t k = 0; k < d; ++k) {
        if (j == k && n.pi[j][k] != 1) throw ModelError("node '" + n.id + "' has pi[" + std::to_string(j + 1) + "][" + std::to_string(j + 1) + "] != 1");
        if (sgn(n.pi[j][k]) <= 0) throw ModelError("node '" + n.id + "' has non-positive exchange rate pi[" + std::to_string(j + 1) + "][" + std::to_string(k + 1) + "]");
      }
    }
  }
  if (nodes[0].t != 0 || (nodes.size() > 1 && nodes[1].t == 0)) throw ModelError("model must have exactly one root at time 0");
  if (nodes[0].parent) throw ModelError("root node '" + nodes[0].id + "' must not have a parent");

  const std::size_t n = nodes.size();
  m.succ_.assign(n, {});
  m.pred_.assign(n, {});
  m.by_time_.assign(static_cast<std::size_t>(T) + 1, {});
  for (std::size_t i = 0; i < n; ++i) {
    m.by_time_[static_cast<std::size_t>(nodes[i].t)].push_back(i);
    for (const std::string& s : nodes[i].succ) {
      auto it = m.index_.find(s);
      if (it == m.index_.end()) throw ModelError("node '" + nodes[i].id + "' lists unknown successor '" + s + "'");
      std::size_t c = it->second;
      if (nodes[c].t != nodes[i].t + 1) throw ModelError("successor '" + s + "' of node '" + nodes[i].id + "' is not one step later");
      if (std::find(m.succ_[i].begin(), m.succ_[i].end(), c) != m.succ_[i].end())
        throw ModelError("node '" + nodes[i].id + "' lists successor '" + s + "' twice");
      m.succ_[i].push_back(c);
      m.pred_[c].push_back(i);
    }
    if (nodes[i].t < T && m.succ_[i].empty()) throw ModelError("non-terminal node '" + nodes[i].id + "' has no successors");
    if (nodes[i].t == T && !m.succ_[i].empty()) throw ModelError("terminal node '" + nodes[i].id + "' has successors");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (m.pred_[i].empty()) throw ModelError("orphan node '" + nodes[i].id + "' is not a successor of any node");
    if (m.pred_[i].size() > 1) m.tree_ = false;
    if (nodes[i].parent) {
      auto it = m.index_.find(*nodes[i].parent);
      if (it == m.index_.end()) throw ModelError("node '" + nodes[i].id + "' has unknown parent '" + *nodes[i].parent + "'");
      if (std::find(m.pred_[i].begin(), m.pred_[i].end(), it->second) == m.pred_[i].end())
        throw ModelError("parent '" + *nodes[i].parent + "' does not list node '" + nodes[i].id + "' as a successor");
    } else if (m.pred_[i].size() == 1) {
      throw ModelError("node '" + nodes[i].id + "' has no parent");
    }
  }

  // Recombination classes by (t, lattice_key), validated bottom-up.
  m.rep_.resize(n);
  std::map<std::pair<int, std::string>, std::size_t> first;
  for (std::size_t i = 0; i < n; ++i) {
    m.rep_[i] = i;
    if (!nodes[i].lattice_key) continue;
    auto [it, inserted] = first.emplace(std::make_pair(nodes[i].t, *nodes[i].lattice_key), i);
    if (!inserted) m.rep_[i] = it->second;
  }
  for (int t = T; t >= 0; --t) {
    for (std::size_t i : m.by_time_[static_cast<std::size_t>(t)]) {
      std::size_t r = m.rep_[i];
      if (r == i) continue;
      if (nodes[i].pi != nodes[r].pi || nodes[i].xi != nodes[r].xi)
        throw ModelError("nodes '" + nodes[i].id + "' and '" + nodes[r].id + "' share a lattice key but differ in rates or payoff");
      auto classes = [&](std::size_t k) {
        std::vector<std::size_t> c;
        for (std::size_t s : m.succ_[k]) c.push_back(m.rep_[s]);
        std::sort(c.begin(), c.end());
        return c;
      };
      if (classes(i) != classes(r))
        throw ModelError("nodes '" + nodes[i].id + "' and '" + nodes[r].id + "' share a lattice key but have different sub-trees");
    }
  }
  m.nodes_ = std::move(nodes);
  return m;
}

// Path view of a model: one node per root-to-node path. For tree models the indices and ids
// coincide with the model's.
class ScenarioTree {
 public:
  static constexpr std::size_t default_limit = 2'000'000;

  explicit ScenarioTree(const Model& m, std::size_t max_nodes = default_limit) : model_(&m) {
    if (m.is_tree()) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        Entry e{i, std::nullopt, {}, m.node(i).id, m.node(i).t};
        if (i > 0) e.parent = m.predecessors(i).front();
        e.children = m.successors(i);
        nodes_.push_back(std::move(e));
      }
    } else {
      nodes_.push_back(Entry{0, std::nullopt, {}, m.node(0).id, 0});
      for (std::size_t k = 0; k < nodes_.size(); ++k) {
        for (std::size_t c : m.successors(nodes_[k].model_node)) {
          if (nodes_.size() >= max_nodes)
            throw ResourceLimit("unfolded tree exceeds " + std::to_string(max_nodes) + " nodes");
          nodes_[k].children.push_back(nodes_.size());
          nodes_.push_back(Entry{c, k, {}, nodes_[k].id + "/" + m.node(c).id, nodes_[k].t + 1});
        }
      }
    }
    by_time_.assign(static_cast<std::size_t>(m.horizon()) + 1, {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      by_time_[static_cast<std::size_t>(nodes_[i].t)].push_back(i);
      index_.emplace(nodes_[i].id, i);
    }
  }

  const Model& model() const { return *model_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t model_node(std::size_t i) const { return nodes_.at(i).model_node; }
  std::optional<std::size_t> parent(std::size_t i) const { return nodes_.at(i).parent; }
  const std::vector<std::size_t>& children(std::size_t i) const { return nodes_.at(i).children; }
  const std::string& id(std::size_t i) const { return nodes_.at(i).id; }
  int time(std::size_t i) const { return nodes_.at(i).t; }
  bool is_leaf(std::size_t i) const { return nodes_.at(i).children.empty(); }
  const std::vector<std::size_t>& at_time(int t) const { return by_time_.at(static_cast<std::size_t>(t)); }
  const std::vector<std::size_t>& leaves() const { return by_time_.back(); }
  const Vec& xi(std::size_t i) const { return model_->node(model_node(i)).xi; }
  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::vector<std::size_t> path_to(std::size_t i) const {
    std::vector<std::size_t> p{i};
    while (auto q = parent(p.back())) p.push_back(*q);
    std::reverse(p.begin(), p.end());
    return p;
  }

 private:
  struct Entry {
    std::size_t model_node;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    std::string id;
    int t;
  };
  const Model* model_;
  std::vector<Entry> nodes_;
  std::vector<std::vector<std::size_t>> by_time_;
  std::unordered_map<std::string, std::size_t> index_;
};

// K = cone{e^i, pi^{jk} e^j - e^k}
inline Polyhedron solvency_cone(const Matrix& pi) {
  const std::size_t d = pi.size();
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < d; ++i) gens.push_back(unit(d, i));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      if (j == k) continue;
      Vec g = zeros(d);
      g[j] = pi[j][k];
      g[k] = -1;
      gens.push_back(std::move(g));
    }
  return Polyhedron::canonical_from_vrep(d, VRep{{zeros(d)}, std::move(gens), {}});
}

inline Polyhedron dual_solvency_cone(const Polyhedron& k) { return polar(k); }

struct SliceReport {
  bool nonempty = false;
  bool bounded = false;
};

inline SliceReport slice_report(const Polyhedron& cone, std::size_t j) {
  Polyhedron s = sigma_slice(cone, j);
  return {!s.is_empty(), !s.is_empty() && s.is_bounded()};
}

}  // namespace hedgecone
