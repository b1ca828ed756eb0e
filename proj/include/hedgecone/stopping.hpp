#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hedgecone/model.hpp"

namespace hedgecone {

class StoppingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// chi per scenario-tree node
struct MixedStoppingTime {
  std::vector<Rat> chi;
};

struct OrdinaryStoppingTime {
  std::vector<bool> stop;
};

// Empty string when valid, otherwise the first violation.
inline std::string check_stopping_time(const ScenarioTree& tree, const MixedStoppingTime& x) {
  if (x.chi.size() != tree.size()) return "stopping time has " + std::to_string(x.chi.size()) + " values for " + std::to_string(tree.size()) + " nodes";
  for (std::size_t i = 0; i < tree.size(); ++i)
    if (sgn(x.chi[i]) < 0) return "negative value at node '" + tree.id(i) + "'";
  std::vector<Rat> mass(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    mass[i] = x.chi[i];
    if (auto p = tree.parent(i)) mass[i] += mass[*p];
    if (mass[i] > 1) return "path mass exceeds 1 at node '" + tree.id(i) + "'";
  }
  for (std::size_t leaf : tree.leaves())
    if (mass[leaf] != 1) return "path mass " + to_string(mass[leaf]) + " != 1 on the path to '" + tree.id(leaf) + "'";
  return {};
}

inline void validate(const ScenarioTree& tree, const MixedStoppingTime& x) {
  if (auto e = check_stopping_time(tree, x); !e.empty()) throw StoppingError(e);
}

// chi*_t at each node: 1 minus the mass spent strictly before it
inline std::vector<Rat> chi_star(const ScenarioTree& tree, const MixedStoppingTime& x) {
  std::vector<Rat> star(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    auto p = tree.parent(i);
    star[i] = p ? Rat(star[*p] - x.chi[*p]) : Rat(1);
  }
  return star;
}

inline void scale_in_place(Rat& v, const Rat& s) { v *= s; }
inline void scale_in_place(Vec& v, const Rat& s) {
  for (Rat& c : v) c *= s;
}
inline Rat add(const Rat& a, const Rat& b) { return a + b; }
inline Vec add(const Vec& a, const Vec& b) { return a + b; }

// Per leaf, the path values X^{chi*}_t for t = 0..T+1.
template <class X>
std::vector<std::vector<X>> weighted_tail(const ScenarioTree& tree, const std::vector<X>& values, const MixedStoppingTime& x,
                                         const X& zero) {
  std::vector<std::vector<X>> out;
  const std::size_t T = static_cast<std::size_t>(tree.model().horizon());
  for (std::size_t leaf : tree.leaves()) {
    std::vector<std::size_t> path = tree.path_to(leaf);
    std::vector<X> tail(T + 2, zero);
    for (std::size_t t = T + 1; t-- > 0;) {
      X term = values[path[t]];
      scale_in_place(term, x.chi[path[t]]);
      tail[t] = add(tail[t + 1], term);
    }
    out.push_back(std::move(tail));
  }
  return out;
}

// X_chi per leaf
template <class X>
std::vector<X> evaluate_at(const ScenarioTree& tree, const std::vector<X>& values, const MixedStoppingTime& x, const X& zero) {
  std::vector<X> out;
  for (auto& tail : weighted_tail(tree, values, x, zero)) out.push_back(tail.front());
  return out;
}

inline std::string check_stopping_time(const ScenarioTree& tree, const OrdinaryStoppingTime& tau) {
  if (tau.stop.size() != tree.size()) return "stopping time size mismatch";
  std::vector<int> count(tree.size(), 0);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    count[i] = tau.stop[i] ? 1 : 0;
    if (auto p = tree.parent(i)) count[i] += count[*p];
    if (count[i] > 1) return "path stops twice at node '" + tree.id(i) + "'";
  }
  for (std::size_t leaf : tree.leaves())
    if (count[leaf] != 1) return "path to '" + tree.id(leaf) + "' never stops";
  return {};
}

inline MixedStoppingTime from_ordinary(const ScenarioTree& tree, const OrdinaryStoppingTime& tau) {
  if (auto e = check_stopping_time(tree, tau); !e.empty()) throw StoppingError(e);
  MixedStoppingTime x;
  x.chi.resize(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) x.chi[i] = tau.stop[i] ? 1 : 0;
  return x;
}

inline OrdinaryStoppingTime stop_at_time(const ScenarioTree& tree, int t) {
  OrdinaryStoppingTime tau;
  tau.stop.assign(tree.size(), false);
  for (std::size_t i : tree.at_time(t)) tau.stop[i] = true;
  return tau;
}

// Number of ordinary stopping times, saturating at `cap`.
inline std::size_t count_stopping_times(const ScenarioTree& tree, std::size_t cap) {
  std::vector<std::size_t> f(tree.size(), 1);
  for (std::size_t k = tree.size(); k-- > 0;) {
    if (tree.is_leaf(k)) continue;
    std::size_t prod = 1;
    for (std::size_t c : tree.children(k)) prod = prod > cap / f[c] ? cap : std::min(cap, prod * f[c]);
    f[k] = std::min(cap, prod + 1);
  }
  return f[0];
}

// Visits every ordinary stopping time (stop now, or continue on all children).
inline void for_each_stopping_time(const ScenarioTree& tree, const std::function<void(const OrdinaryStoppingTime&)>& visit) {
  OrdinaryStoppingTime tau;
  tau.stop.assign(tree.size(), false);
  // frontier of undecided nodes, processed depth first
  std::function<void(std::vector<std::size_t>)> rec = [&](std::vector<std::size_t> frontier) {
    if (frontier.empty()) {
      visit(tau);
      return;
    }
    std::size_t v = frontier.back();
    frontier.pop_back();
    tau.stop[v] = true;
    rec(frontier);
    tau.stop[v] = false;
    if (!tree.is_leaf(v)) {
      std::vector<std::size_t> next = frontier;
      for (std::size_t c : tree.children(v)) next.push_back(c);
      rec(std::move(next));
    }
  };
  rec({0});
}

}  // namespace hedgecone
