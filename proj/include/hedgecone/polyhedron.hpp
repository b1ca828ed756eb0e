#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hedgecone/dd.hpp"
#include "hedgecone/lp.hpp"
#include "hedgecone/rational.hpp"

namespace hedgecone {

struct HRep {
  std::vector<Halfspace> inequalities;  // normal·x >= offset
  std::vector<Halfspace> equalities;    // normal·x == offset
};

struct VRep {
  std::vector<Vec> points;
  std::vector<Vec> rays;
  std::vector<Vec> lines;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Reduced row echelon basis; each row scaled to a primitive integer vector with positive pivot.
struct Echelon {
  std::vector<Vec> rows;
  std::vector<std::size_t> pivots;

  Vec reduce(Vec v) const {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Rat& c = v[pivots[k]];
      if (sgn(c) == 0) continue;
      Rat f = c / rows[k][pivots[k]];
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(rows[k][i]) != 0) v[i] -= f * rows[k][i];
    }
    return v;
  }
};

inline Echelon echelon(std::vector<Vec> rows, std::size_t width) {
  Echelon e;
  std::size_t r = 0;
  for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][col]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rat inv = 1 / rows[r][col];
    for (Rat& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][col]) == 0) continue;
      Rat f = rows[i][col];
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        if (sgn(rows[r][k]) != 0) rows[i][k] -= f * rows[r][k];
    }
    e.pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  for (Vec& row : rows) row = primitive(row);
  e.rows = std::move(rows);
  return e;
}

inline void sort_unique(std::vector<Vec>& vs) {
  std::sort(vs.begin(), vs.end(), lex_less);
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

inline Vec augment(const Halfspace& h) {
  Vec v = h.normal;
  v.push_back(h.offset);
  return v;
}

inline Halfspace split(const Vec& aug) {
  Vec n(aug.begin(), aug.end() - 1);
  return {std::move(n), aug.back()};
}

inline bool halfspace_less(const Halfspace& a, const Halfspace& b) { return lex_less(augment(a), augment(b)); }

}  // namespace detail

class Polyhedron;
inline Polyhedron canonicalize(const Polyhedron& p);
inline Polyhedron translate(const Polyhedron& p, const Vec& t);
inline Polyhedron negate(const Polyhedron& p);

class Polyhedron {
 public:
  Polyhedron() = default;

  static Polyhedron from_hrep(std::size_t dim, HRep h) {
    for (const auto& s : h.inequalities) check_dim(dim, s.normal);
    for (const auto& s : h.equalities) check_dim(dim, s.normal);
    Polyhedron p(dim);
    p.h_ = std::move(h);
    return p;
  }

  static Polyhedron from_vrep(std::size_t dim, VRep v) {
    for (const auto& x : v.points) check_dim(dim, x);
    for (const auto& x : v.rays) check_dim(dim, x);
    for (const auto& x : v.lines) check_dim(dim, x);
    Polyhedron p(dim);
    if (v.points.empty()) {
      p.empty_ = true;
      p.canonical_ = true;
      return p;
    }
    p.v_ = std::move(v);
    return p;
  }

  static Polyhedron empty_set(std::size_t dim) {
    Polyhedron p(dim);
    p.empty_ = true;
    p.canonical_ = true;
    return p;
  }

  static Polyhedron whole_space(std::size_t dim) { return canonical_from_hrep(dim, {}); }

  static Polyhedron cone(std::size_t dim, std::vector<Vec> rays, std::vector<Vec> lines = {}) {
    return from_vrep(dim, VRep{{zeros(dim)}, std::move(rays), std::move(lines)});
  }

  static Polyhedron point(Vec p) {
    std::size_t d = p.size();
    return from_vrep(d, VRep{{std::move(p)}, {}, {}});
  }

  static Polyhedron canonical_from_hrep(std::size_t dim, HRep h);
  static Polyhedron canonical_from_vrep(std::size_t dim, VRep v);

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return empty_; }
  bool is_canonical() const { return canonical_; }
  bool has_hrep() const { return empty_ || h_.has_value(); }
  bool has_vrep() const { return empty_ || v_.has_value(); }

  const HRep& hrep() const {
    if (empty_) throw GeometryError("empty polyhedron has no halfspace representation");
    if (!h_) throw GeometryError("halfspace representation not available");
    return *h_;
  }
  const VRep& vrep() const {
    if (empty_) throw GeometryError("empty polyhedron has no generator representation");
    if (!v_) throw GeometryError("generator representation not available");
    return *v_;
  }

  bool is_bounded() const { return empty_ || (vrep().rays.empty() && vrep().lines.empty()); }
  bool is_cone() const {
    if (empty_) return false;
    const VRep& v = vrep();
    return v.points.size() == 1 && is_zero(v.points[0]);
  }

  // Canonical forms only.
  friend bool operator==(const Polyhedron& a, const Polyhedron& b) {
    if (!a.canonical_ || !b.canonical_) throw GeometryError("comparison requires canonical forms");
    if (a.dim_ != b.dim_ || a.empty_ != b.empty_) return false;
    if (a.empty_) return true;
    auto same_h = [](const std::vector<Halfspace>& x, const std::vector<Halfspace>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].normal != y[i].normal || x[i].offset != y[i].offset) return false;
      return true;
    };
    return same_h(a.h_->inequalities, b.h_->inequalities) && same_h(a.h_->equalities, b.h_->equalities) &&
           a.v_->points == b.v_->points && a.v_->rays == b.v_->rays && a.v_->lines == b.v_->lines;
  }

 private:
  explicit Polyhedron(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("polyhedron dimension must be positive");
  }

  static void check_dim(std::size_t dim, const Vec& v) {
    if (v.size() != dim) throw std::invalid_argument("dimension mismatch: expected " + std::to_string(dim) +
                                                     ", got " + std::to_string(v.size()));
  }

  static std::optional<VRep> hrep_to_vrep(std::size_t dim, const HRep& h);
  static HRep vrep_to_hrep(std::size_t dim, const VRep& v);
  static VRep normalize(std::size_t dim, VRep v);
  static HRep normalize(std::size_t dim, HRep h);

  friend Polyhedron canonicalize(const Polyhedron& p);
  friend Polyhedron translate(const Polyhedron& p, const Vec& t);
  friend Polyhedron negate(const Polyhedron& p);

  std::size_t dim_ = 0;
  bool empty_ = false;
  bool canonical_ = false;
  std::optional<HRep> h_;
  std::optional<VRep> v_;
};

// Homogenization: P = {x : Ax >= b, Ex = f} <-> {(x0,x) : x0 >= 0, Ax >= b x0, Ex = f x0}.
inline std::optional<VRep> Polyhedron::hrep_to_vrep(std::size_t dim, const HRep& h) {
  const std::size_t n = dim + 1;
  std::vector<detail::IVec> eqs, ineqs;
  auto lift = [&](const Halfspace& s) {
    Vec v(n);
    v[0] = -s.offset;
    for (std::size_t i = 0; i < dim; ++i) v[i + 1] = s.normal[i];
    return detail::integer_direction(v);
  };
  for (const auto& s : h.equalities) eqs.push_back(lift(s));
  {
    detail::IVec x0(n, Int(0));
    x0[0] = 1;
    ineqs.push_back(std::move(x0));
  }
  for (const auto& s : h.inequalities) ineqs.push_back(lift(s));
  detail::ConeGenerators g = detail::double_description(n, eqs, ineqs);
  VRep v;
  for (const auto& l : g.lines) {
    if (sgn(l[0]) != 0) throw GeometryError("internal: homogenized lineality leaves x0 = 0");
    v.lines.push_back(detail::to_rational(detail::IVec(l.begin() + 1, l.end())));
  }
  for (const auto& r : g.rays) {
    Vec tail = detail::to_rational(detail::IVec(r.begin() + 1, r.end()));
    if (sgn(r[0]) > 0) {
      Rat inv(Int(1), r[0]);
      v.points.push_back(inv * tail);
    } else {
      v.rays.push_back(std::move(tail));
    }
  }
  if (v.points.empty()) return std::nullopt;
  return normalize(dim, std::move(v));
}

inline HRep Polyhedron::vrep_to_hrep(std::size_t dim, const VRep& v) {
  const std::size_t n = dim + 1;
  std::vector<detail::IVec> eqs, ineqs;
  auto lift = [&](const Vec& x, int x0) {
    Vec w(n);
    w[0] = x0;
    for (std::size_t i = 0; i < dim; ++i) w[i + 1] = x[i];
    return detail::integer_direction(w);
  };
  for (const auto& l : v.lines) eqs.push_back(lift(l, 0));
  for (const auto& p : v.points) ineqs.push_back(lift(p, 1));
  for (const auto& r : v.rays) ineqs.push_back(lift(r, 0));
  detail::ConeGenerators g = detail::double_description(n, eqs, ineqs);
  HRep h;
  auto to_halfspace = [&](const detail::IVec& c) {
    Halfspace s;
    s.normal = detail::to_rational(detail::IVec(c.begin() + 1, c.end()));
    s.offset = Rat(-c[0]);
    return s;
  };
  for (const auto& l : g.lines) {
    Halfspace s = to_halfspace(l);
    if (is_zero(s.normal)) throw GeometryError("internal: degenerate equality in generator conversion");
    h.equalities.push_back(std::move(s));
  }
  for (const auto& r : g.rays) {
    Halfspace s = to_halfspace(r);
    if (is_zero(s.normal)) continue;  // x0 >= 0
    h.inequalities.push_back(std::move(s));
  }
  return normalize(dim, std::move(h));
}

inline VRep Polyhedron::normalize(std::size_t dim, VRep v) {
  detail::Echelon lin = detail::echelon(std::move(v.lines), dim);
  VRep out;
  out.lines = lin.rows;
  for (auto& p : v.points) out.points.push_back(lin.reduce(std::move(p)));
  for (auto& r : v.rays) {
    Vec red = lin.reduce(std::move(r));
    if (!is_zero(red)) out.rays.push_back(primitive(red));
  }
  detail::sort_unique(out.points);
  detail::sort_unique(out.rays);
  return out;
}

inline HRep Polyhedron::normalize(std::size_t dim, HRep h) {
  std::vector<Vec> aug;
  for (const auto& s : h.equalities) aug.push_back(detail::augment(s));
  detail::Echelon eq = detail::echelon(std::move(aug), dim);
  HRep out;
  for (const auto& row : eq.rows) out.equalities.push_back(detail::split(row));
  std::vector<Vec> ineqs;
  for (const auto& s : h.inequalities) {
    Vec red = eq.reduce(detail::augment(s));
    ineqs.push_back(primitive(red));
  }
  detail::sort_unique(ineqs);
  for (const auto& a : ineqs) out.inequalities.push_back(detail::split(a));
  return out;
}

inline Polyhedron Polyhedron::canonical_from_hrep(std::size_t dim, HRep h) {
  Polyhedron p = from_hrep(dim, std::move(h));
  return canonicalize(p);
}

inline Polyhedron Polyhedron::canonical_from_vrep(std::size_t dim, VRep v) {
  Polyhedron p = from_vrep(dim, std::move(v));
  return canonicalize(p);
}

// Both representations, irredundant, deterministic ordering.
inline Polyhedron canonicalize(const Polyhedron& p) {
  if (p.canonical_ || p.empty_) return p;
  Polyhedron out(p.dim_);
  if (p.h_) {
    std::optional<VRep> v = Polyhedron::hrep_to_vrep(p.dim_, *p.h_);
    if (!v) return Polyhedron::empty_set(p.dim_);
    out.h_ = Polyhedron::vrep_to_hrep(p.dim_, *v);
    out.v_ = std::move(v);
  } else if (p.v_) {
    HRep h = Polyhedron::vrep_to_hrep(p.dim_, *p.v_);
    std::optional<VRep> v = Polyhedron::hrep_to_vrep(p.dim_, h);
    if (!v) throw GeometryError("internal: generator set converted to an empty halfspace system");
    out.h_ = std::move(h);
    out.v_ = std::move(v);
  } else {
    throw GeometryError("polyhedron has no representation");
  }
  out.canonical_ = true;
  if (p.h_ && p.v_) {
    Polyhedron from_v = Polyhedron::canonical_from_vrep(p.dim_, *p.v_);
    if (!(from_v == out)) throw GeometryError("inconsistent representations: halfspace and generator sets differ");
  }
  return out;
}

inline Polyhedron convert(const Polyhedron& p) { return canonicalize(p); }

// p itself when canonical, else a canonical copy kept in `tmp`.
inline const Polyhedron& canonical_ref(const Polyhedron& p, Polyhedron& tmp) {
  if (p.is_canonical()) return p;
  tmp = canonicalize(p);
  return tmp;
}

inline void require_same_dim(const Polyhedron& a, const Polyhedron& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch between polyhedra");
}

inline Polyhedron intersect(const Polyhedron& a, const Polyhedron& b) {
  require_same_dim(a, b);
  if (a.is_empty()) return a;
  if (b.is_empty()) return b;
  Polyhedron ta, tb;
  HRep h = canonical_ref(a, ta).hrep();
  const HRep& hb = canonical_ref(b, tb).hrep();
  h.inequalities.insert(h.inequalities.end(), hb.inequalities.begin(), hb.inequalities.end());
  h.equalities.insert(h.equalities.end(), hb.equalities.begin(), hb.equalities.end());
  return Polyhedron::canonical_from_hrep(a.dim(), std::move(h));
}

inline Polyhedron intersect_all(const std::vector<Polyhedron>& sets) {
  if (sets.empty()) throw std::invalid_argument("intersection of no sets");
  HRep h;
  for (const auto& s : sets) {
    require_same_dim(s, sets.front());
    if (s.is_empty()) return s;
    Polyhedron tmp;
    const HRep& hs = canonical_ref(s, tmp).hrep();
    h.inequalities.insert(h.inequalities.end(), hs.inequalities.begin(), hs.inequalities.end());
    h.equalities.insert(h.equalities.end(), hs.equalities.begin(), hs.equalities.end());
  }
  return Polyhedron::canonical_from_hrep(sets.front().dim(), std::move(h));
}

inline Polyhedron minkowski_sum(const Polyhedron& a, const Polyhedron& b) {
  require_same_dim(a, b);
  if (a.is_empty()) return a;
  if (b.is_empty()) return b;
  Polyhedron ta, tb;
  const VRep& va = canonical_ref(a, ta).vrep();
  const VRep& vb = canonical_ref(b, tb).vrep();
  VRep v;
  for (const auto& p : va.points)
    for (const auto& q : vb.points) v.points.push_back(p + q);
  v.rays = va.rays;
  v.rays.insert(v.rays.end(), vb.rays.begin(), vb.rays.end());
  v.lines = va.lines;
  v.lines.insert(v.lines.end(), vb.lines.begin(), vb.lines.end());
  return Polyhedron::canonical_from_vrep(a.dim(), std::move(v));
}

inline Polyhedron convex_hull_closed(const Polyhedron& a, const Polyhedron& b) {
  require_same_dim(a, b);
  if (a.is_empty()) return canonicalize(b);
  if (b.is_empty()) return canonicalize(a);
  Polyhedron ta, tb;
  VRep v = canonical_ref(a, ta).vrep();
  const VRep& vb = canonical_ref(b, tb).vrep();
  v.points.insert(v.points.end(), vb.points.begin(), vb.points.end());
  v.rays.insert(v.rays.end(), vb.rays.begin(), vb.rays.end());
  v.lines.insert(v.lines.end(), vb.lines.begin(), vb.lines.end());
  return Polyhedron::canonical_from_vrep(a.dim(), std::move(v));
}

// A* = {y : y·x >= 0 for all x in A}
inline Polyhedron polar(const Polyhedron& c) {
  Polyhedron cc = canonicalize(c);
  if (!cc.is_cone()) throw GeometryError("polar requires a cone");
  HRep h;
  for (const auto& r : cc.vrep().rays) h.inequalities.push_back({r, Rat(0)});
  for (const auto& l : cc.vrep().lines) h.equalities.push_back({l, Rat(0)});
  return Polyhedron::canonical_from_hrep(c.dim(), std::move(h));
}

inline Polyhedron recession_cone(const Polyhedron& p) {
  if (p.is_empty()) throw GeometryError("recession cone of an empty set");
  Polyhedron tmp;
  const VRep& v = canonical_ref(p, tmp).vrep();
  return Polyhedron::canonical_from_vrep(p.dim(), VRep{{zeros(p.dim())}, v.rays, v.lines});
}

inline Polyhedron translate(const Polyhedron& p, const Vec& t) {
  if (t.size() != p.dim()) throw std::invalid_argument("dimension mismatch in translation");
  if (p.empty_) return p;
  Polyhedron c = canonicalize(p);
  Polyhedron out(p.dim_);
  HRep h = *c.h_;
  for (auto& s : h.inequalities) s.offset += dot(s.normal, t);
  for (auto& s : h.equalities) s.offset += dot(s.normal, t);
  VRep v = *c.v_;
  for (auto& x : v.points) x += t;
  out.h_ = Polyhedron::normalize(p.dim_, std::move(h));
  out.v_ = Polyhedron::normalize(p.dim_, std::move(v));
  out.canonical_ = true;
  return out;
}

inline Polyhedron negate(const Polyhedron& p) {
  if (p.empty_) return p;
  Polyhedron c = canonicalize(p);
  Polyhedron out(p.dim_);
  HRep h = *c.h_;
  for (auto& s : h.inequalities) s.normal = -s.normal;
  for (auto& s : h.equalities) s.normal = -s.normal;
  VRep v = *c.v_;
  for (auto& x : v.points) x = -x;
  for (auto& x : v.rays) x = -x;
  out.h_ = Polyhedron::normalize(p.dim_, std::move(h));
  out.v_ = Polyhedron::normalize(p.dim_, std::move(v));
  out.canonical_ = true;
  return out;
}

inline bool member(const Polyhedron& p, const Vec& x) {
  if (x.size() != p.dim()) throw std::invalid_argument("dimension mismatch in membership test");
  if (p.is_empty()) return false;
  Polyhedron tmp;
  const HRep& h = p.has_hrep() ? p.hrep() : canonical_ref(p, tmp).hrep();
  for (const auto& s : h.inequalities)
    if (dot(s.normal, x) < s.offset) return false;
  for (const auto& s : h.equalities)
    if (dot(s.normal, x) != s.offset) return false;
  return true;
}

// x is a direction of recession of p
inline bool member_direction(const Polyhedron& p, const Vec& x) {
  if (p.is_empty()) return false;
  Polyhedron tmp;
  const HRep& h = p.has_hrep() ? p.hrep() : canonical_ref(p, tmp).hrep();
  for (const auto& s : h.inequalities)
    if (sgn(dot(s.normal, x)) < 0) return false;
  for (const auto& s : h.equalities)
    if (sgn(dot(s.normal, x)) != 0) return false;
  return true;
}

// inner ⊆ outer
inline bool contains(const Polyhedron& outer, const Polyhedron& inner) {
  require_same_dim(outer, inner);
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  Polyhedron o = outer.has_hrep() ? outer : canonicalize(outer);
  Polyhedron tmp;
  const VRep& v = inner.has_vrep() ? inner.vrep() : canonical_ref(inner, tmp).vrep();
  for (const auto& x : v.points)
    if (!member(o, x)) return false;
  for (const auto& r : v.rays)
    if (!member_direction(o, r)) return false;
  for (const auto& l : v.lines)
    if (!member_direction(o, l) || !member_direction(o, -l)) return false;
  return true;
}

inline bool same_set(const Polyhedron& a, const Polyhedron& b) { return contains(a, b) && contains(b, a); }

// sup{y·x : x in P}; nullopt means +infinity.
inline std::optional<Rat> support_eval(const Polyhedron& p, const Vec& y) {
  if (y.size() != p.dim()) throw std::invalid_argument("dimension mismatch in support function");
  if (p.is_empty()) throw GeometryError("support function of an empty set");
  Polyhedron tmp;
  const VRep& v = p.has_vrep() ? p.vrep() : canonical_ref(p, tmp).vrep();
  for (const auto& l : v.lines)
    if (sgn(dot(y, l)) != 0) return std::nullopt;
  for (const auto& r : v.rays)
    if (sgn(dot(y, r)) > 0) return std::nullopt;
  Rat best = dot(y, v.points.front());
  for (const auto& x : v.points) best = std::max(best, dot(y, x));
  return best;
}

// {x in C : x^j = 1}, j zero-based
inline Polyhedron sigma_slice(const Polyhedron& c, std::size_t j) {
  if (j >= c.dim()) throw std::invalid_argument("slice index out of range");
  if (c.is_empty()) return c;
  HRep h = canonicalize(c).hrep();
  h.equalities.push_back({unit(c.dim(), j), Rat(1)});
  return Polyhedron::canonical_from_hrep(c.dim(), std::move(h));
}

// Feasibility route independent of the halfspace system: x in conv(points) + cone(rays) + span(lines).
inline bool member_by_lp(const Polyhedron& p, const Vec& x) {
  if (p.is_empty()) return false;
  Polyhedron tmp;
  const VRep& v = p.has_vrep() ? p.vrep() : canonical_ref(p, tmp).vrep();
  const std::size_t d = p.dim();
  const std::size_t np = v.points.size(), nr = v.rays.size(), nl = v.lines.size();
  LinearProgram lp(np + nr + nl);
  for (std::size_t i = 0; i < np + nr; ++i) lp.set_nonnegative(i);
  for (std::size_t k = 0; k < d; ++k) {
    Vec row = zeros(lp.num_vars);
    for (std::size_t i = 0; i < np; ++i) row[i] = v.points[i][k];
    for (std::size_t i = 0; i < nr; ++i) row[np + i] = v.rays[i][k];
    for (std::size_t i = 0; i < nl; ++i) row[np + nr + i] = v.lines[i][k];
    lp.add_eq(std::move(row), x[k]);
  }
  Vec conv = zeros(lp.num_vars);
  for (std::size_t i = 0; i < np; ++i) conv[i] = 1;
  lp.add_eq(std::move(conv), Rat(1));
  return solve_lp(lp).status == LpStatus::optimal;
}

}  // namespace hedgecone
