#pragma once

#include <cstdint>
#include <vector>

#include "hedgecone/rational.hpp"

namespace hedgecone::detail {

using IVec = std::vector<Int>;

inline Int idot(const IVec& a, const IVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

inline void make_primitive(IVec& v) {
  Int g = 0;
  for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (Int& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline IVec integer_direction(const Vec& v) {
  Vec p = primitive(v);
  IVec r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i].get_num();
  return r;
}

inline Vec to_rational(const IVec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct ConeGenerators {
  std::vector<IVec> lines;
  std::vector<IVec> rays;
};

// Generators of {x : e·x = 0 for e in eqs, a·x >= 0 for a in ineqs} in Z^n.
// Rays are extreme modulo the returned lineality space.
inline ConeGenerators double_description(std::size_t n, const std::vector<IVec>& eqs,
                                         const std::vector<IVec>& ineqs) {
  struct Ray {
    IVec v;
    Bits zero;
  };
  const std::size_t nbits = ineqs.size() + 2 * eqs.size();
  std::vector<IVec> lines;
  for (std::size_t i = 0; i < n; ++i) {
    IVec e(n, Int(0));
    e[i] = 1;
    lines.push_back(std::move(e));
  }
  std::vector<Ray> rays;
  std::size_t processed = 0;

  // Eliminate along the first line not orthogonal to a; returns that line oriented so a·l > 0.
  auto project_lines = [&](const IVec& a, IVec& chosen, Int& al) -> bool {
    std::size_t k = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      al = idot(a, lines[i]);
      if (sgn(al) != 0) {
        k = i;
        break;
      }
    }
    if (k == lines.size()) return false;
    chosen = std::move(lines[k]);
    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(k));
    if (sgn(al) < 0) {
      for (Int& x : chosen) x = -x;
      al = -al;
    }
    for (IVec& l : lines) {
      Int c = idot(a, l);
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < n; ++i) l[i] = al * l[i] - c * chosen[i];
      make_primitive(l);
    }
    for (Ray& r : rays) {
      Int c = idot(a, r.v);
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < n; ++i) r.v[i] = al * r.v[i] - c * chosen[i];
      make_primitive(r.v);
    }
    return true;
  };

  auto add_inequality = [&](const IVec& a) {
    const std::size_t bit = processed++;
    IVec l;
    Int al;
    if (project_lines(a, l, al)) {
      for (Ray& r : rays) r.zero.set(bit);
      Ray nr{std::move(l), Bits(nbits)};
      for (std::size_t b = 0; b < bit; ++b) nr.zero.set(b);
      rays.push_back(std::move(nr));
      return;
    }
    std::vector<Int> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = idot(a, rays[i].v);
      int s = sgn(val[i]);
      if (s > 0)
        pos.push_back(i);
      else if (s < 0)
        neg.push_back(i);
      else
        rays[i].zero.set(bit);
    }
    if (neg.empty()) return;
    std::vector<Ray> next;
    next.reserve(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (sgn(val[i]) >= 0) next.push_back(rays[i]);
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        Bits common = rays[p].zero & rays[q].zero;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k)
          if (k != p && k != q && common.subset_of(rays[k].zero)) adjacent = false;
        if (!adjacent) continue;
        IVec w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = val[p] * rays[q].v[i] - val[q] * rays[p].v[i];
        make_primitive(w);
        common.set(bit);
        next.push_back({std::move(w), std::move(common)});
      }
    }
    rays = std::move(next);
  };

  for (const IVec& e : eqs) {
    IVec l;
    Int al;
    if (project_lines(e, l, al)) continue;
    add_inequality(e);
    IVec ne = e;
    for (Int& x : ne) x = -x;
    add_inequality(ne);
  }
  for (const IVec& a : ineqs) add_inequality(a);

  ConeGenerators out;
  out.lines = std::move(lines);
  for (Ray& r : rays) out.rays.push_back(std::move(r.v));
  return out;
}

}  // namespace hedgecone::detail
