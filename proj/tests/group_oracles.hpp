#pragma once

// Enumeration-based references for small permutation groups.

#include <algorithm>
#include <set>
#include <unordered_map>
#include <vector>

#include "bv/structure.hpp"

namespace oracle {

using bv::permgrp::Perm;
using bv::permgrp::PermHash;
using bv::structure::HyperbolicTriple;
using bv::structure::Type;
using bv::structure::is_hyperbolic;

// Elements and conjugacy classes of a small group by plain enumeration.
struct SmallGroup {
  std::vector<Perm> elems;
  std::unordered_map<Perm, std::size_t, PermHash> index;
  std::vector<int> cls;
  int classes = 0;

  explicit SmallGroup(const std::vector<Perm> &gens) {
    elems.push_back(Perm(gens.front().degree()));
    index.emplace(elems[0], 0);
    for (std::size_t k = 0; k < elems.size(); ++k)
      for (const auto &g : gens) {
        Perm e = elems[k] * g;
        if (index.emplace(e, elems.size()).second)
          elems.push_back(std::move(e));
      }
    cls.assign(elems.size(), -1);
    for (std::size_t k = 0; k < elems.size(); ++k) {
      if (cls[k] >= 0)
        continue;
      for (const auto &g : elems)
        cls[index.at(elems[k].conj(g))] = classes;
      ++classes;
    }
  }
  int class_of(const Perm &p) const { return cls[index.at(p)]; }

  bool generates(const Perm &x, const Perm &y) const {
    std::set<Perm> seen{Perm(x.degree())};
    std::vector<Perm> queue{Perm(x.degree())};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto *g : {&x, &y}) {
        Perm h = queue[i] * *g;
        if (seen.insert(h).second)
          queue.push_back(std::move(h));
      }
    return seen.size() == elems.size();
  }

  std::set<int> power_classes(const Perm &u) const {
    std::set<int> out;
    for (Perm w = u; !w.is_identity(); w = w * u)
      out.insert(class_of(w));
    return out;
  }
};

inline HyperbolicTriple make_triple(const Perm &x, const Perm &y) {
  const Perm z = (x * y).inverse();
  return {x, y, z, Type{x.order(), y.order(), z.order()}, 0};
}

// Condition (iii) over all nontrivial powers of all three elements.
inline bool condition_oracle(const SmallGroup &sg, const HyperbolicTriple &a, const HyperbolicTriple &b) {
  std::set<int> ca, cb;
  for (const auto *u : {&a.x, &a.y, &a.z})
    for (int c : sg.power_classes(*u))
      ca.insert(c);
  for (const auto *v : {&b.x, &b.y, &b.z})
    for (int c : sg.power_classes(*v))
      if (ca.count(c))
        return false;
  return true;
}

// Existence of a Beauville structure by enumeration of generating pairs.
inline bool beauville_oracle(const SmallGroup &sg) {
  std::vector<std::set<int>> sets;
  for (const auto &x : sg.elems)
    for (const auto &y : sg.elems) {
      if (x.is_identity() || y.is_identity())
        continue;
      const auto t = make_triple(x, y);
      if (!is_hyperbolic(t.type) || !sg.generates(x, y))
        continue;
      std::set<int> s;
      for (const auto *u : {&t.x, &t.y, &t.z})
        for (int c : sg.power_classes(*u))
          s.insert(c);
      if (std::find(sets.begin(), sets.end(), s) == sets.end())
        sets.push_back(s);
    }
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i; j < sets.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                            std::back_inserter(common));
      if (common.empty())
        return true;
    }
  return false;
}

} // namespace oracle
