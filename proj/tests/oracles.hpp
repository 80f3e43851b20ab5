#pragma once

// Brute-force reference implementations used as test oracles. They only read
// labels and raw edges from the library types and recompute everything else.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <tuple>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pomset/partial_string.hpp"
#include "pomset/program.hpp"

namespace oracle {

using pomset::Edge;
using pomset::Label;
using pomset::PartialString;

struct Poset {
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> le;  // reflexive-transitive

  std::size_t size() const { return labels.size(); }
};

// Warshall closure of the edge relation.
inline Poset of(std::vector<std::string> labels, const std::vector<Edge>& edges) {
  const std::size_t n = labels.size();
  Poset p{std::move(labels), std::vector<std::vector<bool>>(n, std::vector<bool>(n, false))};
  for (std::size_t i = 0; i < n; ++i) p.le[i][i] = true;
  for (auto [a, b] : edges) p.le[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (p.le[i][k] && p.le[k][j]) p.le[i][j] = true;
  return p;
}

inline Poset of(const PartialString& s) {
  std::vector<std::string> labels;
  for (const auto& l : s.labels()) labels.push_back(l.to_string());
  return of(std::move(labels), s.edges());
}

inline bool is_partial_order(const Poset& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.le[i][i]) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && p.le[i][j] && p.le[j][i]) return false;
      for (std::size_t k = 0; k < n; ++k)
        if (p.le[i][j] && p.le[j][k] && !p.le[i][k]) return false;
    }
  }
  return true;
}

// x ⊑ y: some permutation f: y -> x preserves labels and order.
inline bool refines(const Poset& x, const Poset& y) {
  const std::size_t n = x.size();
  if (y.size() != n) return false;
  std::vector<std::size_t> f(n);
  std::iota(f.begin(), f.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = y.labels[i] == x.labels[f[i]];
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (y.le[i][j] && !x.le[f[i]][f[j]]) ok = false;
    if (ok) return true;
  } while (std::next_permutation(f.begin(), f.end()));
  return false;
}

inline bool refines(const PartialString& x, const PartialString& y) { return refines(of(x), of(y)); }

inline bool isomorphic(const Poset& x, const Poset& y) { return refines(x, y) && refines(y, x); }

// Sorted (label, down-set size, up-set size) triples; equal for isomorphic posets.
inline std::vector<std::tuple<std::string, std::size_t, std::size_t>> profile(const Poset& p) {
  std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t down = 0, up = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      down += p.le[j][i];
      up += p.le[i][j];
    }
    out.emplace_back(p.labels[i], down, up);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void insert_unique(std::vector<Poset>& set, Poset p) {
  const auto key = profile(p);
  for (const auto& q : set)
    if (profile(q) == key && isomorphic(p, q)) return;
  set.push_back(std::move(p));
}

inline Poset seq(const Poset& x, const Poset& y) {
  const std::size_t n = x.size(), m = y.size();
  Poset r;
  r.labels = x.labels;
  r.labels.insert(r.labels.end(), y.labels.begin(), y.labels.end());
  r.le.assign(n + m, std::vector<bool>(n + m, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.le[i][j] = x.le[i][j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r.le[n + i][n + j] = y.le[i][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) r.le[i][n + j] = true;
  return r;
}

inline Poset par(const Poset& x, const Poset& y) {
  Poset r = seq(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r.le[i][x.size() + j] = false;
  return r;
}

inline Poset join(const Poset& x, const Poset& y, pomset::Join j) {
  return j == pomset::Join::seq ? seq(x, y) : par(x, y);
}

// Every partial order containing p's order, up to isomorphism. Each free
// pair is either added (with its transitive consequences) or forbidden.
inline std::vector<Poset> closure(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<std::pair<std::size_t, std::size_t>> free;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!p.le[i][j] && !p.le[j][i]) free.emplace_back(i, j);
  std::vector<Poset> out;
  std::vector<std::vector<bool>> forbidden(n, std::vector<bool>(n, false));
  std::function<void(std::size_t, const Poset&)> go = [&](std::size_t k, const Poset& q) {
    if (k == free.size()) {
      insert_unique(out, q);
      return;
    }
    auto [i, j] = free[k];
    if (q.le[i][j] || q.le[j][i]) {
      go(k + 1, q);
      return;
    }
    for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
      Poset r = q;
      bool ok = true;
      for (std::size_t u = 0; u < n && ok; ++u)
        for (std::size_t v = 0; v < n && ok; ++v)
          if (q.le[u][a] && q.le[b][v]) {
            r.le[u][v] = true;
            ok = !forbidden[u][v];
          }
      if (ok) go(k + 1, r);
    }
    forbidden[i][j] = forbidden[j][i] = true;
    go(k + 1, q);
    forbidden[i][j] = forbidden[j][i] = false;
  };
  go(0, p);
  return out;
}

// Union of the closures of several generators.
inline std::vector<Poset> closure(const std::vector<Poset>& gens) {
  std::vector<Poset> out;
  for (const auto& g : gens)
    for (auto& q : closure(g)) insert_unique(out, std::move(q));
  return out;
}

inline std::vector<Poset> posets(const pomset::Program& p) {
  std::vector<Poset> out;
  for (const auto& g : p.generators()) out.push_back(of(g));
  return out;
}

inline bool member(const Poset& s, const std::vector<Poset>& gens) {
  return std::any_of(gens.begin(), gens.end(), [&](const Poset& g) { return refines(s, g); });
}

inline bool subset(const std::vector<Poset>& xs, const std::vector<Poset>& ys) {
  return std::all_of(xs.begin(), xs.end(), [&](const Poset& x) { return member(x, ys); });
}

// Generators of Y^k: all k-fold compositions of generators of Y.
inline std::vector<Poset> power(const std::vector<Poset>& y, std::size_t k, pomset::Join j) {
  std::vector<Poset> acc{Poset{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Poset> next;
    for (const auto& g : y)
      for (const auto& a : acc) next.push_back(join(g, a, j));
    acc = std::move(next);
  }
  return acc;
}

// Linear extensions of p, up to isomorphism.
inline std::vector<Poset> linearizations(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Poset> out;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if (p.le[order[j]][order[i]]) ok = false;
    if (!ok) continue;
    Poset c;
    for (std::size_t i = 0; i < n; ++i) c.labels.push_back(p.labels[order[i]]);
    c.le.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) c.le[i][j] = true;
    insert_unique(out, std::move(c));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// Random string over `alphabet` with up to `max_events` events; edges only
// go from lower to higher index, each with probability `density`.
inline PartialString random_string(std::mt19937& rng, std::size_t min_events, std::size_t max_events,
                                   const std::vector<Label>& alphabet, double density = 0.35) {
  std::uniform_int_distribution<std::size_t> size(min_events, max_events);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::bernoulli_distribution edge(density);
  const std::size_t n = size(rng);
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(alphabet[pick(rng)]);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) edges.emplace_back(i, j);
  // Shuffle event indices so that edge direction does not follow index order.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Label> shuffled(n);
  for (std::size_t i = 0; i < n; ++i) shuffled[perm[i]] = labels[i];
  for (auto& [a, b] : edges) {
    a = perm[a];
    b = perm[b];
  }
  return PartialString(std::move(shuffled), std::move(edges));
}

inline std::vector<Label> opaque_alphabet(std::size_t k) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(Label::opaque(std::string(1, static_cast<char>('a' + i))));
  return out;
}

inline pomset::Program random_program(std::mt19937& rng, std::size_t max_gens, std::size_t min_events,
                                      std::size_t max_events, const std::vector<Label>& alphabet) {
  std::uniform_int_distribution<std::size_t> count(1, max_gens);
  std::vector<PartialString> gens;
  for (std::size_t i = count(rng); i > 0; --i) gens.push_back(random_string(rng, min_events, max_events, alphabet));
  return pomset::Program(std::move(gens));
}

}  // namespace oracle
