// Slow, independent re-implementations used to cross-check the library.
#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "anoflip/fatgraph.hpp"
#include "anoflip/manifold_assembly.hpp"

namespace oracle {

// Canonical rotation of a cycle: start at the least element.
inline std::vector<int> least_rotation(std::vector<int> c) {
  if (c.empty()) return c;
  auto it = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), it, c.end());
  return c;
}

// Face tracing from scratch, using only vertex_darts and edges: walk dart d,
// arrive at the far end, turn to the next dart counterclockwise there.
inline std::set<std::vector<int>> naive_faces(const anoflip::FatGraph& g) {
  std::map<int, int> other_end, owner;
  std::map<int, std::vector<int>> order;
  for (size_t v = 0; v < g.vertex_darts.size(); ++v)
    for (int d : g.vertex_darts[v]) {
      owner[d] = static_cast<int>(v);
      order[static_cast<int>(v)].push_back(d);
    }
  for (const auto& e : g.edges) {
    other_end[e[0]] = e[1];
    other_end[e[1]] = e[0];
  }
  auto turn = [&](int d) {
    const auto& o = order[owner[d]];
    for (size_t i = 0; i < o.size(); ++i)
      if (o[i] == d) return o[(i + 1) % o.size()];
    return -1;
  };
  std::set<std::vector<int>> faces;
  std::set<int> used;
  // deliberately scan darts in decreasing order; canonical form hides it
  for (auto it = other_end.rbegin(); it != other_end.rend(); ++it) {
    int d0 = it->first;
    if (used.count(d0)) continue;
    std::vector<int> face;
    int d = d0;
    do {
      face.push_back(d);
      used.insert(d);
      d = turn(other_end[d]);
    } while (d != d0);
    faces.insert(least_rotation(face));
  }
  return faces;
}

// Even-parity lattice generators keep the quotient grid graph admissible and
// loop-free for small determinants.
inline anoflip::FatGraph random_admissible_graph(std::mt19937& rng) {
  static const std::vector<std::array<int, 2>> even{
      {2, 0}, {0, 2}, {1, 1}, {1, -1}, {2, 2}, {2, -2}, {1, 3},
      {3, 1},  {3, -1}, {1, -3}, {0, 4}, {4, 0}, {2, 4}, {4, 2}};
  std::uniform_int_distribution<size_t> pick(0, even.size() - 1);
  for (;;) {
    auto v1 = even[pick(rng)], v2 = even[pick(rng)];
    long d = static_cast<long>(v1[0]) * v2[1] - static_cast<long>(v1[1]) * v2[0];
    long a = d < 0 ? -d : d;
    if (a != 2 && a != 4 && a != 6) continue;
    anoflip::FatGraph g = anoflip::lattice_quotient_graph(v1, v2);
    bool loop = false;
    for (const auto& e : g.edges)
      if (g.vertex_of(e[0]) == g.vertex_of(e[1])) loop = true;
    if (loop) continue;
    if (!anoflip::validate_admissible(g).empty()) continue;
    return g;
  }
}

// All simple cycles of a digraph up to max_len, as canonically rotated node
// sequences.
inline std::set<std::vector<int>> naive_cycles(const std::vector<std::vector<int>>& arcs,
                                               int max_len) {
  std::set<std::vector<int>> out;
  const int n = static_cast<int>(arcs.size());
  std::vector<int> path;
  std::vector<char> on(n, 0);
  // plain exhaustive path search from every node, deduplicated by rotation
  auto dfs = [&](auto&& self, int node) -> void {
    for (int next : arcs[node]) {
      if (next == path.front()) out.insert(least_rotation(path));
      if (!on[next] && static_cast<int>(path.size()) < max_len) {
        on[next] = 1;
        path.push_back(next);
        self(self, next);
        path.pop_back();
        on[next] = 0;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    on.assign(n, 0);
    on[s] = 1;
    dfs(dfs, s);
  }
  return out;
}

// Brute-force equivalence search: enumerate every raw candidate (direction
// flag x piece matching x dart bijections x fiber flags) and accept purely by
// replaying it against the flows.
inline std::optional<anoflip::EquivalenceCertificate> brute_force_equiv(
    const anoflip::GluedFlow& f1, const anoflip::GluedFlow& f2) {
  using namespace anoflip;
  const int k = static_cast<int>(f1.pieces.size());
  if (static_cast<int>(f2.pieces.size()) != k) return std::nullopt;
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  for (int rev = 0; rev <= 1; ++rev) {
    std::vector<int> p = perm;
    std::sort(p.begin(), p.end());
    do {
      std::vector<std::vector<FatGraphIso>> iso(k);
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        try {
          iso[i] = isomorphisms(f1.pieces[i].graph, f2.pieces[p[i]].graph);
        } catch (const Error&) {
          ok = false;
        }
        if (iso[i].empty()) ok = false;
      }
      if (!ok) continue;
      std::vector<size_t> pick(k, 0);   // iso index * 2 + fiber flag bit
      for (;;) {
        EquivalenceCertificate cert;
        cert.reverses_flow_direction = rev != 0;
        cert.piece_matching = p;
        for (int i = 0; i < k; ++i) {
          cert.piece_maps.push_back(iso[i][pick[i] / 2]);
          cert.fiber_flags.push_back(pick[i] % 2 == 0 ? +1 : -1);
        }
        if (replay_certificate(cert, f1, f2)) return cert;
        int i = k - 1;
        while (i >= 0 && ++pick[i] == iso[i].size() * 2) pick[i--] = 0;
        if (i < 0) break;
      }
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return std::nullopt;
}

}  // namespace oracle
