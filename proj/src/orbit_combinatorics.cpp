#include "anoflip/orbit_combinatorics.hpp"

#include <algorithm>
#include <queue>

namespace anoflip {

namespace {

// Darts of the base vertex as seen by a lift: cone vertices repeat their two
// darts, so every lift is 4-valent.
std::vector<int> lifted_darts(const FatGraph& g, int v) {
  switch (g.markings[v]) {
    case VertexMarking::Regular:
      return g.vertex_darts[v];
    case VertexMarking::Cone: {
      int d1 = g.vertex_darts[v][0], d2 = g.vertex_darts[v][1];
      return {d1, d2, d1, d2};
    }
    case VertexMarking::ReflectorEnd:
      throw UnsupportedMarking("reflector ends cannot be unfolded");
  }
  throw UnsupportedMarking("unknown marking");
}

}  // namespace

FatTreeBall unfold_tree(const SeifertPiece& p, int radius) {
  if (radius < 0) throw Error("radius must be >= 0");
  const FatGraph& g = p.graph;
  for (auto m : g.markings)
    if (m == VertexMarking::ReflectorEnd)
      throw UnsupportedMarking("reflector ends cannot be unfolded");

  std::vector<FaceRole> role_of(g.dart_count());
  for (const auto& t : p.tori)
    for (int d : t.cells) role_of[d] = t.role;

  FatTreeBall ball;
  ball.radius = radius;

  auto add_node = [&](int base_vertex, int depth) {
    FatTreeBall::Node n;
    n.base_vertex = base_vertex;
    n.depth = depth;
    auto darts = lifted_darts(g, base_vertex);
    n.slots.assign(darts.size(), -1);
    n.corner_roles.resize(darts.size());
    // The corner between consecutive darts (d_k, d_{k+1}) lies on the face
    // that exits the vertex through d_{k+1}.
    for (size_t k = 0; k < darts.size(); ++k)
      n.corner_roles[k] = role_of[darts[(k + 1) % darts.size()]];
    ball.nodes.push_back(std::move(n));
    return static_cast<int>(ball.nodes.size()) - 1;
  };

  add_node(0, 0);
  std::queue<int> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    int n = frontier.front();
    frontier.pop();
    if (ball.nodes[n].depth > radius) continue;  // leaves stay unexpanded
    auto darts = lifted_darts(g, ball.nodes[n].base_vertex);
    for (size_t k = 0; k < darts.size(); ++k) {
      if (ball.nodes[n].slots[k] != -1) continue;  // parent lozenge
      int d = darts[k];
      int back = g.partner(d);
      int child_vertex = g.vertex_of(back);
      int child = add_node(child_vertex, ball.nodes[n].depth + 1);
      auto child_darts = lifted_darts(g, child_vertex);
      int entry = -1;
      for (size_t s = 0; s < child_darts.size(); ++s)
        if (child_darts[s] == back) {
          entry = static_cast<int>(s);
          break;
        }
      FatTreeBall::Lozenge loz;
      loz.a = n;
      loz.slot_a = static_cast<int>(k);
      loz.b = child;
      loz.slot_b = entry;
      loz.base_edge = g.edge_of(d);
      int id = static_cast<int>(ball.lozenges.size());
      ball.lozenges.push_back(loz);
      ball.nodes[n].slots[k] = id;
      ball.nodes[child].slots[entry] = id;
      frontier.push(child);
    }
  }
  return ball;
}

bool is_tree_of_scalloped(const FatTreeBall& ball) {
  for (int l = 0; l < static_cast<int>(ball.lozenges.size()); ++l) {
    if (!ball.lozenge_interior(l)) continue;
    const auto& loz = ball.lozenges[l];
    for (auto [node, slot] : {std::pair{loz.a, loz.slot_a}, std::pair{loz.b, loz.slot_b}}) {
      const auto& slots = ball.nodes[node].slots;
      int m = static_cast<int>(slots.size());
      if (slots[(slot + 1) % m] == -1) return false;
      if (slots[(slot + m - 1) % m] == -1) return false;
    }
  }
  return true;
}

namespace {

// Step across the corner of the given role at one endpoint of a lozenge.
// Returns the neighboring lozenge id (or -1) and, via out-params, the far
// endpoint data for continuing the chain.
int step_across(const FatTreeBall& ball, int lozenge, int node, int slot, FaceRole role) {
  const auto& n = ball.nodes[node];
  int m = static_cast<int>(n.slots.size());
  int corner_next = slot;                 // corner between slot and slot+1
  int corner_prev = (slot + m - 1) % m;   // corner between slot-1 and slot
  int neighbor_slot;
  if (n.corner_roles[corner_next] == role)
    neighbor_slot = (slot + 1) % m;
  else if (n.corner_roles[corner_prev] == role)
    neighbor_slot = (slot + m - 1) % m;
  else
    return -1;
  (void)lozenge;
  return n.slots[neighbor_slot];
}

std::vector<int> chain_through(const FatTreeBall& ball, int lozenge, FaceRole role) {
  // Walk from each endpoint in turn, always crossing the side of the given
  // role at the far end of the current lozenge.
  auto walk = [&](int start_node, int start_slot) {
    std::vector<int> out;
    int cur = lozenge, node = start_node, slot = start_slot;
    while (true) {
      int next = step_across(ball, cur, node, slot, role);
      if (next == -1) break;
      out.push_back(next);
      const auto& loz = ball.lozenges[next];
      if (loz.a == node) {
        node = loz.b;
        slot = loz.slot_b;
      } else {
        node = loz.a;
        slot = loz.slot_a;
      }
      cur = next;
    }
    return out;
  };
  const auto& loz = ball.lozenges[lozenge];
  auto left = walk(loz.a, loz.slot_a);
  auto right = walk(loz.b, loz.slot_b);
  std::vector<int> line(left.rbegin(), left.rend());
  line.push_back(lozenge);
  line.insert(line.end(), right.begin(), right.end());
  return line;
}

}  // namespace

ScallopedLines scalloped_lines_through(int lozenge, const FatTreeBall& ball) {
  if (lozenge < 0 || lozenge >= static_cast<int>(ball.lozenges.size()))
    throw Error("lozenge id out of range");
  if (!ball.lozenge_interior(lozenge))
    throw NotInterior("lozenge is not interior to the ball");
  ScallopedLines lines;
  lines.stable_line = chain_through(ball, lozenge, FaceRole::In);
  lines.unstable_line = chain_through(ball, lozenge, FaceRole::Out);
  return lines;
}

}  // namespace anoflip
