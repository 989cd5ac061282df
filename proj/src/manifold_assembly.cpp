#include "anoflip/manifold_assembly.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace anoflip {

long det(const GluingMatrix& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

GluingMatrix inverse(const GluingMatrix& m) {
  long d = det(m);
  if (d != 1 && d != -1) throw Error("gluing matrix is not unimodular");
  return GluingMatrix{{{d * m[1][1], -d * m[0][1]}, {-d * m[1][0], d * m[0][0]}}};
}

GluingMatrix multiply(const GluingMatrix& a, const GluingMatrix& b) {
  GluingMatrix r{{{0, 0}, {0, 0}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

bool operator==(const GluingPair& a, const GluingPair& b) {
  return a.from_piece == b.from_piece && a.from_torus == b.from_torus &&
         a.to_piece == b.to_piece && a.to_torus == b.to_torus && a.matrix == b.matrix;
}

bool operator==(const GluedFlow& a, const GluedFlow& b) {
  return a.pieces == b.pieces && a.gluing.pairs == b.gluing.pairs && a.seed == b.seed;
}

namespace {

bool fiber_condition_ok(const GluingMatrix& m) {
  // Image of the fiber class (0,1) is the second column.
  return !(m[0][1] == 0 && (m[1][1] == 1 || m[1][1] == -1));
}

std::string key(int piece, int torus) {
  return std::to_string(piece) + ":" + std::to_string(torus);
}

}  // namespace

std::vector<Violation> validate_gluing(const std::vector<SeifertPiece>& pieces,
                                       const GluingSpec& spec) {
  std::vector<Violation> out;
  for (size_t p = 0; p < pieces.size(); ++p)
    for (auto m : pieces[p].graph.markings)
      if (m != VertexMarking::Regular) {
        out.push_back({"piece " + std::to_string(p) +
                       " has marked vertices; only regular pieces can be glued"});
        break;
      }

  std::map<std::string, int> from_used, to_used;
  for (size_t i = 0; i < spec.pairs.size(); ++i) {
    const auto& gp = spec.pairs[i];
    auto bad = [&](const std::string& why) {
      out.push_back({"gluing " + std::to_string(i) + ": " + why});
    };
    if (gp.from_piece < 0 || gp.from_piece >= static_cast<int>(pieces.size()) ||
        gp.to_piece < 0 || gp.to_piece >= static_cast<int>(pieces.size())) {
      bad("piece index out of range");
      continue;
    }
    const auto& pf = pieces[gp.from_piece];
    const auto& pt = pieces[gp.to_piece];
    if (gp.from_torus < 0 || gp.from_torus >= static_cast<int>(pf.tori.size()) ||
        gp.to_torus < 0 || gp.to_torus >= static_cast<int>(pt.tori.size())) {
      bad("torus index out of range");
      continue;
    }
    if (pf.tori[gp.from_torus].role != FaceRole::Out) bad("source torus is not Out");
    if (pt.tori[gp.to_torus].role != FaceRole::In) bad("target torus is not In");
    long d = det(gp.matrix);
    if (d != 1 && d != -1) bad("matrix determinant is not +-1");
    if (!fiber_condition_ok(gp.matrix))
      bad("matrix glues the fiber class to the fiber class");
    ++from_used[key(gp.from_piece, gp.from_torus)];
    ++to_used[key(gp.to_piece, gp.to_torus)];
  }
  for (const auto& [k, n] : from_used)
    if (n > 1) out.push_back({"Out torus " + k + " glued more than once"});
  for (const auto& [k, n] : to_used)
    if (n > 1) out.push_back({"In torus " + k + " glued more than once"});
  for (size_t p = 0; p < pieces.size(); ++p)
    for (size_t t = 0; t < pieces[p].tori.size(); ++t) {
      bool is_out = pieces[p].tori[t].role == FaceRole::Out;
      auto& used = is_out ? from_used : to_used;
      if (!used.count(key(static_cast<int>(p), static_cast<int>(t))))
        out.push_back({"torus " + key(static_cast<int>(p), static_cast<int>(t)) +
                       " is not glued"});
    }

  // Orientability: piece orientations with eps_to = -det(A) * eps_from.
  std::vector<int> eps(pieces.size(), 0);
  bool orientable = true;
  for (size_t p = 0; p < pieces.size() && orientable; ++p) {
    if (eps[p] != 0) continue;
    eps[p] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(p));
    while (!q.empty() && orientable) {
      int cur = q.front();
      q.pop();
      for (const auto& gp : spec.pairs) {
        long d = det(gp.matrix);
        if (d != 1 && d != -1) continue;
        int a = gp.from_piece, b = gp.to_piece;
        int rel = static_cast<int>(-d);
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
          if (x != cur) continue;
          if (eps[y] == 0) {
            eps[y] = rel * eps[x];
            q.push(y);
          } else if (eps[y] != rel * eps[x]) {
            orientable = false;
          }
        }
      }
    }
  }
  if (!orientable) out.push_back({"gluing does not admit consistent piece orientations"});
  return out;
}

GluedFlow build_flow(std::vector<SeifertPiece> pieces, GluingSpec spec,
                     std::optional<unsigned> seed) {
  auto violations = validate_gluing(pieces, spec);
  if (!violations.empty()) {
    std::string msg = "invalid gluing:";
    for (const auto& v : violations) msg += " " + v.what + ";";
    throw Error(msg);
  }
  GluedFlow f;
  f.pieces = std::move(pieces);
  f.gluing = std::move(spec);
  f.seed = seed;
  return f;
}

namespace {

// Fisher-Yates with explicit draws, so results do not depend on the standard
// library's std::shuffle details.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937& rng) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

int invariant_vertex(const SeifertPiece& p) {
  std::vector<int> face_len(p.graph.dart_count());
  for (const auto& t : p.tori)
    for (int d : t.cells) face_len[d] = static_cast<int>(t.cells.size());
  int found = -1;
  for (int v = 0; v < p.graph.vertex_count(); ++v) {
    // Every boundary face passing v exits it through one of v's own darts,
    // so the faces at v are exactly the faces of those darts.
    bool quad = false;
    for (int d : p.graph.vertex_darts[v])
      if (face_len[d] == 4) quad = true;
    if (!quad) {
      if (found != -1) throw NoValidPairing("graph has several candidate base vertices");
      found = v;
    }
  }
  if (found == -1)
    throw NoValidPairing("graph has no vertex away from all quadrilateral faces");
  return found;
}

}  // namespace

GluedFlow construction_7_3(const std::vector<FatGraph>& graphs, unsigned seed,
                           double lambda) {
  if (graphs.empty()) throw NoValidPairing("no graphs supplied");
  const GluingMatrix mat{{{1, 1}, {1, 0}}};
  std::vector<SeifertPiece> pieces;
  pieces.reserve(graphs.size());
  for (const auto& g : graphs) pieces.push_back(build_piece(g, +1, lambda));

  const int k = static_cast<int>(pieces.size());
  std::vector<int> base(k), torus_in(k, -1), torus_out(k, -1);
  std::vector<std::vector<char>> special(k);
  for (int i = 0; i < k; ++i) {
    base[i] = invariant_vertex(pieces[i]);
    special[i].assign(pieces[i].tori.size(), 0);
    // Tori meeting the invariant vertex's stable / unstable annuli: the
    // faces incident to it.
    std::vector<int> torus_of(pieces[i].graph.dart_count());
    for (size_t t = 0; t < pieces[i].tori.size(); ++t)
      for (int d : pieces[i].tori[t].cells) torus_of[d] = static_cast<int>(t);
    for (int d : pieces[i].graph.vertex_darts[base[i]]) {
      for (int cell : {d, pieces[i].graph.next_at_vertex(d)}) {
        int t = torus_of[cell];
        special[i][t] = 1;
        if (pieces[i].tori[t].role == FaceRole::In && torus_in[i] == -1) torus_in[i] = t;
        if (pieces[i].tori[t].role == FaceRole::Out && torus_out[i] == -1)
          torus_out[i] = t;
      }
    }
    if (torus_in[i] == -1 || torus_out[i] == -1)
      throw NoValidPairing("invariant vertex does not meet both an In and an Out torus");
  }

  GluingSpec spec;
  std::vector<std::vector<char>> used(k);
  for (int i = 0; i < k; ++i) used[i].assign(pieces[i].tori.size(), 0);
  for (int i = 0; i < k; ++i) {
    int j = (i + 1) % k;  // glue T_i (In of piece i) to T'_j (Out of piece j)
    spec.pairs.push_back(GluingPair{j, torus_out[j], i, torus_in[i], mat});
    used[i][torus_in[i]] = 1;
    used[j][torus_out[j]] = 1;
  }

  std::vector<std::pair<int, int>> outs, ins;
  for (int i = 0; i < k; ++i)
    for (size_t t = 0; t < pieces[i].tori.size(); ++t) {
      if (used[i][t]) continue;
      (pieces[i].tori[t].role == FaceRole::Out ? outs : ins)
          .emplace_back(i, static_cast<int>(t));
    }
  if (outs.size() != ins.size())
    throw NoValidPairing("leftover In and Out torus counts differ");

  std::mt19937 rng(seed);
  const int attempts = 1000;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto shuffled = ins;
    deterministic_shuffle(shuffled, rng);
    bool ok = true;
    for (size_t idx = 0; idx < outs.size(); ++idx) {
      auto [op, ot] = outs[idx];
      auto [ip, it] = shuffled[idx];
      if (special[op][ot] && special[ip][it]) {
        ok = false;  // no two tori meeting invariant-orbit annuli glued together
        break;
      }
    }
    if (!ok) continue;
    auto trial = spec;
    for (size_t idx = 0; idx < outs.size(); ++idx)
      trial.pairs.push_back(GluingPair{outs[idx].first, outs[idx].second,
                                       shuffled[idx].first, shuffled[idx].second, mat});
    if (!validate_gluing(pieces, trial).empty()) continue;
    return build_flow(std::move(pieces), std::move(trial), seed);
  }
  throw NoValidPairing("no admissible pairing of the remaining tori found");
}

int TransitGraph::index(int piece, int edge) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), std::pair{piece, edge},
                             [](const Node& n, const std::pair<int, int>& q) {
                               return std::pair{n.piece, n.edge} < q;
                             });
  return static_cast<int>(it - nodes.begin());
}

TransitGraph transit_graph(const GluedFlow& f) {
  TransitGraph tg;
  std::vector<int> offset(f.pieces.size() + 1, 0);
  for (size_t p = 0; p < f.pieces.size(); ++p) {
    offset[p + 1] = offset[p] + f.pieces[p].graph.edge_count();
    for (int e = 0; e < f.pieces[p].graph.edge_count(); ++e)
      tg.nodes.push_back({static_cast<int>(p), e});
  }

  std::map<std::string, int> gluing_from;
  for (size_t i = 0; i < f.gluing.pairs.size(); ++i)
    gluing_from[key(f.gluing.pairs[i].from_piece, f.gluing.pairs[i].from_torus)] =
        static_cast<int>(i);

  tg.out_gluing.resize(tg.nodes.size());
  tg.arcs.resize(tg.nodes.size());
  for (size_t p = 0; p < f.pieces.size(); ++p) {
    const auto& piece = f.pieces[p];
    std::vector<int> torus_of(piece.graph.dart_count());
    for (size_t t = 0; t < piece.tori.size(); ++t)
      for (int d : piece.tori[t].cells) torus_of[d] = static_cast<int>(t);
    auto transit = piece_transit(piece);
    for (int e = 0; e < piece.graph.edge_count(); ++e) {
      int node = offset[p] + e;
      int out_cell = transit[e].second;
      auto it = gluing_from.find(key(static_cast<int>(p), torus_of[out_cell]));
      if (it == gluing_from.end())
        throw Error("flow has an unglued Out torus");
      tg.out_gluing[node] = it->second;
      const auto& gp = f.gluing.pairs[it->second];
      const auto& target = f.pieces[gp.to_piece].tori[gp.to_torus];
      for (int cell : target.cells)
        tg.arcs[node].push_back(offset[gp.to_piece] +
                                f.pieces[gp.to_piece].graph.edge_of(cell));
    }
  }
  for (auto& a : tg.arcs) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return tg;
}

bool check_transitive(const GluedFlow& f) {
  auto tg = transit_graph(f);
  const int n = static_cast<int>(tg.nodes.size());
  if (n == 0) return false;
  auto reach_all = [&](const std::vector<std::vector<int>>& arcs) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : arcs[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++cnt;
          q.push(w);
        }
    }
    return cnt == n;
  };
  std::vector<std::vector<int>> rev(n);
  for (int v = 0; v < n; ++v)
    for (int w : tg.arcs[v]) rev[w].push_back(v);
  return reach_all(tg.arcs) && reach_all(rev);
}

namespace {

void cycle_dfs(const TransitGraph& tg, int start, int node, int max_len,
               std::vector<char>& on_path, std::vector<int>& path,
               std::vector<Itinerary>& out) {
  for (int next : tg.arcs[node]) {
    if (next == start) {
      Itinerary it;
      it.reserve(path.size());
      for (int n : path)
        it.push_back({tg.nodes[n].piece, tg.nodes[n].edge, tg.out_gluing[n]});
      out.push_back(std::move(it));
    } else if (next > start && !on_path[next] &&
               static_cast<int>(path.size()) < max_len) {
      on_path[next] = 1;
      path.push_back(next);
      cycle_dfs(tg, start, next, max_len, on_path, path, out);
      path.pop_back();
      on_path[next] = 0;
    }
  }
}

}  // namespace

std::vector<Itinerary> periodic_itineraries(const GluedFlow& f, int max_len) {
  if (max_len < 1) return {};
  auto tg = transit_graph(f);
  const int n = static_cast<int>(tg.nodes.size());
  std::vector<Itinerary> out;
  std::vector<char> on_path(n, 0);
  for (int start = 0; start < n; ++start) {
    std::vector<int> path{start};
    on_path[start] = 1;
    cycle_dfs(tg, start, start, max_len, on_path, path, out);
    on_path[start] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string itinerary_string(const Itinerary& it) {
  std::ostringstream os;
  for (const auto& s : it) os << "(" << s.piece << "," << s.edge << "," << s.gluing << ")";
  return os.str();
}

void require_comparable(const GluedFlow& a, const GluedFlow& b) {
  if (a.pieces.size() != b.pieces.size())
    throw IncomparableManifolds("flows have different piece counts");
  for (size_t i = 0; i < a.pieces.size(); ++i) {
    if (!(a.pieces[i].graph == b.pieces[i].graph))
      throw IncomparableManifolds("piece " + std::to_string(i) + " graphs differ");
    if (a.pieces[i].lambda != b.pieces[i].lambda)
      throw IncomparableManifolds("piece " + std::to_string(i) + " lambdas differ");
  }
}

}  // namespace

CompareResult free_homotopy_compare(const GluedFlow& a, const GluedFlow& b,
                                    int max_len) {
  require_comparable(a, b);
  // Vertical orbit classes: one per spine vertex, with markings. Pieces are
  // identical by the comparability check, but verify explicitly.
  for (size_t i = 0; i < a.pieces.size(); ++i)
    if (a.pieces[i].graph.markings != b.pieces[i].graph.markings)
      return {false, "vertical orbit classes differ at piece " + std::to_string(i)};

  auto ia = periodic_itineraries(a, max_len);
  auto ib = periodic_itineraries(b, max_len);
  if (ia == ib) return {true, ""};
  std::vector<Itinerary> diff;
  std::set_symmetric_difference(ia.begin(), ia.end(), ib.begin(), ib.end(),
                                std::back_inserter(diff));
  return {false, itinerary_string(diff.front())};
}

GluedFlow apply_flip(const GluedFlow& f, int piece) {
  if (piece < 0 || piece >= static_cast<int>(f.pieces.size()))
    throw Error("piece index out of range");
  for (auto m : f.pieces[piece].graph.markings)
    if (m != VertexMarking::Regular)
      throw UnsupportedPiece("flips are only defined for regular pieces");
  GluedFlow g = f;
  g.pieces[piece] = flip_piece(g.pieces[piece]);
  return g;
}

std::vector<int> sign_vector(const GluedFlow& f) {
  std::vector<int> s;
  s.reserve(f.pieces.size());
  for (const auto& p : f.pieces) s.push_back(p.block_sign);
  return s;
}

int sign_of(const GluedFlow& f, int piece) {
  if (piece < 0 || piece >= static_cast<int>(f.pieces.size()))
    throw Error("piece index out of range");
  return f.pieces[piece].block_sign;
}

std::vector<bool> compare_signs(const GluedFlow& a, const GluedFlow& b) {
  if (a.pieces.size() != b.pieces.size())
    throw IncomparableFlows("flows have different piece counts");
  for (size_t i = 0; i < a.pieces.size(); ++i)
    if (!(a.pieces[i].graph == b.pieces[i].graph) ||
        a.pieces[i].lambda != b.pieces[i].lambda)
      throw IncomparableFlows("underlying pieces differ at index " + std::to_string(i));
  if (!(a.gluing.pairs == b.gluing.pairs))
    throw IncomparableFlows("gluing specifications differ");
  std::vector<bool> out(a.pieces.size());
  for (size_t i = 0; i < a.pieces.size(); ++i)
    out[i] = a.pieces[i].block_sign == b.pieces[i].block_sign;
  return out;
}

std::vector<std::vector<int>> classify(const std::vector<GluedFlow>& flows,
                                       int max_len) {
  for (size_t i = 0; i < flows.size(); ++i)
    for (size_t j = i + 1; j < flows.size(); ++j) {
      CompareResult r;
      try {
        r = free_homotopy_compare(flows[i], flows[j], max_len);
      } catch (const IncomparableManifolds& e) {
        throw IncomparableFlows(e.what());
      }
      if (!r.equal)
        throw IncomparableFlows("flows " + std::to_string(i) + " and " +
                                std::to_string(j) + " have different orbit data");
    }
  std::map<std::vector<int>, int> class_of;
  std::vector<std::vector<int>> classes;
  for (size_t i = 0; i < flows.size(); ++i) {
    auto sv = sign_vector(flows[i]);
    auto it = class_of.find(sv);
    if (it == class_of.end()) {
      class_of[sv] = static_cast<int>(classes.size());
      classes.push_back({static_cast<int>(i)});
    } else {
      classes[it->second].push_back(static_cast<int>(i));
    }
  }
  return classes;
}

namespace {

struct PieceMaps {
  std::vector<int> torus_of;  // per dart
};

PieceMaps piece_maps(const SeifertPiece& p) {
  PieceMaps m;
  m.torus_of.assign(p.graph.dart_count(), -1);
  for (size_t t = 0; t < p.tori.size(); ++t)
    for (int d : p.tori[t].cells) m.torus_of[d] = static_cast<int>(t);
  return m;
}

struct Candidate {
  FatGraphIso iso;
  int eta = 1;   // fiber flag
  int xi = 1;    // vertex bipartition correspondence sign
  int eps = 1;   // loop class action: -1 when orientation-reversing
};

GluingMatrix flag_matrix(int eps, int eta) {
  return GluingMatrix{{{eps, 0}, {0, eta}}};
}

// Image of torus t under the candidate map (torus index in the target piece).
int image_torus(const Candidate& c, const SeifertPiece& src, const PieceMaps& dst_maps,
                int t) {
  return dst_maps.torus_of[c.iso.dart_map[src.tori[t].cells[0]]];
}

bool gluings_compatible(const GluedFlow& f1, const GluedFlow& f2,
                        const std::vector<int>& matching,
                        const std::vector<Candidate>& cand,
                        const std::vector<PieceMaps>& maps2, bool reverse) {
  std::map<std::string, const GluingPair*> f2_from;
  for (const auto& gp : f2.gluing.pairs) f2_from[key(gp.from_piece, gp.from_torus)] = &gp;

  for (const auto& gp : f1.gluing.pairs) {
    int i = gp.from_piece, j = gp.to_piece;
    const auto& ci = cand[i];
    const auto& cj = cand[j];
    int ti = image_torus(ci, f1.pieces[i], maps2[matching[i]], gp.from_torus);
    int tj = image_torus(cj, f1.pieces[j], maps2[matching[j]], gp.to_torus);
    GluingMatrix mi = flag_matrix(ci.eps, ci.eta), mj = flag_matrix(cj.eps, cj.eta);
    const GluingPair* img = nullptr;
    GluingMatrix want{};
    int want_to_piece, want_to_torus;
    if (!reverse) {
      auto it = f2_from.find(key(matching[i], ti));
      if (it == f2_from.end()) return false;
      img = it->second;
      want = multiply(mj, multiply(gp.matrix, mi));  // mi^-1 = mi for +-1 diagonals
      want_to_piece = matching[j];
      want_to_torus = tj;
    } else {
      // Flow reversal turns the gluing around and inverts the matrix.
      auto it = f2_from.find(key(matching[j], tj));
      if (it == f2_from.end()) return false;
      img = it->second;
      want = multiply(mi, multiply(inverse(gp.matrix), mj));
      want_to_piece = matching[i];
      want_to_torus = ti;
    }
    if (img->to_piece != want_to_piece || img->to_torus != want_to_torus) return false;
    if (!(img->matrix == want)) return false;
  }
  return true;
}

}  // namespace

SearchResult orbit_equivalence_search(const GluedFlow& f1, const GluedFlow& f2) {
  const int k = static_cast<int>(f1.pieces.size());
  if (k != static_cast<int>(f2.pieces.size())) return {};
  if (f1.gluing.pairs.size() != f2.gluing.pairs.size()) return {};

  std::vector<PieceMaps> maps2;
  maps2.reserve(k);
  for (const auto& p : f2.pieces) maps2.push_back(piece_maps(p));

  for (bool reverse : {false, true}) {
    std::vector<int> matching(k);
    std::iota(matching.begin(), matching.end(), 0);
    do {
      bool lambda_ok = true;
      for (int i = 0; i < k && lambda_ok; ++i)
        if (f1.pieces[i].lambda != f2.pieces[matching[i]].lambda) lambda_ok = false;
      if (!lambda_ok) continue;

      // Candidate maps per piece, in canonical order.
      std::vector<std::vector<Candidate>> cands(k);
      bool feasible = true;
      for (int i = 0; i < k && feasible; ++i) {
        const auto& src = f1.pieces[i];
        const auto& dst = f2.pieces[matching[i]];
        auto isos = isomorphisms(src.graph, dst.graph, true, true);
        for (const auto& iso : isos) {
          if (iso.swaps_roles != reverse) continue;
          for (int eta : {1, -1}) {
            Candidate c;
            c.iso = iso;
            c.eta = eta;
            c.eps = iso.reverses_orientation ? -1 : 1;
            c.xi = dst.vertex_color[iso.vertex_map[0]] * src.vertex_color[0];
            int transported =
                src.block_sign * c.eta * c.xi * (reverse ? -1 : 1);
            if (transported != dst.block_sign) continue;
            cands[i].push_back(std::move(c));
          }
        }
        std::sort(cands[i].begin(), cands[i].end(),
                  [](const Candidate& a, const Candidate& b) {
                    return std::tuple(a.iso.reverses_orientation, a.eta < 0,
                                      a.iso.dart_map) <
                           std::tuple(b.iso.reverses_orientation, b.eta < 0,
                                      b.iso.dart_map);
                  });
        if (cands[i].empty()) feasible = false;
      }
      if (!feasible) continue;

      // Odometer over the per-piece candidate lists, piece 0 most significant.
      std::vector<size_t> pick(k, 0);
      while (true) {
        std::vector<Candidate> chosen;
        chosen.reserve(k);
        for (int i = 0; i < k; ++i) chosen.push_back(cands[i][pick[i]]);

        // Orientation parity: orientation-reversal on a piece must coincide
        // with fiber reversal there, uniformly across pieces.
        int parity = (chosen[0].eps < 0) ^ (chosen[0].eta < 0);
        bool uniform = true;
        for (int i = 1; i < k; ++i)
          if (((chosen[i].eps < 0) ^ (chosen[i].eta < 0)) != parity) uniform = false;

        if (uniform &&
            gluings_compatible(f1, f2, matching, chosen, maps2, reverse)) {
          EquivalenceCertificate cert;
          cert.reverses_flow_direction = reverse;
          cert.piece_matching = matching;
          for (const auto& c : chosen) {
            cert.piece_maps.push_back(c.iso);
            cert.fiber_flags.push_back(c.eta);
          }
          return {cert};
        }
        int pos = k - 1;
        while (pos >= 0 && pick[pos] + 1 == cands[pos].size()) {
          pick[pos] = 0;
          --pos;
        }
        if (pos < 0) break;
        ++pick[pos];
      }
    } while (std::next_permutation(matching.begin(), matching.end()));
  }
  return {};
}

bool replay_certificate(const EquivalenceCertificate& cert, const GluedFlow& f1,
                        const GluedFlow& f2) {
  const int k = static_cast<int>(f1.pieces.size());
  if (static_cast<int>(cert.piece_matching.size()) != k ||
      static_cast<int>(cert.piece_maps.size()) != k ||
      static_cast<int>(cert.fiber_flags.size()) != k ||
      k != static_cast<int>(f2.pieces.size()))
    return false;
  const bool rev = cert.reverses_flow_direction;

  std::vector<Candidate> cand(k);
  std::vector<PieceMaps> maps2;
  for (const auto& p : f2.pieces) maps2.push_back(piece_maps(p));

  for (int i = 0; i < k; ++i) {
    int t = cert.piece_matching[i];
    const auto& src = f1.pieces[i];
    const auto& dst = f2.pieces[t];
    const auto& iso = cert.piece_maps[i];
    if (src.lambda != dst.lambda) return false;
    if (static_cast<int>(iso.dart_map.size()) != src.graph.dart_count() ||
        src.graph.dart_count() != dst.graph.dart_count())
      return false;

    // Verify the map is a genuine isomorphism onto the target graph.
    std::vector<char> hit(dst.graph.dart_count(), 0);
    for (int d = 0; d < src.graph.dart_count(); ++d) {
      int im = iso.dart_map[d];
      if (im < 0 || im >= dst.graph.dart_count() || hit[im]) return false;
      hit[im] = 1;
    }
    for (int d = 0; d < src.graph.dart_count(); ++d) {
      if (iso.dart_map[src.graph.partner(d)] != dst.graph.partner(iso.dart_map[d]))
        return false;
      int im = iso.reverses_orientation ? dst.graph.prev_at_vertex(iso.dart_map[d])
                                        : dst.graph.next_at_vertex(iso.dart_map[d]);
      if (iso.dart_map[src.graph.next_at_vertex(d)] != im) return false;
      if (src.graph.markings[src.graph.vertex_of(d)] !=
          dst.graph.markings[dst.graph.vertex_of(iso.dart_map[d])])
        return false;
    }

    // Transported sign must reproduce the target block sign, and the orbit
    // directions must map accordingly.
    Candidate c;
    c.iso = iso;
    c.eta = cert.fiber_flags[i];
    c.eps = iso.reverses_orientation ? -1 : 1;
    c.xi = dst.vertex_color[iso.vertex_map[0]] * src.vertex_color[0];
    int transported = src.block_sign * c.eta * c.xi * (rev ? -1 : 1);
    if (transported != dst.block_sign) return false;
    for (int v = 0; v < src.graph.vertex_count(); ++v) {
      int want = src.orbit_dir[v] * c.eta * (rev ? -1 : 1);
      if (dst.orbit_dir[iso.vertex_map[v]] != want) return false;
    }
    // Roles: In tori must land on In tori exactly when the flow direction is
    // preserved.
    if (iso.swaps_roles != rev) return false;
    cand[i] = std::move(c);
  }

  // Transform the gluing list and compare with f2's as a multiset.
  std::vector<GluingPair> transformed;
  for (const auto& gp : f1.gluing.pairs) {
    int i = gp.from_piece, j = gp.to_piece;
    GluingMatrix mi = flag_matrix(cand[i].eps, cand[i].eta);
    GluingMatrix mj = flag_matrix(cand[j].eps, cand[j].eta);
    int ti = image_torus(cand[i], f1.pieces[i], maps2[cert.piece_matching[i]],
                         gp.from_torus);
    int tj = image_torus(cand[j], f1.pieces[j], maps2[cert.piece_matching[j]],
                         gp.to_torus);
    GluingPair out;
    if (!rev) {
      out = GluingPair{cert.piece_matching[i], ti, cert.piece_matching[j], tj,
                       multiply(mj, multiply(gp.matrix, mi))};
    } else {
      out = GluingPair{cert.piece_matching[j], tj, cert.piece_matching[i], ti,
                       multiply(mi, multiply(inverse(gp.matrix), mj))};
    }
    transformed.push_back(out);
  }
  auto keyfn = [](const GluingPair& g) {
    return std::tuple(g.from_piece, g.from_torus, g.to_piece, g.to_torus, g.matrix);
  };
  auto sorted2 = f2.gluing.pairs;
  std::sort(transformed.begin(), transformed.end(),
            [&](const GluingPair& a, const GluingPair& b) { return keyfn(a) < keyfn(b); });
  std::sort(sorted2.begin(), sorted2.end(),
            [&](const GluingPair& a, const GluingPair& b) { return keyfn(a) < keyfn(b); });
  return transformed == sorted2;
}

}  // namespace anoflip
