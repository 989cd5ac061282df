#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anoflip/json_io.hpp"
#include "anoflip/manifold_assembly.hpp"
#include "oracles.hpp"

using namespace anoflip;

namespace {

const GluingMatrix kSwap{{{0, 1}, {1, 0}}};

// Two copies of the two-holed-torus piece glued pairwise Out -> In.
GluedFlow make_two_piece_flow() {
  std::vector<SeifertPiece> pieces{build_piece(two_holed_torus_example(), +1, 10.0),
                                   build_piece(two_holed_torus_example(), +1, 10.0)};
  int out0 = pieces[0].tori[0].role == FaceRole::Out ? 0 : 1;
  int in0 = 1 - out0;
  GluingSpec spec;
  spec.pairs.push_back({0, out0, 1, in0, kSwap});
  spec.pairs.push_back({1, out0, 0, in0, kSwap});
  return build_flow(std::move(pieces), std::move(spec));
}

GluedFlow make_single_piece_flow() {
  SeifertPiece p = build_piece(two_holed_torus_example(), +1, 10.0);
  int out0 = p.tori[0].role == FaceRole::Out ? 0 : 1;
  GluingSpec spec;
  spec.pairs.push_back({0, out0, 0, 1 - out0, kSwap});
  return build_flow({p}, spec);
}

std::set<std::vector<int>> itineraries_as_node_cycles(const GluedFlow& f, int max_len) {
  auto tg = transit_graph(f);
  std::set<std::vector<int>> out;
  for (const auto& it : periodic_itineraries(f, max_len)) {
    std::vector<int> nodes;
    for (const auto& s : it) nodes.push_back(tg.index(s.piece, s.edge));
    out.insert(oracle::least_rotation(nodes));
  }
  return out;
}

}  // namespace

TEST_CASE("matrix helpers") {
  GluingMatrix a{{{1, 1}, {1, 0}}};
  CHECK(det(a) == -1);
  CHECK(det(kSwap) == -1);
  CHECK(multiply(a, inverse(a)) == GluingMatrix{{{1, 0}, {0, 1}}});
  CHECK(multiply(inverse(a), a) == GluingMatrix{{{1, 0}, {0, 1}}});
}

TEST_CASE("single-piece self-gluing is a valid flow") {
  GluedFlow f = make_single_piece_flow();
  CHECK(f.pieces.size() == 1);
  CHECK(validate_gluing(f.pieces, f.gluing).empty());
  CHECK(check_transitive(f));
}

TEST_CASE("two pieces glued pairwise are a valid flow") {
  GluedFlow f = make_two_piece_flow();
  CHECK(validate_gluing(f.pieces, f.gluing).empty());
  CHECK(check_transitive(f));
}

TEST_CASE("gluing validation rejects bad data") {
  SeifertPiece p = build_piece(two_holed_torus_example(), +1, 10.0);
  int out0 = p.tori[0].role == FaceRole::Out ? 0 : 1;

  GluingSpec bad_det;
  bad_det.pairs.push_back({0, out0, 0, 1 - out0, GluingMatrix{{{2, 0}, {0, 1}}}});
  CHECK_FALSE(validate_gluing({p}, bad_det).empty());

  GluingSpec fiber_fixed;  // identity keeps the fiber class: disallowed
  fiber_fixed.pairs.push_back({0, out0, 0, 1 - out0, GluingMatrix{{{1, 0}, {0, 1}}}});
  CHECK_FALSE(validate_gluing({p}, fiber_fixed).empty());

  GluingSpec wrong_roles;  // In glued to Out side instead of Out to In
  wrong_roles.pairs.push_back({0, 1 - out0, 0, out0, kSwap});
  CHECK_FALSE(validate_gluing({p}, wrong_roles).empty());

  GluingSpec empty;  // no perfect matching of the boundary tori
  CHECK_FALSE(validate_gluing({p}, empty).empty());

  CHECK_THROWS_AS(build_flow({p}, empty), Error);
}

TEST_CASE("construction over X1 validates and is deterministic") {
  std::vector<FatGraph> graphs{family_Xn(1)};
  GluedFlow a = construction_7_3(graphs, 5);
  CHECK(validate_gluing(a.pieces, a.gluing).empty());
  GluedFlow b = construction_7_3(graphs, 5);
  CHECK(flow_to_json(a).dump() == flow_to_json(b).dump());  // same seed, same bytes
  CHECK(a == b);
  CHECK(check_transitive(a));
}

TEST_CASE("construction needs the distinguished vertex") {
  CHECK_THROWS_AS(construction_7_3({two_holed_torus_example()}, 0), NoValidPairing);
}

TEST_CASE("construction over two graphs") {
  GluedFlow f = construction_7_3({family_Xn(1), family_Xn(2)}, 3);
  CHECK(f.pieces.size() == 2);
  CHECK(validate_gluing(f.pieces, f.gluing).empty());
  // the distinguished octagonal tori are never glued to each other twice over:
  // every gluing matrix is the fixed hyperbolic one
  for (const auto& gp : f.gluing.pairs)
    CHECK(gp.matrix == GluingMatrix{{{1, 1}, {1, 0}}});
}

TEST_CASE("transit graph is flip invariant") {
  GluedFlow f = construction_7_3({family_Xn(1)}, 1);
  auto t1 = transit_graph(f);
  auto t2 = transit_graph(apply_flip(f, 0));
  REQUIRE(t1.nodes.size() == t2.nodes.size());
  for (size_t i = 0; i < t1.nodes.size(); ++i) {
    CHECK(t1.nodes[i].piece == t2.nodes[i].piece);
    CHECK(t1.nodes[i].edge == t2.nodes[i].edge);
  }
  CHECK(t1.arcs == t2.arcs);
  CHECK(t1.out_gluing == t2.out_gluing);
}

TEST_CASE("periodic itineraries match the independent cycle enumerator") {
  for (const GluedFlow& f : {make_single_piece_flow(), make_two_piece_flow()}) {
    auto tg = transit_graph(f);
    for (int len : {1, 3, 5})
      CHECK(itineraries_as_node_cycles(f, len) == oracle::naive_cycles(tg.arcs, len));
  }
  // canonical order and deduplication
  GluedFlow f = make_two_piece_flow();
  auto its = periodic_itineraries(f, 4);
  for (size_t i = 1; i < its.size(); ++i) CHECK(its[i - 1] < its[i]);
}

TEST_CASE("free homotopy comparison") {
  GluedFlow f = make_two_piece_flow();
  CHECK(free_homotopy_compare(f, f, 5).equal);
  GluedFlow g = apply_flip(f, 0);
  auto r = free_homotopy_compare(f, g, 6);
  CHECK(r.equal);  // flips preserve the periodic orbit data
  CHECK_THROWS_AS(free_homotopy_compare(f, make_single_piece_flow(), 4),
                  IncomparableManifolds);
}

TEST_CASE("flips: involution, sign law, errors") {
  GluedFlow f = make_two_piece_flow();
  GluedFlow g = apply_flip(f, 1);
  CHECK(apply_flip(g, 1) == f);
  CHECK(sign_of(f, 1) == +1);
  CHECK(sign_of(g, 1) == -1);
  CHECK(sign_vector(g) == std::vector<int>{+1, -1});
  auto agree = compare_signs(f, g);
  CHECK(agree == std::vector<bool>{true, false});
  CHECK_THROWS_AS(apply_flip(f, 5), Error);

  GluedFlow other = construction_7_3({family_Xn(1)}, 0);
  CHECK_THROWS_AS(compare_signs(f, other), IncomparableFlows);
}

TEST_CASE("classification groups by sign vector") {
  GluedFlow f = make_two_piece_flow();
  std::vector<GluedFlow> flows{f, apply_flip(f, 0), apply_flip(apply_flip(f, 0), 1), f};
  auto classes = classify(flows, 4);
  REQUIRE(classes.size() == 3);
  // duplicates collapse into one class
  bool joined = false;
  for (const auto& c : classes)
    if (c == std::vector<int>{0, 3}) joined = true;
  CHECK(joined);
}

TEST_CASE("equivalence search: identity certificate on f vs f") {
  GluedFlow f = make_two_piece_flow();
  auto r = orbit_equivalence_search(f, f);
  REQUIRE(r.certificate.has_value());
  const auto& c = *r.certificate;
  CHECK_FALSE(c.reverses_flow_direction);
  CHECK(c.piece_matching == std::vector<int>{0, 1});
  for (const auto& m : c.piece_maps) {
    CHECK_FALSE(m.reverses_orientation);
    for (size_t d = 0; d < m.dart_map.size(); ++d)
      CHECK(m.dart_map[d] == static_cast<int>(d));
  }
  CHECK(c.fiber_flags == std::vector<int>{+1, +1});
  CHECK(replay_certificate(c, f, f));
}

TEST_CASE("equivalence search agrees with brute force on small flows") {
  GluedFlow f1 = make_single_piece_flow();
  GluedFlow f2 = make_two_piece_flow();
  for (const GluedFlow& base : {f1, f2}) {
    for (int i = 0; i < static_cast<int>(base.pieces.size()); ++i) {
      GluedFlow flipped = apply_flip(base, i);
      auto fast = orbit_equivalence_search(base, flipped);
      auto slow = oracle::brute_force_equiv(base, flipped);
      CHECK(fast.certificate.has_value() == slow.has_value());
      if (fast.certificate) CHECK(replay_certificate(*fast.certificate, base, flipped));
    }
  }
}

TEST_CASE("replay rejects a doctored certificate") {
  GluedFlow f = make_two_piece_flow();
  auto r = orbit_equivalence_search(f, f);
  REQUIRE(r.certificate.has_value());
  auto bad = *r.certificate;
  bad.fiber_flags[0] = -bad.fiber_flags[0];
  CHECK_FALSE(replay_certificate(bad, f, f));
}
