#include "anoflip/json_io.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace anoflip {

using nlohmann::json;

namespace {

std::string marking_name(VertexMarking m) {
  switch (m) {
    case VertexMarking::Regular: return "regular";
    case VertexMarking::Cone: return "cone";
    case VertexMarking::ReflectorEnd: return "reflector_end";
  }
  return "regular";
}

VertexMarking marking_value(const std::string& s) {
  if (s == "regular") return VertexMarking::Regular;
  if (s == "cone") return VertexMarking::Cone;
  if (s == "reflector_end") return VertexMarking::ReflectorEnd;
  throw Error("unknown vertex marking: " + s);
}

void check_schema(const json& j) {
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != kSchemaVersion)
    throw Error("unsupported or missing schema_version");
}

json matrix_to_json(const GluingMatrix& m) {
  return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})});
}

GluingMatrix matrix_from_json(const json& j) {
  GluingMatrix m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = j.at(r).at(c).get<long>();
  return m;
}

}  // namespace

json fatgraph_to_json(const FatGraph& g) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["vertices"] = json::array();
  for (int v = 0; v < g.vertex_count(); ++v)
    j["vertices"].push_back({{"id", v}, {"darts", g.vertex_darts[v]}});
  j["edges"] = json::array();
  for (const auto& e : g.edges) j["edges"].push_back(json::array({e[0], e[1]}));
  json markings = json::object();
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.markings[v] != VertexMarking::Regular)
      markings[std::to_string(v)] = marking_name(g.markings[v]);
  j["markings"] = markings;
  if (g.supplied_roles) {
    json roles = json::object();
    for (size_t f = 0; f < g.supplied_roles->size(); ++f)
      roles[std::to_string(f)] = (*g.supplied_roles)[f] == FaceRole::In ? "in" : "out";
    j["roles"] = roles;
  }
  return j;
}

FatGraph fatgraph_from_json(const json& j) {
  check_schema(j);
  FatGraph g;
  std::map<int, std::vector<int>> vertices;
  for (const auto& v : j.at("vertices"))
    vertices[v.at("id").get<int>()] = v.at("darts").get<std::vector<int>>();
  int expected = 0;
  for (const auto& [id, darts] : vertices) {
    if (id != expected++) throw MalformedGraph("vertex ids must be 0..n-1");
    g.vertex_darts.push_back(darts);
  }
  g.markings.assign(g.vertex_darts.size(), VertexMarking::Regular);
  if (j.contains("markings"))
    for (const auto& [k, v] : j.at("markings").items()) {
      int idx = std::stoi(k);
      if (idx < 0 || idx >= static_cast<int>(g.markings.size()))
        throw MalformedGraph("marking vertex id out of range");
      g.markings[idx] = marking_value(v.get<std::string>());
    }
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  g.finalize();
  if (j.contains("roles")) {
    auto faces = trace_faces(g);
    std::vector<FaceRole> roles(faces.size(), FaceRole::In);
    if (j.at("roles").size() != faces.size())
      throw MalformedGraph("roles count does not match face count");
    for (const auto& [k, v] : j.at("roles").items()) {
      int idx = std::stoi(k);
      if (idx < 0 || idx >= static_cast<int>(faces.size()))
        throw MalformedGraph("role face id out of range");
      std::string s = v.get<std::string>();
      if (s != "in" && s != "out") throw Error("role must be 'in' or 'out'");
      roles[idx] = s == "in" ? FaceRole::In : FaceRole::Out;
    }
    g.supplied_roles = roles;
  }
  return g;
}

json piece_to_json(const SeifertPiece& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["fatgraph"] = fatgraph_to_json(p.graph);
  j["block_sign"] = p.block_sign;
  j["lambda"] = p.lambda;
  j["orbit_dir"] = p.orbit_dir;
  json tori = json::array();
  for (const auto& t : p.tori)
    tori.push_back({{"cells", t.cells}, {"role", t.role == FaceRole::In ? "in" : "out"}});
  j["tori"] = tori;
  return j;
}

SeifertPiece piece_from_json(const json& j) {
  check_schema(j);
  FatGraph g = fatgraph_from_json(j.at("fatgraph"));
  SeifertPiece p = build_piece(g, j.at("block_sign").get<int>(), j.at("lambda").get<double>());
  // Derived fields must agree with the stored ones.
  if (j.contains("orbit_dir") && j.at("orbit_dir").get<std::vector<int>>() != p.orbit_dir)
    throw Error("stored orbit directions disagree with the rebuilt piece");
  return p;
}

json flow_to_json(const GluedFlow& f) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["pieces"] = json::array();
  for (const auto& p : f.pieces)
    j["pieces"].push_back({{"fatgraph", fatgraph_to_json(p.graph)},
                           {"block_sign", p.block_sign},
                           {"lambda", p.lambda}});
  j["gluings"] = json::array();
  for (const auto& gp : f.gluing.pairs)
    j["gluings"].push_back({{"from", json::array({gp.from_piece, gp.from_torus})},
                            {"to", json::array({gp.to_piece, gp.to_torus})},
                            {"matrix", matrix_to_json(gp.matrix)}});
  if (f.seed) j["seed"] = *f.seed;
  return j;
}

GluedFlow flow_from_json(const json& j) {
  check_schema(j);
  std::vector<SeifertPiece> pieces;
  for (const auto& pj : j.at("pieces")) {
    FatGraph g = fatgraph_from_json(pj.at("fatgraph"));
    pieces.push_back(
        build_piece(g, pj.at("block_sign").get<int>(), pj.at("lambda").get<double>()));
  }
  GluingSpec spec;
  for (const auto& gj : j.at("gluings")) {
    GluingPair gp;
    gp.from_piece = gj.at("from").at(0).get<int>();
    gp.from_torus = gj.at("from").at(1).get<int>();
    gp.to_piece = gj.at("to").at(0).get<int>();
    gp.to_torus = gj.at("to").at(1).get<int>();
    gp.matrix = matrix_from_json(gj.at("matrix"));
    spec.pairs.push_back(gp);
  }
  std::optional<unsigned> seed;
  if (j.contains("seed")) seed = j.at("seed").get<unsigned>();
  return build_flow(std::move(pieces), std::move(spec), seed);
}

json certificate_to_json(const EquivalenceCertificate& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["reverses_flow_direction"] = c.reverses_flow_direction;
  j["piece_matching"] = c.piece_matching;
  j["fiber_flags"] = c.fiber_flags;
  j["piece_maps"] = json::array();
  for (const auto& m : c.piece_maps)
    j["piece_maps"].push_back({{"dart_map", m.dart_map},
                               {"vertex_map", m.vertex_map},
                               {"reverses_orientation", m.reverses_orientation},
                               {"swaps_roles", m.swaps_roles}});
  return j;
}

EquivalenceCertificate certificate_from_json(const json& j) {
  check_schema(j);
  EquivalenceCertificate c;
  c.reverses_flow_direction = j.at("reverses_flow_direction").get<bool>();
  c.piece_matching = j.at("piece_matching").get<std::vector<int>>();
  c.fiber_flags = j.at("fiber_flags").get<std::vector<int>>();
  for (const auto& mj : j.at("piece_maps")) {
    FatGraphIso iso;
    iso.dart_map = mj.at("dart_map").get<std::vector<int>>();
    iso.vertex_map = mj.at("vertex_map").get<std::vector<int>>();
    iso.reverses_orientation = mj.at("reverses_orientation").get<bool>();
    iso.swaps_roles = mj.at("swaps_roles").get<bool>();
    c.piece_maps.push_back(std::move(iso));
  }
  return c;
}

json itineraries_to_json(const std::vector<Itinerary>& its) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["count"] = its.size();
  j["itineraries"] = json::array();
  for (const auto& it : its) {
    json steps = json::array();
    for (const auto& s : it)
      steps.push_back({{"piece", s.piece}, {"edge", s.edge}, {"gluing", s.gluing}});
    j["itineraries"].push_back(steps);
  }
  return j;
}

json cone_report_to_json(const ConeReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["lambda"] = r.lambda;
  j["matrix"] = matrix_to_json(r.matrix);
  j["grid_points"] = r.grid_points;
  j["excluded"] = r.excluded;
  j["min_expansion"] = r.min_expansion;
  j["max_expansion"] = r.max_expansion;
  j["threshold"] = r.threshold;
  j["verdict"] = r.verdict;
  return j;
}

json checklist_to_json(const BlockChecklist& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["interior_forward"] = c.interior_forward;
  j["no_x_drift"] = c.no_x_drift;
  j["tangent_invariant"] = c.tangent_invariant;
  j["transit_crossing"] = c.transit_crossing;
  j["halves_structure"] = c.halves_structure;
  j["failures"] = c.failures;
  j["all_pass"] = c.all_pass();
  return j;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "t,x,y,z\n";
  os.precision(17);
  for (const auto& s : t.samples)
    os << s.t << "," << s.x << "," << s.y << "," << s.z << "\n";
  return os.str();
}

std::string cone_report_csv(const ConeReport& r) {
  std::ostringstream os;
  os << "x,min_expansion,included\n";
  os.precision(17);
  for (int i = 0; i < r.grid_points; ++i) {
    bool inc = !std::isnan(r.entry_min[i]);
    os << r.grid_x[i] << "," << (inc ? r.entry_min[i] : 0.0) << "," << (inc ? 1 : 0)
       << "\n";
  }
  return os.str();
}

}  // namespace anoflip
