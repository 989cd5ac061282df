// Command-line front end: exit 0 on success / Equal / verdict true,
// 2 on structured negative results (Differs, violations, Exhausted,
// failed verdicts), 1 on usage or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "anoflip/flow_numerics.hpp"
#include "anoflip/json_io.hpp"
#include "anoflip/manifold_assembly.hpp"
#include "anoflip/orbit_combinatorics.hpp"

using namespace anoflip;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  if (path == "-") {
    json j;
    std::cin >> j;
    return j;
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open " + out_path + " for writing");
  out << text;
}

void write_json(const std::string& out_path, const json& j) {
  write_output(out_path, j.dump(2));
}

GluingMatrix parse_matrix(const std::vector<long>& entries) {
  if (entries.size() != 4) throw Error("--matrix expects a,b,c,d");
  return GluingMatrix{{{entries[0], entries[1]}, {entries[2], entries[3]}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-block flow assembly and comparison tool"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "output file (default stdout)");

  // example
  auto* cmd_example = app.add_subcommand("example", "emit a built-in fatgraph");
  std::string example_name = "two-holed-torus";
  int example_n = 1;
  std::vector<int> lattice_v1{2, 0}, lattice_v2{1, 1};
  cmd_example->add_option("name", example_name, "two-holed-torus | xn | lattice");
  cmd_example->add_option("--n", example_n, "family index for xn");
  cmd_example->add_option("--v1", lattice_v1, "lattice generator")->expected(2);
  cmd_example->add_option("--v2", lattice_v2, "lattice generator")->expected(2);

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "check fatgraph admissibility");
  std::string validate_in = "-";
  cmd_validate->add_option("file", validate_in, "fatgraph json ('-' = stdin)");

  // build
  auto* cmd_build = app.add_subcommand(
      "build", "assemble the cyclic construction over fatgraph files");
  std::vector<std::string> build_graphs;
  unsigned build_seed = 0;
  double build_lambda = kDefaultLambda;
  cmd_build->add_option("graphs", build_graphs, "fatgraph json files")->required();
  cmd_build->add_option("--seed", build_seed, "pairing seed");
  cmd_build->add_option("--lambda", build_lambda, "block parameter");

  // flip
  auto* cmd_flip = app.add_subcommand("flip", "flip one piece of a flow");
  std::string flip_in = "-";
  int flip_piece_idx = 0;
  cmd_flip->add_option("file", flip_in, "flow json");
  cmd_flip->add_option("--piece", flip_piece_idx, "piece index")->required();

  // compare
  auto* cmd_compare = app.add_subcommand("compare", "compare periodic orbit data");
  std::string cmp_a, cmp_b;
  int cmp_max_len = 4;
  cmd_compare->add_option("a", cmp_a)->required();
  cmd_compare->add_option("b", cmp_b)->required();
  cmd_compare->add_option("--max-len", cmp_max_len, "itinerary length cap");

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "partition flows by sign data");
  std::vector<std::string> classify_files;
  int classify_max_len = 4;
  cmd_classify->add_option("files", classify_files)->required();
  cmd_classify->add_option("--max-len", classify_max_len, "itinerary length cap");

  // search-equiv
  auto* cmd_search = app.add_subcommand("search-equiv", "orbit equivalence search");
  std::string search_a, search_b;
  cmd_search->add_option("a", search_a)->required();
  cmd_search->add_option("b", search_b)->required();

  // transitive
  auto* cmd_transitive = app.add_subcommand("transitive", "transit graph connectivity");
  std::string transitive_in = "-";
  cmd_transitive->add_option("file", transitive_in, "flow json");

  // itineraries
  auto* cmd_itin = app.add_subcommand("itineraries", "periodic itineraries");
  std::string itin_in = "-";
  int itin_max_len = 4;
  cmd_itin->add_option("file", itin_in, "flow json");
  cmd_itin->add_option("--max-len", itin_max_len, "length cap");

  // integrate
  auto* cmd_integrate = app.add_subcommand("integrate", "block transit trajectory");
  double int_lambda = kDefaultLambda, int_x = 0.0, int_z = 0.0, int_dt = 1e-3,
         int_tmax = 50.0;
  int int_sign = +1;
  bool int_json = false;
  cmd_integrate->add_option("--lambda", int_lambda);
  cmd_integrate->add_option("--x", int_x, "entry x coordinate");
  cmd_integrate->add_option("--z", int_z, "entry fiber coordinate");
  cmd_integrate->add_option("--sign", int_sign, "+1 or -1");
  cmd_integrate->add_option("--dt", int_dt);
  cmd_integrate->add_option("--tmax", int_tmax);
  cmd_integrate->add_flag("--json", int_json, "emit json summary instead of csv");

  // cone-check
  auto* cmd_cone = app.add_subcommand("cone-check", "boundary cone expansion estimate");
  double cone_lambda = kDefaultLambda, cone_tol = 1.0;
  std::vector<long> cone_matrix{0, 1, 1, 0};
  int cone_grid = 30;
  bool cone_csv = false;
  cmd_cone->add_option("--lambda", cone_lambda);
  cmd_cone->add_option("--matrix", cone_matrix, "a,b,c,d row-major")->expected(4);
  cmd_cone->add_option("--grid", cone_grid, "entry grid size");
  cmd_cone->add_option("--tol", cone_tol, "expansion threshold");
  cmd_cone->add_flag("--csv", cone_csv, "emit per-entry csv");

  // verify-block
  auto* cmd_verify = app.add_subcommand("verify-block", "block structure checklist");
  double verify_lambda = kDefaultLambda;
  int verify_sign = +1, verify_grid = 50;
  cmd_verify->add_option("--lambda", verify_lambda);
  cmd_verify->add_option("--sign", verify_sign);
  cmd_verify->add_option("--grid", verify_grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*cmd_example) {
      FatGraph g;
      if (example_name == "two-holed-torus") g = two_holed_torus_example();
      else if (example_name == "xn") g = family_Xn(example_n);
      else if (example_name == "lattice")
        g = lattice_quotient_graph({lattice_v1[0], lattice_v1[1]},
                                   {lattice_v2[0], lattice_v2[1]});
      else {
        std::cerr << "unknown example: " << example_name << "\n";
        return 1;
      }
      write_json(out_path, fatgraph_to_json(g));
      return 0;
    }
    if (*cmd_validate) {
      FatGraph g = fatgraph_from_json(read_json(validate_in));
      auto violations = validate_admissible(g);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["admissible"] = violations.empty();
      j["violations"] = json::array();
      for (const auto& v : violations) j["violations"].push_back(v.what);
      write_json(out_path, j);
      return violations.empty() ? 0 : 2;
    }
    if (*cmd_build) {
      std::vector<FatGraph> graphs;
      for (const auto& f : build_graphs) graphs.push_back(fatgraph_from_json(read_json(f)));
      GluedFlow flow = construction_7_3(graphs, build_seed, build_lambda);
      write_json(out_path, flow_to_json(flow));
      return 0;
    }
    if (*cmd_flip) {
      GluedFlow f = flow_from_json(read_json(flip_in));
      write_json(out_path, flow_to_json(apply_flip(f, flip_piece_idx)));
      return 0;
    }
    if (*cmd_compare) {
      GluedFlow a = flow_from_json(read_json(cmp_a));
      GluedFlow b = flow_from_json(read_json(cmp_b));
      auto r = free_homotopy_compare(a, b, cmp_max_len);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["result"] = r.equal ? "Equal" : "Differs";
      if (!r.equal) j["witness"] = r.witness;
      write_json(out_path, j);
      return r.equal ? 0 : 2;
    }
    if (*cmd_classify) {
      std::vector<GluedFlow> flows;
      for (const auto& f : classify_files) flows.push_back(flow_from_json(read_json(f)));
      auto classes = classify(flows, classify_max_len);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["class_count"] = classes.size();
      j["classes"] = classes;
      write_json(out_path, j);
      return 0;
    }
    if (*cmd_search) {
      GluedFlow a = flow_from_json(read_json(search_a));
      GluedFlow b = flow_from_json(read_json(search_b));
      auto r = orbit_equivalence_search(a, b);
      json j;
      j["schema_version"] = kSchemaVersion;
      if (r.certificate) {
        j["result"] = "Found";
        j["certificate"] = certificate_to_json(*r.certificate);
        j["replay_ok"] = replay_certificate(*r.certificate, a, b);
      } else {
        j["result"] = "Exhausted";
      }
      write_json(out_path, j);
      return r.certificate ? 0 : 2;
    }
    if (*cmd_transitive) {
      GluedFlow f = flow_from_json(read_json(transitive_in));
      bool t = check_transitive(f);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["transitive"] = t;
      write_json(out_path, j);
      return t ? 0 : 2;
    }
    if (*cmd_itin) {
      GluedFlow f = flow_from_json(read_json(itin_in));
      write_json(out_path, itineraries_to_json(periodic_itineraries(f, itin_max_len)));
      return 0;
    }
    if (*cmd_integrate) {
      BlockField b(int_sign, int_lambda);
      auto traj = block_transit(b, int_x, int_z, IntegrationParams{int_dt, int_tmax});
      if (int_json) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["kind"] = traj.kind == TerminationKind::ExitFace        ? "exit"
                    : traj.kind == TerminationKind::AsymptoticToOrbit ? "asymptotic"
                                                                      : "budget";
        j["exit_time"] = traj.exit_time;
        j["dz"] = traj.dz_unwrapped;
        j["asymptotic_orbit"] = traj.asymptotic_orbit;
        write_json(out_path, j);
      } else {
        write_output(out_path, trajectory_csv(traj));
      }
      return 0;
    }
    if (*cmd_cone) {
      auto report = cone_expansion(cone_lambda, parse_matrix(cone_matrix), cone_grid,
                                   0.2, cone_tol);
      if (cone_csv)
        write_output(out_path, cone_report_csv(report));
      else
        write_json(out_path, cone_report_to_json(report));
      return report.verdict ? 0 : 2;
    }
    if (*cmd_verify) {
      BlockField b(verify_sign, verify_lambda);
      auto cl = verify_block_properties(b, verify_grid);
      write_json(out_path, checklist_to_json(cl));
      return cl.all_pass() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
