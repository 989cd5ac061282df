#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anoflip/manifold_assembly.hpp"
#include "anoflip/model_block.hpp"

namespace anoflip {

struct IntegrationParams {
  double dt = 1e-3;
  double t_max = 50.0;
};

enum class TerminationKind { ExitFace, AsymptoticToOrbit, Budget };

struct Sample {
  double t, x, y, z;
};

struct Trajectory {
  std::vector<Sample> samples;  // decimated; always includes first and last
  TerminationKind kind = TerminationKind::Budget;
  FaceLabel exit_face = FaceLabel::Interior;
  double exit_time = 0.0;
  double exit_x = 0.0, exit_y = 0.0, exit_z = 0.0;
  double dz_unwrapped = 0.0;  // total fiber displacement, not reduced mod 1
  int asymptotic_orbit = 0;   // 1 => x = -pi/2 core orbit, 2 => x = +pi/2
};

using FieldFn = std::function<Velocity(double x, double y, double z)>;

FieldFn model_field(const BlockField& b);

// Fixed-step RK4 with bisection refinement of the outgoing-face crossing time
// (tolerance 1e-10).
Trajectory integrate_orbit(const BlockField& b, const BlockPoint& p0,
                           const IntegrationParams& params = {});
Trajectory integrate_orbit(const FieldFn& field, const BlockPoint& p0,
                           const IntegrationParams& params = {});

// Incoming-face entry (x, -pi/2, z) through the block.
Trajectory block_transit(const BlockField& b, double x_entry, double z_entry,
                         const IntegrationParams& params = {});

// Expansion of the composed map (boundary hitting map, then the gluing matrix
// A) on the cone of directions around A*(0,1) in the (x, z) chart.
struct ConeReport {
  double lambda = 0.0;
  GluingMatrix matrix{};
  int grid_points = 0;
  int excluded = 0;            // entries that hit the budget or tangency
  double min_expansion = 0.0;  // over included entries and cone directions
  double max_expansion = 0.0;
  double threshold = 1.0;
  bool verdict = false;  // min_expansion >= threshold
  std::vector<double> grid_x;
  std::vector<double> entry_min;  // per included entry (NaN when excluded)
};

ConeReport cone_expansion(double lambda, const GluingMatrix& matrix, int grid_points,
                          double cone_halfwidth = 0.2, double threshold = 1.0,
                          const IntegrationParams& params = {1e-3, 400.0},
                          int sign = +1);

// Samples the field over entry grids and directly checks the block's
// qualitative structure; a custom field exposes corruption.
struct BlockChecklist {
  bool interior_forward = false;    // dy > 0 away from the tangent faces
  bool no_x_drift = false;          // dx identically 0
  bool tangent_invariant = false;   // the faces x = +-pi/2 are invariant
  bool transit_crossing = false;    // incoming entries cross to the outgoing face
  bool halves_structure = false;    // tangent faces: y<0 attracts to the orbit
                                    // forward, y>0 backward
  std::vector<std::string> failures;
  bool all_pass() const {
    return interior_forward && no_x_drift && tangent_invariant && transit_crossing &&
           halves_structure;
  }
};

BlockChecklist verify_block_properties(const BlockField& b, int grid_points = 50,
                                       double tol = 1e-9);
BlockChecklist verify_block_properties(const BlockField& b, const FieldFn& field,
                                       int grid_points = 50, double tol = 1e-9);

// Thread cap from ANOFLIP_THREADS (>=1); grid evaluations may run in
// parallel, with deterministic aggregation.
int thread_cap();

}  // namespace anoflip
