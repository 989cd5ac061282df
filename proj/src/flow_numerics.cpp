#include "anoflip/flow_numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace anoflip {

namespace {

struct State {
  double x, y, z;
};

State rk4_step(const FieldFn& f, const State& s, double dt) {
  auto eval = [&](const State& q) { return f(q.x, q.y, q.z); };
  Velocity k1 = eval(s);
  Velocity k2 = eval({s.x + 0.5 * dt * k1.dx, s.y + 0.5 * dt * k1.dy, s.z + 0.5 * dt * k1.dz});
  Velocity k3 = eval({s.x + 0.5 * dt * k2.dx, s.y + 0.5 * dt * k2.dy, s.z + 0.5 * dt * k2.dz});
  Velocity k4 = eval({s.x + dt * k3.dx, s.y + dt * k3.dy, s.z + dt * k3.dz});
  return {s.x + dt / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx),
          s.y + dt / 6.0 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy),
          s.z + dt / 6.0 * (k1.dz + 2 * k2.dz + 2 * k3.dz + k4.dz)};
}

constexpr double kCrossTol = 1e-10;
constexpr double kAsymptoticBand = 1e-3;

}  // namespace

FieldFn model_field(const BlockField& b) {
  const int sign = b.sign;
  const double lambda = b.lambda;
  return [sign, lambda](double x, double y, double) {
    const double cx = std::cos(x), sx = std::sin(x), sy = std::sin(y);
    return Velocity{0.0, cx * cx + sy * sy * sx * sx, sign * lambda * sx * std::cos(y)};
  };
}

Trajectory integrate_orbit(const BlockField& b, const BlockPoint& p0,
                           const IntegrationParams& params) {
  return integrate_orbit(model_field(b), p0, params);
}

Trajectory integrate_orbit(const FieldFn& field, const BlockPoint& p0,
                           const IntegrationParams& params) {
  if (params.dt <= 0 || params.t_max <= 0) throw Error("dt and t_max must be positive");
  Trajectory traj;
  State s{p0.x, p0.y, p0.z};
  const double z0 = s.z;
  double t = 0.0;

  auto finish_exit = [&](double time, const State& st) {
    traj.kind = TerminationKind::ExitFace;
    traj.exit_face = FaceLabel::Outgoing;
    traj.exit_time = time;
    traj.exit_x = st.x;
    traj.exit_y = kHalfPi;
    traj.exit_z = st.z - std::floor(st.z);
    traj.dz_unwrapped = st.z - z0;
    traj.samples.push_back({time, st.x, kHalfPi, traj.exit_z});
  };

  traj.samples.push_back({0.0, s.x, s.y, s.z - std::floor(s.z)});
  if (s.y >= kHalfPi - kCrossTol) {
    finish_exit(0.0, s);
    return traj;
  }

  const long total_steps = static_cast<long>(std::ceil(params.t_max / params.dt));
  const long stride = std::max<long>(1, total_steps / 4096);
  bool asymptotic_band_ok = true;  // |y| small throughout [t_max/2, t_max]

  for (long step = 0; step < total_steps; ++step) {
    double dt = std::min(params.dt, params.t_max - t);
    if (dt <= 0) break;
    State next = rk4_step(field, s, dt);
    if (next.y >= kHalfPi) {
      // Bisect the crossing time within this step.
      double lo = 0.0, hi = dt;
      while (hi - lo > kCrossTol) {
        double mid = 0.5 * (lo + hi);
        (rk4_step(field, s, mid).y >= kHalfPi ? hi : lo) = mid;
      }
      State exit_state = rk4_step(field, s, hi);
      finish_exit(t + hi, exit_state);
      return traj;
    }
    s = next;
    t += dt;
    if (t >= params.t_max / 2.0 && std::abs(s.y) >= kAsymptoticBand)
      asymptotic_band_ok = false;
    if ((step + 1) % stride == 0)
      traj.samples.push_back({t, s.x, s.y, s.z - std::floor(s.z)});
  }

  if (traj.samples.back().t != t)
    traj.samples.push_back({t, s.x, s.y, s.z - std::floor(s.z)});
  traj.dz_unwrapped = s.z - z0;
  if (std::abs(std::abs(s.x) - kHalfPi) <= 1e-9 && asymptotic_band_ok &&
      std::abs(s.y) < kAsymptoticBand) {
    traj.kind = TerminationKind::AsymptoticToOrbit;
    traj.asymptotic_orbit = s.x < 0 ? 1 : 2;
  } else {
    traj.kind = TerminationKind::Budget;
  }
  return traj;
}

Trajectory block_transit(const BlockField& b, double x_entry, double z_entry,
                         const IntegrationParams& params) {
  return integrate_orbit(b, BlockPoint(x_entry, -kHalfPi, z_entry), params);
}

int thread_cap() {
  const char* env = std::getenv("ANOFLIP_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

namespace {

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  int threads = std::min(thread_cap(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

ConeReport cone_expansion(double lambda, const GluingMatrix& matrix, int grid_points,
                          double cone_halfwidth, double threshold,
                          const IntegrationParams& params, int sign) {
  long d = det(matrix);
  if (d != 1 && d != -1) throw Error("gluing matrix is not unimodular");
  if (matrix[0][1] == 0 && (matrix[1][1] == 1 || matrix[1][1] == -1))
    throw FiberPreservingGluing("matrix glues the fiber class to the fiber class");
  if (grid_points < 1) throw Error("grid must have at least one point");

  // Image of the fiber direction, the cone axis. The cone must avoid the
  // fiber direction itself.
  const double ax = static_cast<double>(matrix[0][1]);
  const double az = static_cast<double>(matrix[1][1]);
  const double axis = std::atan2(az, ax);
  double fiber_gap = std::abs(std::remainder(axis - kHalfPi, kPi));
  if (fiber_gap <= cone_halfwidth)
    throw Error("cone about the glued fiber image contains the fiber direction");

  BlockField b(sign, lambda);
  ConeReport report;
  report.lambda = lambda;
  report.matrix = matrix;
  report.grid_points = grid_points;
  report.threshold = threshold;
  report.grid_x.resize(grid_points);
  report.entry_min.assign(grid_points, std::numeric_limits<double>::quiet_NaN());

  const double x_lim = 1.4;  // stays clear of the tangent faces
  for (int i = 0; i < grid_points; ++i)
    report.grid_x[i] = grid_points == 1
                           ? 0.0
                           : -x_lim + 2.0 * x_lim * i / (grid_points - 1);

  const double h = 1e-5;  // central-difference step for d(dz)/dx
  const int cone_samples = 33;
  parallel_for(grid_points, [&](int i) {
    double x = report.grid_x[i];
    auto lo = block_transit(b, x - h, 0.0, params);
    auto hi = block_transit(b, x + h, 0.0, params);
    if (lo.kind != TerminationKind::ExitFace || hi.kind != TerminationKind::ExitFace)
      return;  // excluded entry
    double q = (hi.dz_unwrapped - lo.dz_unwrapped) / (2.0 * h);
    // D(hitting map) = [[1,0],[q,1]] in the (x, z) chart; compose with A.
    double m00 = static_cast<double>(matrix[0][0]) + ax * q;
    double m01 = ax;
    double m10 = static_cast<double>(matrix[1][0]) + az * q;
    double m11 = az;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cone_samples; ++k) {
      double theta = axis - cone_halfwidth +
                     2.0 * cone_halfwidth * k / (cone_samples - 1);
      double vx = std::cos(theta), vz = std::sin(theta);
      double ix = m00 * vx + m01 * vz, iz = m10 * vx + m11 * vz;
      best = std::min(best, std::hypot(ix, iz));
    }
    report.entry_min[i] = best;
  });

  report.min_expansion = std::numeric_limits<double>::infinity();
  report.max_expansion = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    if (std::isnan(report.entry_min[i])) {
      ++report.excluded;
      continue;
    }
    report.min_expansion = std::min(report.min_expansion, report.entry_min[i]);
    report.max_expansion = std::max(report.max_expansion, report.entry_min[i]);
  }
  report.verdict = report.excluded < grid_points && report.min_expansion >= threshold;
  return report;
}

BlockChecklist verify_block_properties(const BlockField& b, int grid_points, double tol) {
  return verify_block_properties(b, model_field(b), grid_points, tol);
}

BlockChecklist verify_block_properties(const BlockField& b, const FieldFn& field,
                                       int grid_points, double tol) {
  BlockChecklist cl;
  if (grid_points < 3) throw Error("grid must have at least three points");
  const double zs[] = {0.0, 0.25, 0.5, 0.75};

  // (i) interior forward motion and (ii) no x drift, over the full grid.
  cl.interior_forward = true;
  cl.no_x_drift = true;
  for (int i = 0; i < grid_points; ++i) {
    double x = -kHalfPi + kPi * i / (grid_points - 1);
    for (int j = 0; j < grid_points; ++j) {
      double y = -kHalfPi + kPi * j / (grid_points - 1);
      for (double z : zs) {
        Velocity v = field(x, y, z);
        if (std::abs(v.dx) > tol) cl.no_x_drift = false;
        bool interior_x = std::abs(std::abs(x) - kHalfPi) > 1e-9;
        if (interior_x && v.dy <= 0) cl.interior_forward = false;
        if (v.dy < -tol) cl.interior_forward = false;
      }
    }
  }
  if (!cl.no_x_drift) cl.failures.push_back("field drifts in x");
  if (!cl.interior_forward) cl.failures.push_back("forward y motion fails off the tangent faces");

  // (iii) tangent faces invariant: dx vanishes on x = +-pi/2.
  cl.tangent_invariant = true;
  for (double xf : {-kHalfPi, kHalfPi})
    for (int j = 0; j < grid_points; ++j) {
      double y = -kHalfPi + kPi * j / (grid_points - 1);
      for (double z : zs)
        if (std::abs(field(xf, y, z).dx) > tol) cl.tangent_invariant = false;
    }
  if (!cl.tangent_invariant) cl.failures.push_back("tangent faces are not invariant");

  // (iv) incoming entries cross to the outgoing face.
  cl.transit_crossing = true;
  IntegrationParams ip{1e-3, 60.0};
  for (int i = 0; i < 9; ++i) {
    double x = -1.2 + 2.4 * i / 8.0;
    auto traj = integrate_orbit(field, BlockPoint(x, -kHalfPi, 0.0), ip);
    if (traj.kind != TerminationKind::ExitFace) cl.transit_crossing = false;
  }
  if (!cl.transit_crossing) cl.failures.push_back("incoming entries fail to reach the outgoing face");

  // (v) tangent-face half structure: the y<0 half approaches the core orbit
  // forward in time, the y>0 half backward in time.
  cl.halves_structure = true;
  FieldFn reversed = [&field](double x, double y, double z) {
    Velocity v = field(x, y, z);
    return Velocity{-v.dx, -v.dy, -v.dz};
  };
  for (double xf : {-kHalfPi, kHalfPi}) {
    State fwd{xf, -0.8, 0.0};
    for (int s = 0; s < 1000; ++s) fwd = rk4_step(field, fwd, 1e-3);
    if (std::abs(fwd.y) >= 0.8) cl.halves_structure = false;
    State bwd{xf, 0.8, 0.0};
    for (int s = 0; s < 1000; ++s) bwd = rk4_step(reversed, bwd, 1e-3);
    if (std::abs(bwd.y) >= 0.8) cl.halves_structure = false;
  }
  if (!cl.halves_structure) cl.failures.push_back("tangent half-face attraction fails");

  (void)b;
  return cl;
}

}  // namespace anoflip
