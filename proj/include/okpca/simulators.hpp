#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "okpca/trajectory.hpp"

namespace okpca {

/// Autonomous or time-varying vector field. The first `output_dimension` state components are
/// recorded into trajectories; any remaining ones (controller integrators) stay internal and
/// start at zero.
struct OdeSystem {
  std::string name;
  Eigen::Index state_dimension = 0;
  Eigen::Index output_dimension = 0;
  std::function<void(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dxdt)> vector_field;

  Eigen::VectorXd derivative(double t, const Eigen::VectorXd& x) const;
};

/// Two-state academic example. Nominal:
///   x1' = -x1 + x2 sin(pi x1 / 2),  x2' = -x2 + x1 cos(pi x1 / 2)
/// Faulty:
///   x1' = -x1 + 0.9 x2 sin(pi x1 / 5),  x2' = -x2 + 0.8 x1 cos(pi x2 / 3)
OdeSystem academic_system(bool faulty);

/// Gains shared by the three PID loops of the quadrotor controller.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  void validate() const;
  friend bool operator==(const PidGains&, const PidGains&) = default;
};

inline constexpr PidGains kNominalGains{5.0, 2.0, 8.0};
inline constexpr PidGains kMajorFaultGains{15.0, 12.0, 2.0};
inline constexpr PidGains kMinorFaultGains{4.0, 3.0, 7.0};

/// Physical constants of the small-angle quadrotor stand-in. These are not derived from any
/// particular airframe; the defaults make the nominal closed loop settle well within 15.2 s from
/// anywhere in the unit box.
struct QuadrotorParams {
  double gravity = 9.81;     // m/s^2
  double mass = 1.0;         // kg
  double inertia_x = 0.01;   // kg m^2
  double inertia_y = 0.01;
  double inertia_z = 0.02;
  double attitude_kp = 4.0;  // N m / rad, inner attitude stiffness
  double attitude_kd = 0.28; // N m s / rad, inner attitude damping
  double max_tilt = 0.2;     // rad, limit on commanded roll and pitch

  void validate() const;
};

/// Index layout of the emitted 12-dimensional quadrotor state.
namespace quad {
inline constexpr Eigen::Index kX = 0, kY = 1, kZ = 2;
inline constexpr Eigen::Index kU = 3, kV = 4, kW = 5;
inline constexpr Eigen::Index kRoll = 6, kPitch = 7, kYaw = 8;
inline constexpr Eigen::Index kP = 9, kQ = 10, kR = 11;
inline constexpr Eigen::Index kOutputDim = 12;
inline constexpr Eigen::Index kStateDim = 15;  // plus three PID integrators
}  // namespace quad

/// Closed-loop 12-state quadrotor (position, velocity, Euler angles, body rates) linearized for
/// small roll and pitch, without Coriolis terms. Three PID loops with identical gains act on the
/// position errors: the altitude loop sets thrust, the x loop commands pitch and the y loop
/// commands roll. A fixed PD attitude loop tracks the commanded angles and holds the setpoint
/// yaw. The integrators are internal states 12..14.
OdeSystem quadrotor_system(const PidGains& gains, const Eigen::VectorXd& setpoint,
                           const QuadrotorParams& params = {});

struct SimConfig {
  double dt_sample = 0.01;
  double duration = 2.0;
  int integrator_substeps = 1;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t num_samples() const;
};

/// Fixed-step classical RK4, `integrator_substeps` steps per sample interval. Samples are emitted
/// at t = 0, dt, ..., and no noise is added. Throws SimulationDiverged on a non-finite state.
Trajectory simulate(const OdeSystem& system, const Eigen::VectorXd& initial, const SimConfig& cfg,
                    std::string id = {});

/// I.i.d. N(0, sigma^2) measurement noise on every state coordinate; times are unchanged.
Trajectory add_noise(const Trajectory& traj, double sigma, std::uint64_t seed);

/// Independent, reproducible RNG stream for (master seed, stream tag, index).
std::mt19937_64 make_rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index);

struct InitialSampler {
  enum class Kind { UnitCircle, Box };
  Kind kind = Kind::UnitCircle;
  double side = 2.0;      // Box only
  Eigen::Index dim = 2;   // Box only

  static InitialSampler unit_circle() { return {Kind::UnitCircle, 0.0, 2}; }
  static InitialSampler box(double side, Eigen::Index dim) { return {Kind::Box, side, dim}; }
};

/// UnitCircle: radius 1 at a uniform angle in [0, 2 pi). Box: each coordinate uniform on
/// [-side/2, side/2].
Eigen::VectorXd sample_initial(const InitialSampler& sampler, std::mt19937_64& rng);
Eigen::VectorXd sample_initial(const InitialSampler& sampler, std::uint64_t seed);

}  // namespace okpca
