#include "okpca/simulators.hpp"

#include <cmath>
#include <numbers>

#include "okpca/error.hpp"

namespace okpca {

Eigen::VectorXd OdeSystem::derivative(double t, const Eigen::VectorXd& x) const {
  if (x.size() != state_dimension)
    throw InputError(name + ": state has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(state_dimension));
  Eigen::VectorXd dxdt(state_dimension);
  vector_field(t, x, dxdt);
  return dxdt;
}

OdeSystem academic_system(bool faulty) {
  using std::numbers::pi;
  OdeSystem sys;
  sys.state_dimension = 2;
  sys.output_dimension = 2;
  if (!faulty) {
    sys.name = "academic";
    sys.vector_field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx[0] = -x[0] + x[1] * std::sin(pi * x[0] / 2.0);
      dx[1] = -x[1] + x[0] * std::cos(pi * x[0] / 2.0);
    };
  } else {
    sys.name = "academic-faulty";
    sys.vector_field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx[0] = -x[0] + 0.9 * x[1] * std::sin(pi * x[0] / 5.0);
      dx[1] = -x[1] + 0.8 * x[0] * std::cos(pi * x[1] / 3.0);
    };
  }
  return sys;
}

void PidGains::validate() const {
  if (!(kp >= 0.0) || !(ki >= 0.0) || !(kd >= 0.0))
    throw InputError("PID gains must be nonnegative");
  if (kp == 0.0 && ki == 0.0 && kd == 0.0) throw InputError("at least one PID gain must be positive");
}

void QuadrotorParams::validate() const {
  if (!(gravity > 0.0 && mass > 0.0 && inertia_x > 0.0 && inertia_y > 0.0 && inertia_z > 0.0 &&
        attitude_kp > 0.0 && attitude_kd >= 0.0 && max_tilt > 0.0))
    throw InputError("quadrotor constants must be positive");
}

OdeSystem quadrotor_system(const PidGains& gains, const Eigen::VectorXd& setpoint,
                           const QuadrotorParams& params) {
  gains.validate();
  params.validate();
  if (setpoint.size() != quad::kOutputDim)
    throw InputError("quadrotor setpoint must have 12 components");

  OdeSystem sys;
  sys.name = "quadrotor";
  sys.state_dimension = quad::kStateDim;
  sys.output_dimension = quad::kOutputDim;
  sys.vector_field = [gains, params, sp = Eigen::VectorXd(setpoint)](
                         double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    using namespace quad;
    const double g = params.gravity;
    const double ex = sp[kX] - s[kX];
    const double ey = sp[kY] - s[kY];
    const double ez = sp[kZ] - s[kZ];
    // PID on position; the derivative acts on the measured velocity.
    const double ax = gains.kp * ex + gains.ki * s[12] - gains.kd * s[kU];
    const double ay = gains.kp * ey + gains.ki * s[13] - gains.kd * s[kV];
    const double az = gains.kp * ez + gains.ki * s[14] - gains.kd * s[kW];

    // Smooth tilt limit keeps commanded angles inside the small-angle regime.
    const double pitch_cmd = params.max_tilt * std::tanh(-ax / g / params.max_tilt);
    const double roll_cmd = params.max_tilt * std::tanh(ay / g / params.max_tilt);
    const double thrust = params.mass * (g + az);
    const double tau_roll = params.attitude_kp * (roll_cmd - s[kRoll]) - params.attitude_kd * s[kP];
    const double tau_pitch =
        params.attitude_kp * (pitch_cmd - s[kPitch]) - params.attitude_kd * s[kQ];
    const double tau_yaw = params.attitude_kp * (sp[kYaw] - s[kYaw]) - params.attitude_kd * s[kR];

    ds[kX] = s[kU];
    ds[kY] = s[kV];
    ds[kZ] = s[kW];
    // Small-angle translational dynamics about hover; Coriolis terms neglected.
    ds[kU] = -g * s[kPitch];
    ds[kV] = g * s[kRoll];
    ds[kW] = thrust / params.mass - g;
    ds[kRoll] = s[kP];
    ds[kPitch] = s[kQ];
    ds[kYaw] = s[kR];
    ds[kP] = tau_roll / params.inertia_x;
    ds[kQ] = tau_pitch / params.inertia_y;
    ds[kR] = tau_yaw / params.inertia_z;
    ds[12] = ex;
    ds[13] = ey;
    ds[14] = ez;
  };
  return sys;
}

void SimConfig::validate() const {
  if (!(dt_sample > 0.0) || !std::isfinite(dt_sample))
    throw InputError("sample interval must be positive");
  if (!(duration >= dt_sample) || !std::isfinite(duration))
    throw InputError("duration must be at least one sample interval");
  if (integrator_substeps < 1) throw InputError("integrator_substeps must be at least 1");
  if (!(noise_sigma >= 0.0)) throw InputError("noise sigma must be nonnegative");
}

std::size_t SimConfig::num_samples() const {
  return static_cast<std::size_t>(std::floor(duration / dt_sample + 1e-9)) + 1;
}

Trajectory simulate(const OdeSystem& system, const Eigen::VectorXd& initial, const SimConfig& cfg,
                    std::string id) {
  cfg.validate();
  if (initial.size() != system.output_dimension)
    throw InputError(system.name + ": initial condition has dimension " +
                     std::to_string(initial.size()) + ", expected " +
                     std::to_string(system.output_dimension));

  const std::size_t samples = cfg.num_samples();
  const double h = cfg.dt_sample / cfg.integrator_substeps;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(system.state_dimension);
  x.head(system.output_dimension) = initial;
  Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());

  std::vector<double> times(samples);
  Eigen::MatrixXd states(static_cast<Eigen::Index>(samples), system.output_dimension);
  states.row(0) = initial.transpose();
  for (std::size_t k = 1; k < samples; ++k) {
    const double t0 = static_cast<double>(k - 1) * cfg.dt_sample;
    for (int sub = 0; sub < cfg.integrator_substeps; ++sub) {
      const double t = t0 + sub * h;
      system.vector_field(t, x, k1);
      tmp = x + 0.5 * h * k1;
      system.vector_field(t + 0.5 * h, tmp, k2);
      tmp = x + 0.5 * h * k2;
      system.vector_field(t + 0.5 * h, tmp, k3);
      tmp = x + h * k3;
      system.vector_field(t + h, tmp, k4);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    times[k] = static_cast<double>(k) * cfg.dt_sample;
    if (!x.allFinite()) throw SimulationDiverged(system.name, times[k]);
    states.row(static_cast<Eigen::Index>(k)) = x.head(system.output_dimension).transpose();
  }
  return Trajectory(std::move(times), std::move(states), std::move(id));
}

std::mt19937_64 make_rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Trajectory add_noise(const Trajectory& traj, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("noise sigma must be nonnegative");
  if (sigma == 0.0) return traj;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Eigen::MatrixXd states = traj.states();
  for (Eigen::Index a = 0; a < states.rows(); ++a)
    for (Eigen::Index c = 0; c < states.cols(); ++c) states(a, c) += noise(rng);
  return traj.with_states(std::move(states));
}

Eigen::VectorXd sample_initial(const InitialSampler& sampler, std::mt19937_64& rng) {
  if (sampler.kind == InitialSampler::Kind::UnitCircle) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double a = angle(rng);
    return Eigen::Vector2d(std::cos(a), std::sin(a));
  }
  if (!(sampler.side > 0.0) || sampler.dim < 1) throw InputError("invalid box sampler");
  std::uniform_real_distribution<double> coord(-0.5 * sampler.side, 0.5 * sampler.side);
  Eigen::VectorXd x(sampler.dim);
  for (Eigen::Index c = 0; c < sampler.dim; ++c) x[c] = coord(rng);
  return x;
}

Eigen::VectorXd sample_initial(const InitialSampler& sampler, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_initial(sampler, rng);
}

}  // namespace okpca
