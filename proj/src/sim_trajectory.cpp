#include "lio/sim/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lio::sim {

TrajectoryKind parse_trajectory_kind(std::string_view name) {
  if (name == "static") return TrajectoryKind::kStatic;
  if (name == "constant_velocity") return TrajectoryKind::kConstantVelocity;
  if (name == "constant_accel") return TrajectoryKind::kConstantAccel;
  if (name == "sinusoid") return TrajectoryKind::kSinusoid;
  if (name == "aggressive_spin") return TrajectoryKind::kAggressiveSpin;
  throw std::invalid_argument("unknown trajectory kind: " + std::string(name));
}

std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kStatic: return "static";
    case TrajectoryKind::kConstantVelocity: return "constant_velocity";
    case TrajectoryKind::kConstantAccel: return "constant_accel";
    case TrajectoryKind::kSinusoid: return "sinusoid";
    case TrajectoryKind::kAggressiveSpin: return "aggressive_spin";
  }
  return "?";
}

Quat TrajectorySpec::start_orientation() const {
  return Quat(Eigen::AngleAxisd(start_rpy.z(), Vec3::UnitZ()) *
              Eigen::AngleAxisd(start_rpy.y(), Vec3::UnitY()) *
              Eigen::AngleAxisd(start_rpy.x(), Vec3::UnitX()));
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct AngleProfile {
  double angle = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

// Constant spin with a smoothstep spin-up so the rate starts and settles with
// zero angular acceleration.
AngleProfile ramped_spin(double rate, double ramp, double t) {
  AngleProfile p;
  if (rate == 0.0) return p;
  if (ramp <= 0.0 || t >= ramp) {
    const double spun_up = ramp <= 0.0 ? 0.0 : 0.5 * ramp;
    p.angle = rate * (t - spun_up);
    p.rate = rate;
    p.accel = 0.0;
    return p;
  }
  const double u = t / ramp;
  p.angle = rate * ramp * (u * u * u - 0.5 * u * u * u * u);
  p.rate = rate * (3.0 * u * u - 2.0 * u * u * u);
  p.accel = rate * (6.0 * u - 6.0 * u * u) / ramp;
  return p;
}

AngleProfile oscillation(double amplitude, double frequency, double phase, double t) {
  AngleProfile p;
  if (amplitude == 0.0 || frequency == 0.0) return p;
  const double w = kTwoPi * frequency;
  p.angle = amplitude * (std::sin(w * t + phase) - std::sin(phase));
  p.rate = amplitude * w * std::cos(w * t + phase);
  p.accel = -amplitude * w * w * std::sin(w * t + phase);
  return p;
}

}  // namespace

MotionModel::MotionModel(TrajectorySpec spec, double preamble)
    : spec_(std::move(spec)), preamble_(preamble), start_orientation_(spec_.start_orientation()) {
  if (preamble_ < 0.0) throw std::invalid_argument("preamble must be >= 0");
  if (spec_.rot_axis.norm() < 1e-12) throw std::invalid_argument("rotation axis is degenerate");
  spec_.rot_axis.normalize();
}

MotionSample MotionModel::evaluate(double t) const {
  MotionSample s;
  s.position = spec_.start_position;

  switch (spec_.kind) {
    case TrajectoryKind::kStatic:
      break;
    case TrajectoryKind::kConstantVelocity:
      s.position += spec_.linear_velocity * t;
      s.velocity = spec_.linear_velocity;
      break;
    case TrajectoryKind::kConstantAccel:
      s.position += spec_.linear_velocity * t + 0.5 * spec_.linear_accel * (t * t);
      s.velocity = spec_.linear_velocity + spec_.linear_accel * t;
      s.acceleration = spec_.linear_accel;
      break;
    case TrajectoryKind::kSinusoid:
    case TrajectoryKind::kAggressiveSpin:
      for (int i = 0; i < 3; ++i) {
        const double a = spec_.pos_amplitude[i];
        if (a == 0.0) continue;
        const double w = kTwoPi * spec_.pos_frequency[i];
        const double ph = spec_.pos_phase[i];
        s.position[i] += a * (std::sin(w * t + ph) - std::sin(ph));
        s.velocity[i] = a * w * std::cos(w * t + ph);
        s.acceleration[i] = -a * w * w * std::sin(w * t + ph);
      }
      break;
  }

  AngleProfile rot;
  if (spec_.kind == TrajectoryKind::kAggressiveSpin) {
    rot = ramped_spin(spec_.spin_rate, spec_.spin_ramp, t);
  }
  if (spec_.kind == TrajectoryKind::kSinusoid || spec_.kind == TrajectoryKind::kAggressiveSpin) {
    const AngleProfile osc =
        oscillation(spec_.rot_amplitude, spec_.rot_frequency, spec_.rot_phase, t);
    rot.angle += osc.angle;
    rot.rate += osc.rate;
    rot.accel += osc.accel;
  }

  s.orientation = (start_orientation_ * exp_so3(spec_.rot_axis * rot.angle)).normalized();
  s.angular_velocity = spec_.rot_axis * rot.rate;
  s.angular_accel = spec_.rot_axis * rot.accel;
  return s;
}

MotionSample MotionModel::sample(double t) const {
  if (t < 0.0 || t > duration() + 1e-12) {
    throw std::out_of_range("time outside trajectory duration");
  }
  if (t <= preamble_) {
    MotionSample s = evaluate(0.0);
    s.velocity.setZero();
    s.acceleration.setZero();
    s.angular_velocity.setZero();
    s.angular_accel.setZero();
    return s;
  }
  return evaluate(std::min(t - preamble_, spec_.duration));
}

Pose MotionModel::pose(double t) const {
  const MotionSample s = sample(t);
  return Pose{s.position, s.orientation};
}

Pose ground_truth_pose(const TrajectorySpec& spec, double t) {
  return MotionModel(spec).pose(t);
}

MotionSample ground_truth_state(const TrajectorySpec& spec, double t) {
  return MotionModel(spec).sample(t);
}

}  // namespace lio::sim
