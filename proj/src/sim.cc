// Copyright 2026 The Getup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "getup/sim.h"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "getup/error.h"

namespace getup {
namespace {

inline Vec2 rotate(double angle, const Vec2& v) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

struct Frames {
  std::vector<Vec2> origin;
  std::vector<double> angle;
};

double joint_angle(const CharacterModel& model, int k, const Vec& q) {
  const int dof = model.joint_dof[k];
  return dof < 0 ? model.joints[k].locked_angle : q[dof];
}

Frames compute_frames(const CharacterModel& model, const Vec& q) {
  const size_t n = model.links.size();
  Frames f;
  f.origin.resize(n);
  f.angle.resize(n);
  f.origin[0] = Vec2(q[0], q[1]);
  f.angle[0] = q[2];
  for (size_t i = 1; i < n; ++i) {
    const int k = model.link_parent_joint[i];
    const JointSpec& joint = model.joints[k];
    const int p = joint.parent;
    f.angle[i] = f.angle[p] + joint.axis_sign * joint_angle(model, k, q);
    f.origin[i] = f.origin[p] + rotate(f.angle[p], joint.anchor);
  }
  return f;
}

std::vector<double> link_angular_velocities(const CharacterModel& model, const Vec& qdot) {
  std::vector<double> omega(model.links.size(), qdot[2]);
  for (size_t i = 1; i < model.links.size(); ++i) {
    const int k = model.link_parent_joint[i];
    const int dof = model.joint_dof[k];
    omega[i] = omega[model.joints[k].parent] + (dof < 0 ? 0.0 : model.joints[k].axis_sign * qdot[dof]);
  }
  return omega;
}

// Linear Jacobian (2 x n) of a world point rigidly attached to `link`.
void point_jacobian(const CharacterModel& model, const Frames& frames, int link, const Vec2& p,
                    Mat& jac) {
  jac.setZero(2, model.num_dofs());
  jac(0, 0) = 1.0;
  jac(1, 1) = 1.0;
  jac.col(2) = perp(p - frames.origin[0]);
  for (int k : model.chain[link]) {
    const int dof = model.joint_dof[k];
    if (dof < 0) continue;
    jac.col(dof) = model.joints[k].axis_sign * perp(p - frames.origin[model.joints[k].child]);
  }
}

// Angular Jacobian row of `link`.
void angular_jacobian(const CharacterModel& model, int link, Eigen::RowVectorXd& row) {
  row.setZero(model.num_dofs());
  row[2] = 1.0;
  for (int k : model.chain[link]) {
    const int dof = model.joint_dof[k];
    if (dof >= 0) row[dof] = model.joints[k].axis_sign;
  }
}

// Mass matrix and/or bias forces in one pass over the links.
void rigid_body_terms(const CharacterModel& model, const Frames& frames, const Vec* qdot,
                      double gravity, Mat* mass, Vec* bias) {
  const int n = model.num_dofs();
  const size_t links = model.links.size();
  if (mass) mass->setZero(n, n);
  if (bias) bias->setZero(n);

  std::vector<double> omega;
  std::vector<Vec2> origin_acc;
  if (bias) {
    omega = link_angular_velocities(model, *qdot);
    origin_acc.assign(links, Vec2::Zero());
    for (size_t i = 1; i < links; ++i) {
      const int p = model.joints[model.link_parent_joint[i]].parent;
      origin_acc[i] = origin_acc[p] - omega[p] * omega[p] * (frames.origin[i] - frames.origin[p]);
    }
  }

  Mat jac(2, n);
  Eigen::RowVectorXd ang(n);
  for (size_t i = 0; i < links; ++i) {
    const RigidLink& link = model.links[i];
    const Vec2 com = frames.origin[i] + rotate(frames.angle[i], link.com());
    point_jacobian(model, frames, static_cast<int>(i), com, jac);
    if (mass) {
      angular_jacobian(model, static_cast<int>(i), ang);
      mass->noalias() += link.mass * jac.transpose() * jac;
      mass->noalias() += link.inertia * ang.transpose() * ang;
    }
    if (bias) {
      const Vec2 acc = origin_acc[i] - omega[i] * omega[i] * (com - frames.origin[i]);
      const Vec2 load = link.mass * (acc + Vec2(0.0, gravity));
      bias->noalias() += jac.transpose() * load;
    }
  }
  if (mass) {
    for (size_t k = 0; k < model.joints.size(); ++k) {
      const int dof = model.joint_dof[k];
      if (dof >= 0) (*mass)(dof, dof) += model.joints[k].armature;
    }
  }
}

// Generalized forces that are treated explicitly, plus the damping matrix of
// the velocity-proportional terms that are treated implicitly.
struct ContactTerms {
  Vec force;
  Mat damping;
  bool any = false;
};

void accumulate_contacts(const CharacterModel& model, const Frames& frames, const Vec& qdot,
                         const SimConfig& config, ContactTerms& out) {
  const int n = model.num_dofs();
  Mat jac(2, n);
  for (size_t i = 0; i < model.links.size(); ++i) {
    for (const Vec2& local : model.links[i].contact_points) {
      const Vec2 p = frames.origin[i] + rotate(frames.angle[i], local);
      if (p.y() >= 0.0) continue;
      point_jacobian(model, frames, static_cast<int>(i), p, jac);
      const Vec2 vel = jac * qdot;
      const double penetration = -p.y();
      const double approach = std::max(0.0, -vel.y());
      const double normal = config.contact_stiffness * penetration + config.contact_damping * approach;
      out.any = true;
      out.force.noalias() += jac.row(1).transpose() * (config.contact_stiffness * penetration);
      if (approach > 0.0) {
        out.damping.noalias() += config.contact_damping * jac.row(1).transpose() * jac.row(1);
      }
      const double cone = config.friction_coefficient * normal;
      if (config.friction_damping * std::abs(vel.x()) <= cone) {
        out.damping.noalias() += config.friction_damping * jac.row(0).transpose() * jac.row(0);
      } else {
        const double slide = vel.x() > 0.0 ? -cone : cone;
        out.force.noalias() += jac.row(0).transpose() * slide;
      }
    }
  }
}

void accumulate_joint_limits(const CharacterModel& model, const Vec& q, const Vec& qdot,
                             const SimConfig& config, ContactTerms& out) {
  for (size_t k = 0; k < model.joints.size(); ++k) {
    const int dof = model.joint_dof[k];
    if (dof < 0) continue;
    const JointSpec& joint = model.joints[k];
    const double stiffness = config.limit_stiffness_per_torque * joint.torque_limit;
    const double damping = config.limit_damping_ratio * stiffness;
    if (q[dof] > joint.angle_limits[1]) {
      out.force[dof] -= stiffness * (q[dof] - joint.angle_limits[1]);
      if (qdot[dof] > 0.0) out.damping(dof, dof) += damping;
      out.any = true;
    } else if (q[dof] < joint.angle_limits[0]) {
      out.force[dof] += stiffness * (joint.angle_limits[0] - q[dof]);
      if (qdot[dof] < 0.0) out.damping(dof, dof) += damping;
      out.any = true;
    }
  }
}

Vec generalized(const CharacterModel& model, const Vec& torques) {
  Vec tau = Vec::Zero(model.num_dofs());
  tau.tail(model.num_actuated()) = torques;
  return tau;
}

// Velocity update over `h` with contact and limit damping taken at the end
// of the interval: (M + h D) v' = M v + h (tau + f - C).
Vec kick(const CharacterModel& model, const Vec& q, const Vec& v, const Vec& tau, double h,
         const SimConfig& config) {
  const int n = model.num_dofs();
  const Frames frames = compute_frames(model, q);
  Mat mass;
  Vec bias;
  rigid_body_terms(model, frames, &v, config.gravity, &mass, &bias);

  ContactTerms extra{Vec::Zero(n), Mat::Zero(n, n), false};
  accumulate_contacts(model, frames, v, config, extra);
  accumulate_joint_limits(model, q, v, config, extra);

  Vec rhs = mass * v + h * (tau + extra.force - bias);
  if (extra.any) mass.noalias() += h * extra.damping;

  Vec out = Vec::Zero(n);
  if (model.fixed_base) {
    const int j = model.num_actuated();
    out.tail(j) = mass.bottomRightCorner(j, j).llt().solve(rhs.tail(j));
  } else {
    out = mass.llt().solve(rhs);
  }
  return out;
}

template <typename TorqueFn>
SimState integrate(const CharacterModel& model, const SimState& state, const SimConfig& config,
                   TorqueFn&& torque_at) {
  config.validate();
  check_dimensions(model, state.q, "state.q");
  check_dimensions(model, state.qdot, "state.qdot");
  SimState next = state;
  const double h = config.dt_sim;
  for (int s = 0; s < config.substeps_per_control; ++s) {
    // Kick-drift-kick leapfrog.
    const Vec v_half = kick(model, next.q, next.qdot, torque_at(next.q, next.qdot), 0.5 * h, config);
    next.q.noalias() += h * v_half;
    next.qdot = kick(model, next.q, v_half, torque_at(next.q, v_half), 0.5 * h, config);
    next.time += h;
    if (!next.q.allFinite() || !next.qdot.allFinite()) {
      throw DivergenceError("simulation produced non-finite state", s);
    }
  }
  return next;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt_sim > 0.0)) throw ConfigError("must be positive", "sim.dt_sim");
  if (substeps_per_control < 1) throw ConfigError("must be >= 1", "sim.substeps_per_control");
  if (contact_stiffness < 0.0 || contact_damping < 0.0 || friction_coefficient < 0.0 ||
      friction_damping < 0.0) {
    throw ConfigError("contact parameters must be non-negative", "sim");
  }
}

void check_dimensions(const CharacterModel& model, const Vec& q, const char* what) {
  if (q.size() != model.num_dofs()) {
    throw ConfigError("dimension " + std::to_string(q.size()) + " does not match model dofs " +
                          std::to_string(model.num_dofs()),
                      what);
  }
}

Kinematics forward_kinematics(const CharacterModel& model, const Vec& q) {
  check_dimensions(model, q, "q");
  const Frames frames = compute_frames(model, q);
  Kinematics out;
  out.links.resize(model.links.size());
  double mass = 0.0;
  for (size_t i = 0; i < model.links.size(); ++i) {
    LinkPose& pose = out.links[i];
    pose.origin = frames.origin[i];
    pose.angle = frames.angle[i];
    pose.com = frames.origin[i] + rotate(frames.angle[i], model.links[i].com());
    out.com += model.links[i].mass * pose.com;
    mass += model.links[i].mass;
  }
  out.com /= mass;
  if (model.head.link_index >= 0) {
    const int h = model.head.link_index;
    out.head_height = (frames.origin[h] + rotate(frames.angle[h], model.head.point)).y();
  }
  if (!model.end_effectors.empty()) {
    // Root-relative frames keep the offsets exactly invariant to root translation.
    Vec local_q = q;
    local_q[0] = 0.0;
    local_q[1] = 0.0;
    const Frames local = compute_frames(model, local_q);
    for (const BodyPoint& ee : model.end_effectors) {
      const int l = ee.link_index;
      out.end_effectors.push_back(local.origin[l] + rotate(local.angle[l], ee.point));
    }
  }
  return out;
}

Vec2 com_velocity(const CharacterModel& model, const Vec& q, const Vec& qdot) {
  check_dimensions(model, q, "q");
  check_dimensions(model, qdot, "qdot");
  // Velocities do not depend on the root position; dropping it keeps the
  // result exactly translation invariant.
  Vec local_q = q;
  local_q[0] = 0.0;
  local_q[1] = 0.0;
  const Frames frames = compute_frames(model, local_q);
  Mat jac(2, model.num_dofs());
  Vec2 momentum = Vec2::Zero();
  double mass = 0.0;
  for (size_t i = 0; i < model.links.size(); ++i) {
    const Vec2 com = frames.origin[i] + rotate(frames.angle[i], model.links[i].com());
    point_jacobian(model, frames, static_cast<int>(i), com, jac);
    momentum += model.links[i].mass * (jac * qdot);
    mass += model.links[i].mass;
  }
  return momentum / mass;
}

Vec2 point_position(const CharacterModel& model, const Vec& q, int link, const Vec2& local) {
  const Frames frames = compute_frames(model, q);
  return frames.origin[link] + rotate(frames.angle[link], local);
}

double torso_up_z(const CharacterModel& model, const Vec& q) {
  const Frames frames = compute_frames(model, q);
  return std::cos(frames.angle[model.torso_index]);
}

Mat mass_matrix(const CharacterModel& model, const Vec& q) {
  check_dimensions(model, q, "q");
  Mat mass;
  rigid_body_terms(model, compute_frames(model, q), nullptr, 0.0, &mass, nullptr);
  return mass;
}

Vec bias_forces(const CharacterModel& model, const Vec& q, const Vec& qdot, double gravity) {
  check_dimensions(model, q, "q");
  check_dimensions(model, qdot, "qdot");
  Vec bias;
  rigid_body_terms(model, compute_frames(model, q), &qdot, gravity, nullptr, &bias);
  return bias;
}

std::vector<ContactPointForce> contact_point_forces(const CharacterModel& model, const Vec& q,
                                                    const Vec& qdot, const SimConfig& config) {
  check_dimensions(model, q, "q");
  check_dimensions(model, qdot, "qdot");
  const Frames frames = compute_frames(model, q);
  std::vector<ContactPointForce> out;
  Mat jac(2, model.num_dofs());
  for (size_t i = 0; i < model.links.size(); ++i) {
    for (const Vec2& local : model.links[i].contact_points) {
      const Vec2 p = frames.origin[i] + rotate(frames.angle[i], local);
      if (p.y() >= 0.0) continue;
      point_jacobian(model, frames, static_cast<int>(i), p, jac);
      const Vec2 vel = jac * qdot;
      ContactPointForce f;
      f.link = static_cast<int>(i);
      f.position = p;
      f.normal = config.contact_stiffness * (-p.y()) + config.contact_damping * std::max(0.0, -vel.y());
      const double cone = config.friction_coefficient * f.normal;
      f.tangential = std::clamp(-config.friction_damping * vel.x(), -cone, cone);
      out.push_back(f);
    }
  }
  return out;
}

Vec contact_forces(const CharacterModel& model, const Vec& q, const Vec& qdot,
                   const SimConfig& config) {
  const Frames frames = compute_frames(model, q);
  Vec out = Vec::Zero(model.num_dofs());
  Mat jac(2, model.num_dofs());
  for (const ContactPointForce& f : contact_point_forces(model, q, qdot, config)) {
    point_jacobian(model, frames, f.link, f.position, jac);
    out.noalias() += jac.transpose() * Vec2(f.tangential, f.normal);
  }
  return out;
}

Vec pd_torque(const Vec& kp, const Vec& kd, const Vec& q_target, const Vec& q, const Vec& qdot,
              const Vec& limits) {
  const auto n = kp.size();
  if (kd.size() != n || q_target.size() != n || q.size() != n || qdot.size() != n ||
      limits.size() != n) {
    throw ConfigError("PD vectors must share the joint dimension", "pd_torque");
  }
  Vec tau = kp.cwiseProduct(q_target - q) - kd.cwiseProduct(qdot);
  return tau.cwiseMax(-limits).cwiseMin(limits);
}

SimState control_step(const CharacterModel& model, const SimState& state, const Vec& torques,
                      const SimConfig& config) {
  if (torques.size() != model.num_actuated()) {
    throw ConfigError("torque vector does not match actuated joints", "torques");
  }
  const Vec tau = generalized(model, torques);
  return integrate(model, state, config, [&](const Vec&, const Vec&) -> const Vec& { return tau; });
}

SimState control_step_pd(const CharacterModel& model, const SimState& state,
                         const PdCommand& command, const SimConfig& config) {
  const int j = model.num_actuated();
  return integrate(model, state, config, [&](const Vec& q, const Vec& qdot) {
    return generalized(model, pd_torque(command.kp, command.kd, command.target, q.tail(j),
                                        qdot.tail(j), command.limits));
  });
}

SimState standing_state(const CharacterModel& model) {
  return standing_state(model, standing_pose(model));
}

SimState standing_state(const CharacterModel& model, const Vec& joint_angles) {
  SimState state;
  state.q = Vec::Zero(model.num_dofs());
  state.q.tail(model.num_actuated()) = joint_angles;
  state.qdot = Vec::Zero(model.num_dofs());
  const Frames frames = compute_frames(model, state.q);
  double lowest = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < model.links.size(); ++i) {
    for (const Vec2& local : model.links[i].contact_points) {
      lowest = std::min(lowest, (frames.origin[i] + rotate(frames.angle[i], local)).y());
    }
  }
  if (std::isfinite(lowest)) state.q[1] = -lowest;
  return state;
}

}  // namespace getup
