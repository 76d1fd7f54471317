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

#ifndef GETUP_SIM_H_
#define GETUP_SIM_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "getup/character.h"

namespace getup {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Generalized coordinates: root x, root z, root angle, then one angle per
// actuated joint. Velocities share the layout.
struct SimState {
  Vec q;
  Vec qdot;
  double time = 0.0;
};

struct SimConfig {
  double dt_sim = 1.0 / 800.0;
  int substeps_per_control = 20;
  double gravity = 9.81;
  double contact_stiffness = 1e4;  // N/m
  double contact_damping = 200.0;  // N s/m
  double friction_coefficient = 1.0;
  // Viscous slope of the regularized Coulomb law below the friction cone.
  double friction_damping = 2000.0;  // N s/m
  // Joint range limits act as one-sided springs scaled by the joint's torque limit.
  double limit_stiffness_per_torque = 20.0;  // 1/rad
  double limit_damping_ratio = 0.05;         // s

  double control_period() const { return dt_sim * substeps_per_control; }
  void validate() const;
};

struct LinkPose {
  Vec2 origin;  // world position of the link frame
  double angle = 0.0;
  Vec2 com;
};

struct Kinematics {
  std::vector<LinkPose> links;
  double head_height = 0.0;
  Vec2 com{0.0, 0.0};
  // End-effector offsets from the root in the heading frame (axes aligned
  // with the world; the planar character has a single heading).
  std::vector<Vec2> end_effectors;
};

Kinematics forward_kinematics(const CharacterModel& model, const Vec& q);
Vec2 com_velocity(const CharacterModel& model, const Vec& q, const Vec& qdot);
Vec2 point_position(const CharacterModel& model, const Vec& q, int link, const Vec2& local);
// Vertical component of the torso's up direction (1 when upright).
double torso_up_z(const CharacterModel& model, const Vec& q);

Mat mass_matrix(const CharacterModel& model, const Vec& q);
// C(q, qdot): Coriolis, centrifugal and gravity terms, M qddot + C = tau.
Vec bias_forces(const CharacterModel& model, const Vec& q, const Vec& qdot, double gravity = 9.81);
// Penalty ground contact mapped to generalized coordinates.
Vec contact_forces(const CharacterModel& model, const Vec& q, const Vec& qdot,
                   const SimConfig& config);

struct ContactPointForce {
  int link = -1;
  Vec2 position;
  double normal = 0.0;
  double tangential = 0.0;
};
std::vector<ContactPointForce> contact_point_forces(const CharacterModel& model, const Vec& q,
                                                    const Vec& qdot, const SimConfig& config);

Vec pd_torque(const Vec& kp, const Vec& kd, const Vec& q_target, const Vec& q, const Vec& qdot,
              const Vec& limits);

// Joint torques are applied unchanged for every substep.
SimState control_step(const CharacterModel& model, const SimState& state, const Vec& torques,
                      const SimConfig& config);

// PD actuation re-evaluated every substep against a fixed target.
struct PdCommand {
  Vec kp;
  Vec kd;
  Vec target;
  Vec limits;
};
SimState control_step_pd(const CharacterModel& model, const SimState& state,
                         const PdCommand& command, const SimConfig& config);

// Root placed so the lowest contact point touches the ground.
SimState standing_state(const CharacterModel& model);
SimState standing_state(const CharacterModel& model, const Vec& joint_angles);

void check_dimensions(const CharacterModel& model, const Vec& q, const char* what);

}  // namespace getup

#endif  // GETUP_SIM_H_
