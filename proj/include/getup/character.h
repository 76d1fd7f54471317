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

#ifndef GETUP_CHARACTER_H_
#define GETUP_CHARACTER_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "getup/json_util.h"

namespace getup {

using Vec2 = Eigen::Vector2d;

// One rigid body of the planar character. Points are in the link frame, whose
// origin is the parent joint (the pelvis origin for the root).
struct RigidLink {
  std::string name;
  double mass = 0.0;     // kg
  double inertia = 0.0;  // kg m^2 about the link CoM
  double length = 0.0;   // m
  double com_offset = 0.0;
  Vec2 axis{0.0, -1.0};  // unit direction from joint toward the link end
  std::vector<Vec2> contact_points;

  Vec2 com() const { return com_offset * axis; }
};

// Revolute joint. A positive angle rotates the child counterclockwise in the
// (x, z) plane when axis_sign = +1 and clockwise when axis_sign = -1.
struct JointSpec {
  std::string name;
  std::string parent_link;
  std::string child_link;
  double torque_limit = 0.0;  // N m
  std::array<double, 2> angle_limits{0.0, 0.0};
  Vec2 anchor{0.0, 0.0};  // child origin in the parent frame
  double axis_sign = 1.0;
  double armature = 0.0;  // reflected rotor inertia added to the joint diagonal
  double standing_angle = 0.0;
  bool locked = false;
  double locked_angle = 0.0;

  int parent = -1;  // resolved link indices
  int child = -1;
};

// A named point rigidly attached to a link.
struct BodyPoint {
  std::string name;
  std::string link;
  Vec2 point{0.0, 0.0};
  int link_index = -1;
};

enum class VariantKind { kFull, kCastArmLeg, kMissingArm, kCustom };

struct LockedJoint {
  std::string name;
  std::optional<double> angle;  // straight (0) when absent
};

struct Variant {
  std::string name = "full";
  VariantKind kind = VariantKind::kFull;
  std::vector<LockedJoint> locked_joints;
  std::vector<std::string> removed_links;
};

struct CharacterModel {
  std::string name;
  std::vector<RigidLink> links;  // links[0] is the root; parents precede children
  std::vector<JointSpec> joints;
  double total_mass = 0.0;
  bool fixed_base = false;  // root coordinates held at their initial values
  std::string variant = "full";
  VariantKind variant_kind = VariantKind::kFull;

  BodyPoint head;
  std::vector<BodyPoint> end_effectors;
  std::string torso_link;
  std::array<std::string, 2> feet{};  // end-effector names (left, right)
  std::array<std::string, 2> hips{};  // joint names (left, right)

  // Derived by finalize_character().
  std::vector<int> link_parent_joint;      // -1 for the root
  std::vector<int> actuated;               // joint indices in action order
  std::vector<int> joint_dof;              // generalized index, -1 when locked
  std::vector<std::vector<int>> chain;     // per link: joints root -> link
  int torso_index = -1;
  std::array<int, 2> foot_effectors{-1, -1};
  std::array<int, 2> hip_actuators{-1, -1};  // index into actuated, -1 if absent

  int num_actuated() const { return static_cast<int>(actuated.size()); }
  int num_dofs() const { return 3 + num_actuated(); }
  int num_end_effectors() const { return static_cast<int>(end_effectors.size()); }

  // Index-aligned with the action vector.
  Eigen::VectorXd torque_limits() const;
  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;
  std::vector<std::string> actuated_names() const;

  int link_index(const std::string& name) const;  // -1 when absent
  int joint_index(const std::string& name) const;
  int actuated_index(const std::string& joint_name) const;
};

// Builds a model from a character document (schema_version 1).
CharacterModel load_character(const Json& document);
CharacterModel load_character_file(const std::filesystem::path& path);
Json character_to_json(const CharacterModel& model);

// Resolves names, orders links, validates the tree and derives dof indices.
void finalize_character(CharacterModel& model);

Variant load_variant(const Json& document);
Variant load_variant_file(const std::filesystem::path& path);
Variant builtin_variant(VariantKind kind);
Variant variant_from_name(const std::string& name);

CharacterModel apply_variant(const CharacterModel& model, const Variant& variant);

// Configured standing pose q-hat over the actuated joints.
Eigen::VectorXd standing_pose(const CharacterModel& model);

}  // namespace getup

#endif  // GETUP_CHARACTER_H_
