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

#include "getup/character.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "getup/error.h"

namespace getup {
namespace {

constexpr int kCharacterSchemaVersion = 1;
constexpr int kVariantSchemaVersion = 1;

Vec2 read_vec2(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    throw ConfigError("expected [x, z]", path);
  }
  return Vec2(value[0].get<double>(), value[1].get<double>());
}

Json vec2_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

void check_schema(const Json& document, int expected, const std::string& what) {
  if (!document.is_object()) throw ConfigError("expected an object", what);
  const int found = static_cast<int>(require_number(document, "schema_version", what));
  if (found != expected) throw SchemaVersionError(found, expected);
}

BodyPoint read_point(const Json& value, const std::string& path) {
  BodyPoint point;
  read_optional(value, "name", path, point.name);
  point.link = require_string(value, "link", path);
  point.point = read_vec2(require(value, "point", path), path + ".point");
  return point;
}

Json point_json(const BodyPoint& p) {
  Json j = {{"link", p.link}, {"point", vec2_json(p.point)}};
  if (!p.name.empty()) j["name"] = p.name;
  return j;
}

}  // namespace

Eigen::VectorXd CharacterModel::torque_limits() const {
  Eigen::VectorXd out(num_actuated());
  for (int k = 0; k < num_actuated(); ++k) out[k] = joints[actuated[k]].torque_limit;
  return out;
}

Eigen::VectorXd CharacterModel::lower_limits() const {
  Eigen::VectorXd out(num_actuated());
  for (int k = 0; k < num_actuated(); ++k) out[k] = joints[actuated[k]].angle_limits[0];
  return out;
}

Eigen::VectorXd CharacterModel::upper_limits() const {
  Eigen::VectorXd out(num_actuated());
  for (int k = 0; k < num_actuated(); ++k) out[k] = joints[actuated[k]].angle_limits[1];
  return out;
}

std::vector<std::string> CharacterModel::actuated_names() const {
  std::vector<std::string> names;
  for (int j : actuated) names.push_back(joints[j].name);
  return names;
}

int CharacterModel::link_index(const std::string& name) const {
  for (size_t i = 0; i < links.size(); ++i) {
    if (links[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int CharacterModel::joint_index(const std::string& name) const {
  for (size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int CharacterModel::actuated_index(const std::string& joint_name) const {
  const int j = joint_index(joint_name);
  if (j < 0) return -1;
  for (int k = 0; k < num_actuated(); ++k) {
    if (actuated[k] == j) return k;
  }
  return -1;
}

void finalize_character(CharacterModel& model) {
  if (model.links.empty()) throw ConfigError("character has no links", "links");

  std::map<std::string, int> link_ids;
  for (size_t i = 0; i < model.links.size(); ++i) {
    const RigidLink& link = model.links[i];
    const std::string path = "links[" + std::to_string(i) + "]";
    if (link.name.empty()) throw ConfigError("empty name", path + ".name");
    if (!link_ids.emplace(link.name, static_cast<int>(i)).second) {
      throw ConfigError("duplicate link name '" + link.name + "'", path + ".name");
    }
    if (!(link.mass > 0.0)) throw ConfigError("mass must be positive", path + ".mass");
    if (!(link.inertia > 0.0)) throw ConfigError("inertia must be positive", path + ".inertia");
    if (!(link.length >= 0.0)) throw ConfigError("length must be non-negative", path + ".length");
  }

  std::set<std::string> joint_names;
  std::vector<int> parent_joint(model.links.size(), -1);
  for (size_t k = 0; k < model.joints.size(); ++k) {
    JointSpec& joint = model.joints[k];
    const std::string path = "joints[" + std::to_string(k) + "]";
    if (!joint_names.insert(joint.name).second) {
      throw ConfigError("duplicate joint name '" + joint.name + "'", path + ".name");
    }
    auto parent = link_ids.find(joint.parent_link);
    if (parent == link_ids.end()) {
      throw ConfigError("joint '" + joint.name + "' references missing parent link '" +
                            joint.parent_link + "'",
                        path + ".parent");
    }
    auto child = link_ids.find(joint.child_link);
    if (child == link_ids.end()) {
      throw ConfigError("joint '" + joint.name + "' references missing child link '" +
                            joint.child_link + "'",
                        path + ".child");
    }
    if (parent_joint[child->second] >= 0) {
      throw ConfigError("link '" + joint.child_link + "' has two parent joints", path + ".child");
    }
    parent_joint[child->second] = static_cast<int>(k);
    if (!(joint.torque_limit > 0.0)) {
      throw ConfigError("torque limit must be positive", path + ".torque_limit");
    }
    if (!(joint.angle_limits[0] < joint.angle_limits[1])) {
      throw ConfigError("angle limits must satisfy lower < upper", path + ".angle_limits");
    }
    if (joint.axis_sign != 1.0 && joint.axis_sign != -1.0) {
      throw ConfigError("axis_sign must be +1 or -1", path + ".axis_sign");
    }
    if (joint.armature < 0.0) throw ConfigError("armature must be >= 0", path + ".armature");
  }

  int root = -1;
  for (size_t i = 0; i < model.links.size(); ++i) {
    if (parent_joint[i] < 0) {
      if (root >= 0) {
        throw ConfigError("links '" + model.links[root].name + "' and '" + model.links[i].name +
                              "' both lack a parent joint",
                          "joints");
      }
      root = static_cast<int>(i);
    }
  }
  if (root < 0) throw ConfigError("cyclic kinematics: no root link", "joints");

  // Breadth-first order from the root; unreached links sit on a cycle.
  std::vector<std::vector<int>> children(model.links.size());
  for (size_t k = 0; k < model.joints.size(); ++k) {
    children[link_ids[model.joints[k].parent_link]].push_back(static_cast<int>(k));
  }
  std::vector<int> order;
  std::queue<int> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    const int link = frontier.front();
    frontier.pop();
    order.push_back(link);
    for (int k : children[link]) frontier.push(link_ids[model.joints[k].child_link]);
  }
  if (order.size() != model.links.size()) {
    for (size_t i = 0; i < model.links.size(); ++i) {
      if (std::find(order.begin(), order.end(), static_cast<int>(i)) == order.end()) {
        throw ConfigError("cyclic kinematics through link '" + model.links[i].name + "'", "joints");
      }
    }
  }

  std::vector<RigidLink> ordered;
  for (int i : order) ordered.push_back(model.links[i]);
  model.links = std::move(ordered);

  // Joints sorted by child link order keeps dof order stable and tree-consistent.
  std::vector<int> new_index(order.size());
  for (size_t i = 0; i < order.size(); ++i) new_index[order[i]] = static_cast<int>(i);
  std::vector<JointSpec> joints = model.joints;
  std::stable_sort(joints.begin(), joints.end(), [&](const JointSpec& a, const JointSpec& b) {
    return new_index[link_ids[a.child_link]] < new_index[link_ids[b.child_link]];
  });
  model.joints = std::move(joints);

  model.link_parent_joint.assign(model.links.size(), -1);
  model.joint_dof.assign(model.joints.size(), -1);
  model.actuated.clear();
  for (size_t k = 0; k < model.joints.size(); ++k) {
    JointSpec& joint = model.joints[k];
    joint.parent = model.link_index(joint.parent_link);
    joint.child = model.link_index(joint.child_link);
    model.link_parent_joint[joint.child] = static_cast<int>(k);
    if (!joint.locked) {
      model.joint_dof[k] = 3 + static_cast<int>(model.actuated.size());
      model.actuated.push_back(static_cast<int>(k));
    }
  }
  model.chain.assign(model.links.size(), {});
  for (size_t i = 1; i < model.links.size(); ++i) {
    const int k = model.link_parent_joint[i];
    model.chain[i] = model.chain[model.joints[k].parent];
    model.chain[i].push_back(k);
  }

  double mass = 0.0;
  for (const RigidLink& link : model.links) mass += link.mass;
  if (std::abs(mass - model.total_mass) > 1e-9) {
    throw ConfigError("link masses sum to " + std::to_string(mass) + " but total_mass is " +
                          std::to_string(model.total_mass),
                      "total_mass");
  }

  auto resolve = [&](BodyPoint& point, const std::string& path) {
    point.link_index = model.link_index(point.link);
    if (point.link_index < 0) throw ConfigError("missing link '" + point.link + "'", path);
  };
  if (!model.head.link.empty()) resolve(model.head, "head.link");
  for (size_t e = 0; e < model.end_effectors.size(); ++e) {
    resolve(model.end_effectors[e], "end_effectors[" + std::to_string(e) + "].link");
  }
  model.torso_index = model.torso_link.empty() ? 0 : model.link_index(model.torso_link);
  if (model.torso_index < 0) throw ConfigError("missing link '" + model.torso_link + "'", "torso_link");

  for (int side = 0; side < 2; ++side) {
    model.foot_effectors[side] = -1;
    for (size_t e = 0; e < model.end_effectors.size(); ++e) {
      if (!model.feet[side].empty() && model.end_effectors[e].name == model.feet[side]) {
        model.foot_effectors[side] = static_cast<int>(e);
      }
    }
    if (!model.feet[side].empty() && model.foot_effectors[side] < 0) {
      throw ConfigError("unknown end effector '" + model.feet[side] + "'",
                        "feet[" + std::to_string(side) + "]");
    }
    model.hip_actuators[side] = model.hips[side].empty() ? -1 : model.actuated_index(model.hips[side]);
  }
}

CharacterModel load_character(const Json& document) {
  check_schema(document, kCharacterSchemaVersion, "character");
  CharacterModel model;
  model.name = require_string(document, "name", "character");
  model.total_mass = require_number(document, "total_mass", "character");
  read_optional(document, "fixed_base", "character", model.fixed_base);

  const Json& links = require(document, "links", "character");
  if (!links.is_array()) throw ConfigError("expected an array", "links");
  for (size_t i = 0; i < links.size(); ++i) {
    const std::string path = "links[" + std::to_string(i) + "]";
    const Json& entry = links[i];
    RigidLink link;
    link.name = require_string(entry, "name", path);
    link.mass = require_number(entry, "mass", path);
    link.inertia = require_number(entry, "inertia", path);
    read_optional(entry, "length", path, link.length);
    read_optional(entry, "com_offset", path, link.com_offset);
    if (entry.contains("axis")) link.axis = read_vec2(entry["axis"], path + ".axis").normalized();
    if (entry.contains("contact_points")) {
      const Json& points = entry["contact_points"];
      if (!points.is_array()) throw ConfigError("expected an array", path + ".contact_points");
      for (size_t c = 0; c < points.size(); ++c) {
        link.contact_points.push_back(
            read_vec2(points[c], path + ".contact_points[" + std::to_string(c) + "]"));
      }
    }
    model.links.push_back(std::move(link));
  }

  const Json& joints = require(document, "joints", "character");
  if (!joints.is_array()) throw ConfigError("expected an array", "joints");
  for (size_t k = 0; k < joints.size(); ++k) {
    const std::string path = "joints[" + std::to_string(k) + "]";
    const Json& entry = joints[k];
    JointSpec joint;
    joint.name = require_string(entry, "name", path);
    joint.parent_link = require_string(entry, "parent", path);
    joint.child_link = require_string(entry, "child", path);
    joint.torque_limit = require_number(entry, "torque_limit", path);
    const Json& limits = require(entry, "angle_limits", path);
    const Vec2 lim = read_vec2(limits, path + ".angle_limits");
    joint.angle_limits = {lim.x(), lim.y()};
    if (entry.contains("anchor")) joint.anchor = read_vec2(entry["anchor"], path + ".anchor");
    read_optional(entry, "axis_sign", path, joint.axis_sign);
    read_optional(entry, "armature", path, joint.armature);
    model.joints.push_back(std::move(joint));
  }

  if (document.contains("standing_pose")) {
    const Json& pose = document["standing_pose"];
    if (!pose.is_object()) throw ConfigError("expected an object", "standing_pose");
    for (auto it = pose.begin(); it != pose.end(); ++it) {
      bool found = false;
      for (JointSpec& joint : model.joints) {
        if (joint.name == it.key()) {
          if (!it.value().is_number()) throw ConfigError("expected a number", "standing_pose." + it.key());
          joint.standing_angle = it.value().get<double>();
          found = true;
        }
      }
      if (!found) throw ConfigError("unknown joint", "standing_pose." + it.key());
    }
  }

  if (document.contains("head")) model.head = read_point(document["head"], "head");
  if (document.contains("end_effectors")) {
    const Json& effectors = document["end_effectors"];
    for (size_t e = 0; e < effectors.size(); ++e) {
      model.end_effectors.push_back(read_point(effectors[e], "end_effectors[" + std::to_string(e) + "]"));
    }
  }
  read_optional(document, "torso_link", "character", model.torso_link);
  if (document.contains("feet")) {
    std::vector<std::string> feet;
    read_optional(document, "feet", "character", feet);
    if (feet.size() != 2) throw ConfigError("expected two names", "feet");
    model.feet = {feet[0], feet[1]};
  }
  if (document.contains("hips")) {
    std::vector<std::string> hips;
    read_optional(document, "hips", "character", hips);
    if (hips.size() != 2) throw ConfigError("expected two names", "hips");
    model.hips = {hips[0], hips[1]};
  }

  finalize_character(model);
  return model;
}

CharacterModel load_character_file(const std::filesystem::path& path) {
  return load_character(read_json_file(path));
}

Json character_to_json(const CharacterModel& model) {
  Json doc;
  doc["schema_version"] = kCharacterSchemaVersion;
  doc["name"] = model.name;
  doc["total_mass"] = model.total_mass;
  doc["fixed_base"] = model.fixed_base;
  doc["links"] = Json::array();
  for (const RigidLink& link : model.links) {
    Json entry = {{"name", link.name},         {"mass", link.mass},
                  {"inertia", link.inertia},   {"length", link.length},
                  {"com_offset", link.com_offset}, {"axis", vec2_json(link.axis)}};
    entry["contact_points"] = Json::array();
    for (const Vec2& c : link.contact_points) entry["contact_points"].push_back(vec2_json(c));
    doc["links"].push_back(entry);
  }
  doc["joints"] = Json::array();
  Json pose = Json::object();
  for (const JointSpec& joint : model.joints) {
    doc["joints"].push_back({{"name", joint.name},
                             {"parent", joint.parent_link},
                             {"child", joint.child_link},
                             {"torque_limit", joint.torque_limit},
                             {"angle_limits", {joint.angle_limits[0], joint.angle_limits[1]}},
                             {"anchor", vec2_json(joint.anchor)},
                             {"axis_sign", joint.axis_sign},
                             {"armature", joint.armature}});
    pose[joint.name] = joint.standing_angle;
  }
  doc["standing_pose"] = pose;
  if (!model.head.link.empty()) doc["head"] = point_json(model.head);
  doc["end_effectors"] = Json::array();
  for (const BodyPoint& p : model.end_effectors) doc["end_effectors"].push_back(point_json(p));
  doc["torso_link"] = model.torso_link;
  doc["feet"] = {model.feet[0], model.feet[1]};
  doc["hips"] = {model.hips[0], model.hips[1]};
  return doc;
}

Variant load_variant(const Json& document) {
  check_schema(document, kVariantSchemaVersion, "variant");
  Variant variant;
  variant.name = require_string(document, "name", "variant");
  variant.kind = VariantKind::kCustom;
  if (variant.name == "full") variant.kind = VariantKind::kFull;
  if (variant.name == "cast") variant.kind = VariantKind::kCastArmLeg;
  if (variant.name == "missing_arm") variant.kind = VariantKind::kMissingArm;
  if (document.contains("locked_joints")) {
    const Json& locked = document["locked_joints"];
    for (size_t k = 0; k < locked.size(); ++k) {
      const std::string path = "locked_joints[" + std::to_string(k) + "]";
      LockedJoint lj;
      if (locked[k].is_string()) {
        lj.name = locked[k].get<std::string>();
      } else {
        lj.name = require_string(locked[k], "name", path);
        if (locked[k].contains("angle")) lj.angle = require_number(locked[k], "angle", path);
      }
      variant.locked_joints.push_back(lj);
    }
  }
  read_optional(document, "removed_links", "variant", variant.removed_links);
  return variant;
}

Variant load_variant_file(const std::filesystem::path& path) {
  return load_variant(read_json_file(path));
}

Variant builtin_variant(VariantKind kind) {
  Variant v;
  v.kind = kind;
  switch (kind) {
    case VariantKind::kFull:
      v.name = "full";
      break;
    case VariantKind::kCastArmLeg:
      v.name = "cast";
      v.locked_joints = {{"elbow_l", std::nullopt}, {"knee_r", std::nullopt}};
      break;
    case VariantKind::kMissingArm:
      v.name = "missing_arm";
      v.removed_links = {"upper_arm_l", "forearm_l"};
      break;
    case VariantKind::kCustom:
      throw ContractError("custom variants come from a document");
  }
  return v;
}

Variant variant_from_name(const std::string& name) {
  if (name == "full") return builtin_variant(VariantKind::kFull);
  if (name == "cast") return builtin_variant(VariantKind::kCastArmLeg);
  if (name == "missing_arm") return builtin_variant(VariantKind::kMissingArm);
  return load_variant_file(name);
}

CharacterModel apply_variant(const CharacterModel& model, const Variant& variant) {
  if (model.variant == variant.name) return model;
  if (variant.locked_joints.empty() && variant.removed_links.empty()) return model;
  if (model.variant != "full") {
    throw ConfigError("variant '" + variant.name + "' applied on top of '" + model.variant + "'",
                      "variant");
  }
  CharacterModel out = model;

  std::set<std::string> removed(variant.removed_links.begin(), variant.removed_links.end());
  for (const std::string& name : removed) {
    const int link = model.link_index(name);
    if (link < 0) throw ConfigError("unknown link '" + name + "'", "variant.removed_links");
    if (link == 0) throw ConfigError("cannot remove the root link", "variant.removed_links");
  }
  // Every child of a removed link must be removed as well.
  for (const JointSpec& joint : model.joints) {
    if (removed.count(joint.parent_link) && !removed.count(joint.child_link)) {
      throw ConfigError("removing '" + joint.parent_link + "' disconnects '" + joint.child_link + "'",
                        "variant.removed_links");
    }
  }
  std::erase_if(out.links, [&](const RigidLink& l) { return removed.count(l.name) > 0; });
  std::erase_if(out.joints, [&](const JointSpec& j) { return removed.count(j.child_link) > 0; });
  std::erase_if(out.end_effectors, [&](const BodyPoint& p) { return removed.count(p.link) > 0; });
  if (removed.count(out.head.link)) throw ConfigError("cannot remove the head link", "variant.removed_links");
  out.total_mass = 0.0;
  for (const RigidLink& link : out.links) out.total_mass += link.mass;

  for (const LockedJoint& lj : variant.locked_joints) {
    const int k = out.joint_index(lj.name);
    if (k < 0) throw ConfigError("unknown joint '" + lj.name + "'", "variant.locked_joints");
    out.joints[k].locked = true;
    out.joints[k].locked_angle = lj.angle.value_or(0.0);
  }
  out.variant = variant.name;
  out.variant_kind = variant.kind;
  finalize_character(out);
  return out;
}

Eigen::VectorXd standing_pose(const CharacterModel& model) {
  Eigen::VectorXd pose(model.num_actuated());
  for (int k = 0; k < model.num_actuated(); ++k) pose[k] = model.joints[model.actuated[k]].standing_angle;
  return pose;
}

}  // namespace getup
