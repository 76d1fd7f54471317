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

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "getup/error.h"
#include "getup/rng.h"
#include "test_support.h"

namespace getup {
namespace {

using testing::humanoid;
using testing::pendulum_json;

constexpr double kG = 9.81;

Vec random_q(const CharacterModel& m, Rng& rng, double z = 1.0) {
  Vec q(m.num_dofs());
  for (int i = 0; i < q.size(); ++i) q[i] = rng.uniform(-1.5, 1.5);
  q[1] = z;
  return q;
}

Vec random_vec(int n, Rng& rng, double scale = 2.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

// Kinetic energy from forward kinematics alone: link CoM velocities and
// angular rates come from central differences of poses along qdot.
double kinetic_energy(const CharacterModel& m, const Vec& q, const Vec& qdot) {
  const double eps = 1e-6;
  const Kinematics plus = forward_kinematics(m, q + eps * qdot);
  const Kinematics minus = forward_kinematics(m, q - eps * qdot);
  double t = 0.0;
  for (size_t i = 0; i < m.links.size(); ++i) {
    const Vec2 v = (plus.links[i].com - minus.links[i].com) / (2 * eps);
    const double w = (plus.links[i].angle - minus.links[i].angle) / (2 * eps);
    t += 0.5 * m.links[i].mass * v.squaredNorm() + 0.5 * m.links[i].inertia * w * w;
  }
  for (size_t k = 0; k < m.joints.size(); ++k) {
    const int dof = m.joint_dof[k];
    if (dof >= 0) t += 0.5 * m.joints[k].armature * qdot[dof] * qdot[dof];
  }
  return t;
}

double potential_energy(const CharacterModel& m, const Vec& q) {
  const Kinematics k = forward_kinematics(m, q);
  double v = 0.0;
  for (size_t i = 0; i < m.links.size(); ++i) v += m.links[i].mass * kG * k.links[i].com.y();
  return v;
}

// Mass matrix by polarization of the kinetic energy over basis velocities.
Mat oracle_mass_matrix(const CharacterModel& m, const Vec& q) {
  const int n = m.num_dofs();
  Mat out(n, n);
  const Mat eye = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 2.0 * kinetic_energy(m, q, eye.col(i));
    for (int j = 0; j < i; ++j) {
      const double tij = kinetic_energy(m, q, eye.col(i) + eye.col(j));
      out(i, j) = out(j, i) =
          tij - kinetic_energy(m, q, eye.col(i)) - kinetic_energy(m, q, eye.col(j));
    }
  }
  return out;
}

CharacterModel point_pendulum() {
  Json doc = pendulum_json(1, 1.0, 2.0);
  doc["links"][1]["inertia"] = 1e-14;
  doc["links"][1]["com_offset"] = 2.0;
  return load_character(doc);
}

TEST(SimTest, PointPendulumInertia) {
  const CharacterModel m = point_pendulum();
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    Vec q = Vec::Zero(4);
    q[3] = rng.uniform(-3, 3);
    EXPECT_NEAR(mass_matrix(m, q)(3, 3), 4.0, 1e-12);
  }
}

TEST(SimTest, PendulumGravityLoad) {
  const CharacterModel m = point_pendulum();
  Vec q = Vec::Zero(4), qdot = Vec::Zero(4);
  EXPECT_NEAR(bias_forces(m, q, qdot)[3], 0.0, 1e-12);
  q[3] = M_PI / 2;
  EXPECT_NEAR(std::abs(bias_forces(m, q, qdot)[3]), 19.62, 1e-9);
}

TEST(SimTest, MassMatrixSymmetricPositiveDefinite) {
  Rng rng(2);
  for (const CharacterModel& m :
       {humanoid(), apply_variant(humanoid(), builtin_variant(VariantKind::kCastArmLeg)),
        apply_variant(humanoid(), builtin_variant(VariantKind::kMissingArm))}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat mass = mass_matrix(m, random_q(m, rng));
      ASSERT_LE((mass - mass.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      Eigen::LLT<Mat> llt(mass);
      ASSERT_EQ(llt.info(), Eigen::Success);
    }
  }
}

TEST(SimTest, MassMatrixMatchesLagrangianOracle) {
  Rng rng(3);
  for (const CharacterModel& m : {load_character(pendulum_json(2)), humanoid()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Vec q = random_q(m, rng);
      const Mat diff = mass_matrix(m, q) - oracle_mass_matrix(m, q);
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-6) << m.name;
    }
  }
}

// Euler-Lagrange: C = Mdot qdot - dT/dq + dV/dq.
TEST(SimTest, BiasForcesMatchLagrangianOracle) {
  Rng rng(4);
  for (const CharacterModel& m : {load_character(pendulum_json(2)), humanoid()}) {
    const int n = m.num_dofs();
    for (int trial = 0; trial < 5; ++trial) {
      const Vec q = random_q(m, rng);
      const Vec qdot = random_vec(n, rng);
      const double h = 1e-6;
      const Mat mdot = (mass_matrix(m, q + h * qdot) - mass_matrix(m, q - h * qdot)) / (2 * h);
      Vec expected = mdot * qdot;
      for (int i = 0; i < n; ++i) {
        Vec dq = Vec::Zero(n);
        dq[i] = h;
        const double tp = 0.5 * qdot.dot(mass_matrix(m, q + dq) * qdot);
        const double tm = 0.5 * qdot.dot(mass_matrix(m, q - dq) * qdot);
        expected[i] -= (tp - tm) / (2 * h);
        expected[i] += (potential_energy(m, q + dq) - potential_energy(m, q - dq)) / (2 * h);
      }
      const Vec c = bias_forces(m, q, qdot);
      EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 1e-5 * (1.0 + expected.cwiseAbs().maxCoeff()))
          << m.name << "\n" << c.transpose() << "\n" << expected.transpose();
    }
  }
}

TEST(SimTest, InverseDynamicsRoundTrip) {
  Rng rng(5);
  for (const CharacterModel& m : {humanoid(), load_character(pendulum_json(3)),
                                  apply_variant(humanoid(), builtin_variant(VariantKind::kMissingArm))}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vec q = random_q(m, rng);
      const Vec qdot = random_vec(m.num_dofs(), rng);
      const Vec qddot = random_vec(m.num_dofs(), rng, 5.0);
      const Mat mass = mass_matrix(m, q);
      const Vec c = bias_forces(m, q, qdot);
      const Vec tau = mass * qddot + c;
      const Vec recovered = mass.llt().solve(tau - c);
      ASSERT_LT((recovered - qddot).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(SimTest, FreeFallMatchesBallistics) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  s.q[1] += 3.0;
  SimConfig config;
  config.substeps_per_control = 80;  // 0.1 s
  const double z0 = forward_kinematics(m, s.q).com.y();
  const SimState next = control_step(m, s, Vec::Zero(m.num_actuated()), config);
  const double drop = z0 - forward_kinematics(m, next.q).com.y();
  EXPECT_NEAR(drop, 0.5 * 9.81 * 0.01, 1e-4);
  EXPECT_NEAR(next.time, 0.1, 1e-12);
}

TEST(SimTest, DoublePendulumEnergyDrift) {
  const CharacterModel m = load_character(pendulum_json(2));
  SimState s;
  s.q = Vec::Zero(5);
  s.qdot = Vec::Zero(5);
  s.q[3] = 1.2;
  s.q[4] = -0.7;
  SimConfig config;
  config.substeps_per_control = 1;
  // Datum at the hanging rest configuration so the energy is positive.
  const double rest = potential_energy(m, Vec::Zero(5));
  auto energy = [&](const SimState& st) {
    return 0.5 * st.qdot.dot(mass_matrix(m, st.q) * st.qdot) + potential_energy(m, st.q) - rest;
  };
  const double e0 = energy(s);
  ASSERT_GT(e0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 800; ++k) {
    s = control_step(m, s, Vec::Zero(2), config);
    worst = std::max(worst, std::abs(energy(s) - e0));
  }
  EXPECT_LT(worst / e0, 0.005);
  EXPECT_NEAR(s.time, 1.0, 1e-9);
}

TEST(SimTest, StaticsWithoutGravity) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  s.q[1] += 1.0;
  SimConfig config;
  config.gravity = 0.0;
  const SimState next = control_step(m, s, Vec::Zero(m.num_actuated()), config);
  EXPECT_EQ(next.q, s.q);
  EXPECT_EQ(next.qdot, s.qdot);
  EXPECT_NEAR(next.time, config.control_period(), 1e-15);
}

TEST(SimTest, DeterministicBitwise) {
  const CharacterModel m = humanoid();
  Rng rng(6);
  SimState s = standing_state(m);
  s.qdot = random_vec(m.num_dofs(), rng, 1.0);
  const Vec tau = random_vec(m.num_actuated(), rng, 10.0);
  const SimState a = control_step(m, s, tau, SimConfig{});
  const SimState b = control_step(m, s, tau, SimConfig{});
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.qdot, b.qdot);
}

TEST(SimTest, NonFiniteStateDiverges) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  s.qdot[4] = std::nan("");
  EXPECT_THROW(control_step(m, s, Vec::Zero(m.num_actuated()), SimConfig{}), DivergenceError);
}

TEST(SimTest, DimensionMismatchIsConfigError) {
  const CharacterModel m = humanoid();
  EXPECT_THROW(mass_matrix(m, Vec::Zero(5)), ConfigError);
  EXPECT_THROW(bias_forces(m, Vec::Zero(14), Vec::Zero(3)), ConfigError);
  EXPECT_THROW(forward_kinematics(m, Vec::Zero(2)), ConfigError);
  EXPECT_THROW(control_step(m, standing_state(m), Vec::Zero(3), SimConfig{}), ConfigError);
}

TEST(SimTest, PdTorqueLaw) {
  auto one = [](double v) { return Vec::Constant(1, v); };
  EXPECT_NEAR(pd_torque(one(120), one(12), one(0.1), one(0), one(0), one(120))[0], 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(pd_torque(one(120), one(12), one(2.0), one(0), one(0), one(120))[0], 120.0);
  EXPECT_DOUBLE_EQ(pd_torque(one(120), one(12), one(-2.0), one(0), one(0), one(120))[0], -120.0);
  EXPECT_DOUBLE_EQ(pd_torque(one(80), one(8), one(0.3), one(0.3), one(0), one(80))[0], 0.0);
  EXPECT_NEAR(pd_torque(one(10), one(1), one(0), one(0), one(2), one(80))[0], -2.0, 1e-12);
  EXPECT_THROW(pd_torque(one(1), Vec::Zero(2), one(0), one(0), one(0), one(1)), ConfigError);
}

TEST(SimTest, InvalidConfigRejected) {
  SimConfig c;
  c.dt_sim = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SimConfig{};
  c.substeps_per_control = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NEAR(SimConfig{}.control_period(), 1.0 / 40.0, 1e-15);
}

TEST(SimTest, StandingHeadHeightFromGeometry) {
  const CharacterModel m = humanoid();
  const SimState s = standing_state(m);
  // Sole at thigh + shin + foot sole depth below the hip; head 0.12 + 0.49 above it.
  const double root = 0.3675 + 0.369 + 0.0585;
  EXPECT_NEAR(s.q[1], root, 1e-9);
  EXPECT_NEAR(forward_kinematics(m, s.q).head_height, root + 0.12 + 0.49, 1e-9);
  EXPECT_NEAR(torso_up_z(m, s.q), 1.0, 1e-12);
}

TEST(SimTest, RootTranslationEquivariance) {
  const CharacterModel m = humanoid();
  Rng rng(7);
  const Vec q = random_q(m, rng);
  Vec shifted = q;
  shifted[0] += 0.37;
  const Kinematics a = forward_kinematics(m, q), b = forward_kinematics(m, shifted);
  EXPECT_NEAR(b.com.x() - a.com.x(), 0.37, 1e-12);
  EXPECT_NEAR(b.com.y(), a.com.y(), 1e-12);
  for (int e = 0; e < m.num_end_effectors(); ++e) {
    EXPECT_LT((a.end_effectors[e] - b.end_effectors[e]).norm(), 1e-12);
  }
}

TEST(SimTest, RootRotationByPiReflectsOffsets) {
  const CharacterModel m = humanoid();
  Vec q = standing_state(m).q;
  const Kinematics up = forward_kinematics(m, q);
  q[2] += M_PI;
  const Kinematics down = forward_kinematics(m, q);
  EXPECT_NEAR(down.head_height - q[1], -(up.head_height - q[1]), 1e-12);
  for (int e = 0; e < m.num_end_effectors(); ++e) {
    EXPECT_LT((down.end_effectors[e] + up.end_effectors[e]).norm(), 1e-12);
  }
}

TEST(SimTest, ContactForcesAboveGroundAreZero) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  s.q[1] += 0.01;
  EXPECT_EQ(contact_forces(m, s.q, s.qdot, SimConfig{}).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SimTest, StaticPenetrationIsSpring) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  s.q[1] -= 0.002;
  SimConfig config;
  const auto forces = contact_point_forces(m, s.q, s.qdot, config);
  ASSERT_FALSE(forces.empty());
  for (const ContactPointForce& f : forces) {
    EXPECT_NEAR(f.normal, config.contact_stiffness * -f.position.y(), 1e-9);
    EXPECT_EQ(f.tangential, 0.0);
  }
}

TEST(SimTest, SlidingPointSaturatesFriction) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  s.q[1] -= 0.002;
  s.qdot[0] = 3.0;
  SimConfig config;
  for (const ContactPointForce& f : contact_point_forces(m, s.q, s.qdot, config)) {
    EXPECT_NEAR(f.tangential, -config.friction_coefficient * f.normal, 1e-10);
  }
}

TEST(SimTest, ContactForceBoundsProperty) {
  const CharacterModel m = humanoid();
  Rng rng(8);
  SimConfig config;
  for (int trial = 0; trial < 500; ++trial) {
    const Vec q = random_q(m, rng, rng.uniform(0.0, 0.6));
    const Vec qdot = random_vec(m.num_dofs(), rng, 3.0);
    for (const ContactPointForce& f : contact_point_forces(m, q, qdot, config)) {
      ASSERT_GE(f.normal, 0.0);
      ASSERT_LE(std::abs(f.tangential), config.friction_coefficient * f.normal + 1e-12);
    }
  }
}

TEST(SimTest, FixedBaseHoldsRoot) {
  const CharacterModel m = load_character(pendulum_json(2));
  SimState s;
  s.q = Vec::Zero(5);
  s.q[3] = 0.5;
  s.qdot = Vec::Zero(5);
  const SimState next = control_step(m, s, Vec::Zero(2), SimConfig{});
  EXPECT_EQ(next.q.head(3), s.q.head(3));
  EXPECT_NE(next.q[3], s.q[3]);
}

TEST(SimTest, StandingOnGroundSettles) {
  const CharacterModel m = humanoid();
  SimState s = standing_state(m);
  PdCommand pd{m.torque_limits(), m.torque_limits() / 10.0, standing_pose(m), m.torque_limits()};
  for (int k = 0; k < 40; ++k) s = control_step_pd(m, s, pd, SimConfig{});
  // Held upright for one second, the feet carry the weight without sinking far.
  EXPECT_GT(s.q[1], 0.75);
  EXPECT_TRUE(s.q.allFinite());
}

}  // namespace
}  // namespace getup
