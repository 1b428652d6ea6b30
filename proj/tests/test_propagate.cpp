#include <doctest.h>

#include <tr2l/error.hpp>
#include <tr2l/propagate.hpp>
#include <tr2l/protocol.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace tr2l;

namespace {

// Fixed-step RK4 on i dpsi/dt = H psi, as an independent integrator.
Vector2c rk4(const Drive &d, Vector2c psi, std::size_t n) {
  const double dt = d.duration() / static_cast<double>(n);
  const Complex mi(0.0, -1.0);
  auto rhs = [&](double t, const Vector2c &v) -> Vector2c {
    return mi * (hamiltonian(d(t)) * v);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double t = d.t_start() + dt * static_cast<double>(k);
    Vector2c k1 = rhs(t, psi);
    Vector2c k2 = rhs(t + dt / 2, psi + dt / 2 * k1);
    Vector2c k3 = rhs(t + dt / 2, psi + dt / 2 * k2);
    Vector2c k4 = rhs(std::min(t + dt, d.t_end()), psi + dt * k3);
    psi += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

Matrix2c random_unitary(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Matrix2c m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix2c> qr(m);
  return qr.householderQ();
}

} // namespace

TEST_CASE("step propagator examples") {
  Matrix2c u = step_propagator({0.0, 0.0, 0.0}, 1.7).u;
  CHECK((u - Matrix2c::Identity()).norm() < 1e-15);
  u = step_propagator({2.0, 0.0, 0.0}, M_PI).u;
  CHECK((u + Matrix2c::Identity()).norm() < 1e-14);
  u = step_propagator({0.0, 1.0, 0.0}, M_PI).u;
  CHECK(std::abs(u(0, 0) - std::exp(Complex(0, -M_PI / 2))) < 1e-15);
  CHECK(std::abs(u(1, 1) - std::exp(Complex(0, M_PI / 2))) < 1e-15);
  CHECK(std::abs(u(0, 1)) < 1e-15);
}

TEST_CASE("step propagator matches the matrix exponential") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0), udt(1e-4, 2.0);
  for (int i = 0; i < 200; ++i) {
    DriveSample s{u(rng), u(rng), u(rng)};
    const double dt = udt(rng);
    Matrix2c oracle = (Complex(0, -dt) * hamiltonian(s)).exp();
    CHECK((step_propagator(s, dt).u - oracle).norm() < 1e-13);
  }
}

TEST_CASE("evolve examples") {
  Drive zero = constant_drive({}, 0.0, 3.0);
  CHECK((evolve(zero, 100).u - Matrix2c::Identity()).norm() < 1e-15);

  AEParams p;
  Propagator2 u = evolve(reference_drive(p), 20000);
  CHECK(u.transition_probability(0, 1) > 0.999);
  CHECK(u.steps == 20000);
  CHECK(u.t_end == 8.0);

  Drive pi = constant_drive({2.0, 0.0, 0.0}, 0.0, M_PI / 2.0);
  CHECK(evolve(pi, 7).transition_probability(0, 1) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("time grid") {
  TimeGrid g(1.0, 3.0, 4);
  CHECK(g.dt() == 0.5);
  CHECK(g.node(4) == 3.0);
  CHECK(g.midpoint(0) == 1.25);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid(1.0, 0.0, 3), InvalidArgument);
  TimeGrid single(2.0, 2.0, 0);
  CHECK(single.n_steps() == 0);
}

TEST_CASE("evolve agrees with an RK4 oracle") {
  AEParams p;
  for (double a : {1.0, 2.0, 10.0}) {
    Drive d = rescaled_drive(p, a);
    Vector2c psi = evolve(d, 20000).u.col(0);
    Vector2c oracle = rk4(d, Vector2c(1.0, 0.0), 20000);
    CHECK((psi - oracle).norm() < 1e-6);
  }
}

TEST_CASE("property: unitarity and norm conservation") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ua(0.5, 12.0), uo(0.5, 4.0),
      u01(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    AEParams p{uo(rng), uo(rng) / 2, 0.5 + u01(rng)};
    Drive d = rescaled_drive(p, ua(rng));
    const std::size_t n = 500 + static_cast<std::size_t>(u01(rng) * 4000);
    Propagator2 u = evolve(d, n);
    CHECK(unitarity_defect(u.u) <= 1e-10);
    Vector2c psi0(Complex(u01(rng), u01(rng)), Complex(u01(rng), u01(rng)));
    psi0.normalize();
    auto traj = evolve_trajectory(d, TimeGrid::over(d, n), {psi0});
    for (const auto &pt : traj) CHECK(std::abs(pt.state.norm() - 1.0) <= 1e-10);
  }
}

TEST_CASE("property: second-order convergence") {
  AEParams p;
  Drive d = reference_drive(p);
  Matrix2c fine = evolve(d, 64000).u;
  const double e1 = (evolve(d, 2000).u - fine).norm();
  const double e2 = (evolve(d, 4000).u - fine).norm();
  const double e4 = (evolve(d, 8000).u - fine).norm();
  // Richardson: fine grid contributes ~1/16 of e4.
  const double ratio1 = e1 / e2, ratio2 = e2 / e4;
  CHECK(ratio1 >= 3.5);
  CHECK(ratio1 <= 4.5);
  CHECK(ratio2 >= 3.5);
  CHECK(ratio2 <= 4.5);
}

TEST_CASE("property: composition of sub-interval propagators") {
  AEParams p;
  Drive d = reference_drive(p);
  Propagator2 whole = evolve(d, TimeGrid(0.0, 8.0, 2000));
  Propagator2 first = evolve(d, TimeGrid(0.0, 4.0, 1000));
  Propagator2 second = evolve(d, TimeGrid(4.0, 8.0, 1000));
  CHECK((second.u * first.u - whole.u).norm() <= 1e-10);
}

TEST_CASE("time-rescaling theorem at the default grid") {
  AEParams p;
  Propagator2 ref = evolve(reference_drive(p), 20000);
  for (double a : {2.0, 5.0, 10.0}) {
    Propagator2 tr = evolve(rescaled_drive(p, a), 20000);
    CHECK(tr.t_end == doctest::Approx(8.0 / a).epsilon(1e-15));
    CHECK(propagator_distance(ref, tr) <= 1e-6);
  }
}

TEST_CASE("trajectories") {
  AEParams p;
  Drive d = reference_drive(p);
  auto traj = evolve_trajectory(d, TimeGrid::over(d, 8000), PureState2::ground());
  REQUIRE(traj.size() == 8001);
  CHECK(traj.front().time == 0.0);
  CHECK(traj.back().time == 8.0);
  CHECK(populations(traj.back().state).p2 > 0.999);
  // Sigmoidal: low before the crossing, half near t = 4, high after.
  CHECK(populations(traj[2000].state).p2 < 0.05);
  CHECK(populations(traj[4000].state).p2 == doctest::Approx(0.5).epsilon(0.15));
  CHECK(populations(traj[6000].state).p2 > 0.95);

  RescaleMap m(2.0, 8.0);
  Drive t = rescaled_drive(p, m);
  auto ttraj = evolve_trajectory(t, TimeGrid::over(t, 8000), PureState2::ground());
  CHECK(ttraj.back().time == 4.0);
  CHECK(populations(ttraj.back().state).p2 > 0.999);
  // The rescaled population follows the reference at t = f(tau).
  Drive fine = reference_drive(p);
  for (std::size_t k : {1000u, 2500u, 4000u, 5500u, 7000u}) {
    const double tau = ttraj[k].time;
    const double tref = m.eval(tau);
    Propagator2 u = evolve(fine, TimeGrid(0.0, tref, 20000));
    CHECK(populations(ttraj[k].state).p2 ==
          doctest::Approx(u.transition_probability(0, 1)).epsilon(1e-5));
  }

  Drive zero_len = constant_drive({1.0, 0.0, 0.0}, 2.0, 2.0);
  auto single = evolve_trajectory(zero_len, TimeGrid(2.0, 2.0, 0),
                                  PureState2::ground());
  REQUIRE(single.size() == 1);
  CHECK(single[0].state.amplitudes == Vector2c(1.0, 0.0));

  CHECK_THROWS_AS(evolve_trajectory(d, TimeGrid::over(d, 10),
                                    {Vector2c(1.0, 1.0)}),
                  InvalidArgument);
}

TEST_CASE("populations examples") {
  auto p = populations(PureState2::ground());
  CHECK(p.p1 == 1.0);
  CHECK(p.p2 == 0.0);
  p = populations({Vector2c(M_SQRT1_2, M_SQRT1_2)});
  CHECK(p.p1 == doctest::Approx(0.5));
  CHECK(p.p2 == doctest::Approx(0.5));
}

TEST_CASE("propagator distance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int i = 0; i < 100; ++i) {
    Matrix2c a = random_unitary(rng);
    const double phase = u(rng);
    CHECK(propagator_distance(a, a) == 0.0);
    Matrix2c b = std::exp(Complex(0, phase)) * a;
    CHECK(propagator_distance(a, b) < 1e-14);
    CHECK(std::abs(std::remainder(propagator_phase_difference(a, b) + phase,
                                  2 * M_PI)) < 1e-12);
    // The quotient distance never exceeds the plain Frobenius distance.
    Matrix2c c = random_unitary(rng);
    CHECK(propagator_distance(a, c) <= (a - c).norm() + 1e-14);
  }
  Matrix2c x = pauli_x();
  CHECK(propagator_distance(Matrix2c::Identity(), x) ==
        doctest::Approx(2.0).epsilon(1e-14));
}
