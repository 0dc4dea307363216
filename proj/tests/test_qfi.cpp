#include <catch_amalgamated.hpp>

#include <numbers>

#include "dce/qfi.hpp"

using namespace dce;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const FockSpace kSpace(6, 8);

double half_rabi_time() {
  ModelParams p;
  return std::numbers::pi / effective_rabi(p);
}

}  // namespace

TEST_CASE("pure-state QFI formula") {
  Vector phi = Vector::Zero(2);
  phi(0) = 1.0;
  CHECK(qfi_from_states(phi, complex(0.0, 3.0) * phi) == 0.0);  // global phase carries no information
  Vector d = Vector::Zero(2);
  d(1) = 1.0;
  CHECK(qfi_from_states(phi, d) == 4.0);
  d(0) = complex(0.0, 0.7);
  CHECK_THAT(qfi_from_states(phi, d), WithinAbs(4.0, 1e-15));
}

TEST_CASE("probe time is half a Casimir-Rabi period") {
  CHECK_THAT(half_rabi_time(), WithinRel(1.0077e8, 1e-3));
}

TEST_CASE("uncoupled controls carry no information") {
  ModelParams p;
  p.g = 0.0;
  p.omega_c = resonant_omega_c(1e-3);
  const double t = half_rabi_time();
  for (const FockState st : {FockState{0, 3}, FockState{2, 0}, FockState{1, 1}}) {
    const QfiPoint q = qfi_at(p, kSpace, StateVector::basis(kSpace, st), t);
    CHECK(std::abs(q.value) <= 1e-6 * 1e16);
    CHECK(std::abs(qfi_exact(p, kSpace, StateVector::basis(kSpace, st), t)) <= 1e-6 * 1e16);
  }
}

TEST_CASE("finite differences agree with the eigenbasis derivative") {
  ModelParams p;
  const auto psi0 = StateVector::basis(kSpace, {0, 3});
  const double t = half_rabi_time();
  for (double offset : {-4e-8, 4e-8, 2e-7}) {
    p.omega_c = resonant_omega_c(1e-3) + offset;
    const QfiPoint q = qfi_at(p, kSpace, psi0, t);
    CHECK_THAT(q.value, WithinRel(qfi_exact(p, kSpace, psi0, t), 0.01));
  }
  // A short probe of a superposition, where the phase term dominates.
  Vector v = Vector::Zero(kSpace.dim());
  v(kSpace.index({0, 0})) = 1.0 / std::sqrt(2.0);
  v(kSpace.index({1, 0})) = 1.0 / std::sqrt(2.0);
  p.omega_c = 1.47;
  const double t_short = 1e4;
  const QfiPoint q = qfi_at(p, kSpace, StateVector(kSpace, v), t_short, 1e-9);
  CHECK_THAT(q.value, WithinRel(qfi_exact(p, kSpace, StateVector(kSpace, v), t_short), 1e-3));
  CHECK_THAT(q.value, WithinRel(t_short * t_short, 0.01));
}

TEST_CASE("step-size consistency check") {
  ModelParams p;
  p.omega_c = resonant_omega_c(1e-3) + 4e-8;
  const auto psi0 = StateVector::basis(kSpace, {0, 3});
  try {
    qfi_at(p, kSpace, psi0, half_rabi_time(), 3e-8);
    FAIL("expected an ill-conditioned step");
  } catch (const numerical_error& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("ill-conditioned"));
  }
  CHECK_THROWS_AS(qfi_at(p, kSpace, psi0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(qfi_at(p, kSpace, StateVector(kSpace, 2.0 * psi0.amplitudes()), 1.0), std::invalid_argument);
}

TEST_CASE("scan peaks at the shifted resonance") {
  ModelParams p;
  const auto psi0 = StateVector::basis(kSpace, {0, 3});
  const double t = half_rabi_time();
  const QfiScan a = qfi_scan(p, kSpace, psi0, 1.5000103, 1.5000107, 41, t, kDefaultQfiDelta, 1);
  REQUIRE(a.points.size() == 41);
  CHECK(std::abs(a.peak_omega_c - 1.5000105) <= 2e-6);
  CHECK(a.peak_value >= 1e16);
  CHECK(a.peak_value <= 1e18);
  CHECK(a.peak_value >= a.max_value());
  const QfiScan b = qfi_scan(p, kSpace, psi0, 1.5000103, 1.5000107, 41, t, kDefaultQfiDelta, 3);
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].value == b.points[i].value);
  CHECK_THROWS_AS(qfi_scan(p, kSpace, psi0, 1.6, 1.5, 11, t), std::invalid_argument);
}
