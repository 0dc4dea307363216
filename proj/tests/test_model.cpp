#include <catch_amalgamated.hpp>

#include <numbers>

#include "dce/linalg.hpp"
#include "dce/model.hpp"
#include "oracles.hpp"

using namespace dce;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("closed-form resonance helpers") {
  ModelParams p;
  p.g = 1e-3;
  CHECK_THAT(effective_rabi(p), WithinRel(3.11769e-8, 1e-5));
  CHECK_THAT(resonant_omega_c(1e-3), WithinAbs(1.5000105, 1e-15));
  CHECK(resonant_omega_c(0.0) == 1.5);
  p.g = 0.0;
  CHECK(effective_rabi(p) == 0.0);
  p.g = 0.02;
  CHECK_THROWS_AS(effective_rabi(p), std::domain_error);
  CHECK_THROWS_AS(build_effective(p, FockSpace(3, 4)), std::domain_error);
  CHECK_NOTHROW(build_exact(p, FockSpace(3, 4)));
  // t_f of the QFI and fidelity figures is half a Rabi period.
  p.g = 1e-3;
  CHECK_THAT(std::numbers::pi / effective_rabi(p), WithinRel(1.0077e8, 1e-3));
}

TEST_CASE("parameters are validated") {
  ModelParams p;
  p.gamma_a = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.omega_c = 0.0;
  CHECK_THROWS_AS(build_exact(p, FockSpace(2, 2)), std::invalid_argument);
}

TEST_CASE("exact Hamiltonian matches its element-wise form") {
  for (auto [nc, nm] : {std::pair{6, 8}, std::pair{3, 5}, std::pair{2, 2}}) {
    ModelParams p;
    p.omega_c = 1.43;
    p.g = 3e-3;
    const OperatorMatrix h = build_exact(p, FockSpace(nc, nm));
    CHECK(max_abs(h.matrix() - oracle::exact_hamiltonian(p.omega_c, p.g, nc, nm)) <= 1e-15);
    CHECK(h.hermiticity_defect() <= 1e-12 * max_abs(h.matrix()));
  }
}

TEST_CASE("selection rules of the exact coupling") {
  const FockSpace s(6, 8);
  const OperatorMatrix h = build_exact(ModelParams{}, s);
  CHECK(h.element({2, 0}, {0, 3}) == complex(0.0));
  CHECK(h.element({2, 1}, {0, 0}).real() == Catch::Approx(1e-3 * std::sqrt(2.0)));
  const Matrix& m = h.matrix();
  for (Index i = 0; i < s.dim(); ++i)
    for (Index j = 0; j < s.dim(); ++j)
      if (i != j && m(i, j) != complex(0.0)) CHECK(std::abs(s.state(i).phonons - s.state(j).phonons) == 1);
}

TEST_CASE("effective Hamiltonian structure") {
  const FockSpace s(6, 8);
  ModelParams p;
  p.omega_c = resonant_omega_c(p.g);
  const OperatorMatrix h = build_effective(p, s);
  CHECK(h.is_hermitian());
  // Only a^dag^2 b^3 couples states: |0,3> <-> |2,0> with 9 g^3 sqrt(2) sqrt(6).
  CHECK_THAT(h.element({2, 0}, {0, 3}).real(), WithinRel(9e-9 * std::sqrt(12.0), 1e-12));
  CHECK_THAT(h.element({2, 0}, {0, 3}).real(), WithinRel(effective_rabi(p), 1e-12));
  // The two-level block equals the closed-form matrix.
  const Eigen::Matrix2d two = two_level_matrix(p);
  CHECK_THAT(h.element({0, 3}, {0, 3}).real(), WithinAbs(two(0, 0), 1e-14));
  CHECK_THAT(h.element({2, 0}, {2, 0}).real(), WithinAbs(two(1, 1), 1e-14));
  // At resonance the diagonal entries are degenerate.
  CHECK_THAT(two(0, 0), WithinAbs(two(1, 1), 1e-14));
}

TEST_CASE("rotating-frame generator commutes with H_eff and the number operators") {
  const FockSpace s(6, 8);
  ModelParams p;
  p.omega_c = 1.50003;
  const OperatorMatrix r = rotating_frame_generator(s);
  CHECK(max_abs(commutator(r, build_effective(p, s)).matrix()) <= 1e-14);
  CHECK(max_abs(commutator(r, number_cavity(s)).matrix()) == 0.0);
  CHECK(max_abs(commutator(r, number_mech(s)).matrix()) == 0.0);
  // The frame Hamiltonian only carries slow scales.
  const Matrix hr = frame_hamiltonian(p, s, Frame::effective_rotating).matrix();
  CHECK(max_abs(hr) <= 1e-3);
}

TEST_CASE("decay term") {
  const FockSpace s(3, 3);
  ModelParams p;
  CHECK(max_abs(build_nonhermitian(p, s, false).matrix() - build_exact(p, s).matrix()) == 0.0);
  p.gamma_a = 2e-3;
  p.gamma_b = 5e-4;
  const Matrix k = build_nonhermitian(p, s, true).matrix();
  const Matrix anti = 0.5 * (k - k.adjoint());
  for (Index i = 0; i < s.dim(); ++i) {
    const FockState st = s.state(i);
    CHECK_THAT(anti(i, i).imag(), WithinAbs(-0.5 * (p.gamma_a * st.photons + p.gamma_b * st.phonons), 1e-18));
  }
}

TEST_CASE("exact and effective levels agree near the crossing") {
  const FockSpace s(6, 8);
  for (double ratio : {1.4995, 1.5000105, 1.5005}) {
    ModelParams p;
    p.omega_c = ratio;
    const Eigen::VectorXd ee = oracle::eigenvalues(build_exact(p, s).matrix());
    const Eigen::VectorXd ef = oracle::eigenvalues(build_effective(p, s).matrix());
    CHECK(std::abs(ee(5) - ef(5)) <= 6.2e-9);
    CHECK(std::abs(ee(6) - ef(6)) <= 6.2e-9);
  }
}

TEST_CASE("interaction terms reproduce the exact coupling below the photon cutoff") {
  const FockSpace s(6, 8);
  ModelParams p;
  const auto terms = interaction_terms(p, s);
  OperatorMatrix v = OperatorMatrix::zero(s);
  for (const auto& t : terms) v += t + t.adjoint();
  const Matrix coupling = build_exact(p, s).matrix() - (p.omega_c * number_cavity(s) + number_mech(s)).matrix();
  for (Index i = 0; i < s.dim(); ++i)
    for (Index j = 0; j < s.dim(); ++j)
      if (s.state(i).photons < s.n_cav() - 1 && s.state(j).photons < s.n_cav() - 1)
        CHECK(std::abs(v.matrix()(i, j) - coupling(i, j)) <= 1e-15);
}
