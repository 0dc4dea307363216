#include <catch_amalgamated.hpp>

#include "properties.hpp"

TEST_CASE("invariants hold across the seed matrix") {
  const auto results = props::run_property_suite(props::seed_matrix(20));
  REQUIRE(results.size() == 9);
  for (const auto& r : results) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("a broken propagator is caught by the norm check") {
  // Amplifying rather than damping no-jump evolution must show up as growth.
  using namespace dce;
  const FockSpace s(2, 2);
  const OperatorMatrix k = complex(0.0, 0.5) * number_cavity(s);
  const Matrix u = fixed_step_propagator(k, 0.1).matrix();
  const Vector psi = StateVector::basis(s, {1, 0}).amplitudes();
  CHECK((u * psi).squaredNorm() > 1.0);
}
