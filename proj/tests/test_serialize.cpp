#include <catch_amalgamated.hpp>

#include "dce/model.hpp"
#include "dce/serialize.hpp"
#include "oracles.hpp"

using namespace dce;

TEST_CASE("operator JSON round trip is exact and row-major") {
  const FockSpace s(3, 2);
  const OperatorMatrix op(s, oracle::random_hermitian(6, 11) + complex(0, 1) * oracle::random_hermitian(6, 12));
  const json j = to_json(op);
  CHECK(j.at("dim") == 6);
  CHECK(j.at("entries").size() == 36);
  CHECK(j.at("entries")[1][0].get<double>() == op.matrix()(0, 1).real());
  CHECK(j.at("entries")[6][1].get<double>() == op.matrix()(1, 0).imag());
  const OperatorMatrix back = operator_from_json(json::parse(j.dump()));
  CHECK(back.space() == s);
  CHECK(max_abs(back.matrix() - op.matrix()) == 0.0);
}

TEST_CASE("state JSON round trip") {
  const FockSpace s(2, 3);
  const StateVector psi(s, oracle::random_state(6, 3));
  const StateVector back = state_from_json(json::parse(to_json(psi).dump()));
  CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
}

TEST_CASE("malformed JSON layouts are rejected") {
  json j = to_json(StateVector::basis(FockSpace(2, 2), {1, 1}));
  j["dim"] = 5;
  CHECK_THROWS_AS(state_from_json(j), std::invalid_argument);
  json k = to_json(StateVector::basis(FockSpace(2, 2), {1, 1}));
  k["amplitudes"].erase(0);
  CHECK_THROWS_AS(state_from_json(k), std::invalid_argument);
}
