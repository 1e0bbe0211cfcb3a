#include "doctest.h"
#include "qbm/errors.hpp"
#include "qbm/params.hpp"

using namespace qbm;

TEST_CASE("validate_params accepts positive natural-unit parameters") {
  auto v = validate_params(natural_params(1, 1, 0.1, 100, 10));
  CHECK(v.beta() == doctest::Approx(0.1));
  auto again = validate_params(v.raw());
  CHECK(again.M() == v.M());
  CHECK(again.T() == v.T());
}

TEST_CASE("validate_params names the offending field") {
  auto p = natural_params(0, 1, 0.1, 100, 10);
  try {
    validate_params(p);
    FAIL("expected NonPositiveParameter");
  } catch (const NonPositiveParameter& e) {
    CHECK(e.name() == "M");
  }
  p = natural_params(1, 1, 0.1, 100, -1);
  try {
    validate_params(p);
    FAIL("expected NonPositiveParameter");
  } catch (const NonPositiveParameter& e) {
    CHECK(e.name() == "T");
  }
}

TEST_CASE("cl_regime_check") {
  auto hot = cl_regime_check(validate_params(natural_params(1, 1, 0.1, 100, 1000)), {3, 3});
  CHECK(hot.r_temp == doctest::Approx(10));
  CHECK(hot.r_cutoff == doctest::Approx(100));
  CHECK(hot.in_cl_regime);

  auto cold = cl_regime_check(validate_params(natural_params(1, 1, 0.1, 100, 1)), {3, 3});
  CHECK(cold.r_temp == doctest::Approx(0.01));
  CHECK_FALSE(cold.in_cl_regime);

  PhysicalParams si{1.0, 1e11, 1.0, 1e13, 300.0, Constants::si()};
  auto mol = cl_regime_check(validate_params(si));
  // k_B * 300 / (hbar * 1e13) with CODATA constants
  CHECK(mol.r_temp == doctest::Approx(1.380649e-23 * 300 / (1.054571817e-34 * 1e13)).epsilon(1e-12));
  CHECK(mol.r_temp == doctest::Approx(3.93).epsilon(1e-3));

  CHECK_THROWS_AS(cl_regime_check(validate_params(si), {1.0, 10.0}), DomainError);
}

TEST_CASE("r_cutoff is invariant under joint (Lambda, Omega) scaling") {
  for (double s : {0.1, 3.0, 1e4}) {
    auto a = cl_regime_check(validate_params(natural_params(1, 2, 0.1, 50, 10)));
    auto b = cl_regime_check(validate_params(natural_params(1, 2 * s, 0.1, 50 * s, 10)));
    CHECK(a.r_cutoff == doctest::Approx(b.r_cutoff).epsilon(1e-14));
  }
}
