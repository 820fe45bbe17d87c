#include <catch2/catch_amalgamated.hpp>

#include <conewalk/bartholdi.hpp>
#include <conewalk/spectral.hpp>
#include <conewalk/surface.hpp>

#include <cmath>

using namespace conewalk;

TEST_CASE("singularity roots at 256 bits") {
  const BigFloat z2 = zeta_root(2, 256);
  CHECK(abs(z2 - BigFloat("0.999993324015561")) < 1e-15);
  const BigFloat z3 = zeta_root(3, 256);
  CHECK(abs(z3 - BigFloat("0.9999999999703906")) < 1e-15);
}

TEST_CASE("root residual is tiny at the working precision") {
  for (std::int64_t g : {2, 3, 4}) {
    bigfloat_detail::PrecisionScope scope(256);
    const int d = static_cast<int>(4 * g), m = d;
    const BigFloat z = zeta_root(g, 256);
    BigFloat dx = 1;
    for (int i = 0; i < m - 1; ++i) dx *= d * z;
    const BigFloat residual = abs((dx - 1) * (z - 1) + 2 * (d * z - 1));
    // measured against the coefficient scale d^(m-1) of the polynomial
    BigFloat content = 1;
    for (int i = 0; i < m - 1; ++i) content *= d;
    CHECK(residual < content * boost::multiprecision::ldexp(BigFloat(1), -(256 - 16)));
  }
}

TEST_CASE("baseline bounds at 256 bits") {
  const auto tol = [](const char* s) { return 1e-12 * std::abs(std::stod(s)); };
  CHECK(abs(bartholdi_lower(2).bound - BigFloat("0.6624219223029230")) <
        tol("0.6624219223029230"));
  CHECK(abs(bartholdi_lower(3).bound - BigFloat("0.5527735401122323")) <
        tol("0.5527735401122323"));
  CHECK(abs(bartholdi_lower(4).bound - BigFloat("0.484122920740487")) <
        tol("0.484122920740487"));
  CHECK(abs(bartholdi_lower(5).bound - BigFloat("0.4358898943553")) < tol("0.4358898943553"));
}

TEST_CASE("doubling the precision moves the bound by less than 1e-14 relative") {
  for (std::int64_t g : {2, 3}) {
    const BigFloat a = bartholdi_lower(g, 256).bound;
    const BigFloat b = bartholdi_lower(g, 512).bound;
    CHECK(abs(a - b) < 1e-14 * a);
  }
}

TEST_CASE("the type-system estimate beats the baseline in genus 2 but not in genus 4") {
  const double base2 = static_cast<double>(bartholdi_lower(2).bound);
  CHECK(base2 < estimate(cannon_matrix(2)).bound);
  const double base4 = static_cast<double>(bartholdi_lower(4).bound);
  CHECK(base4 > estimate(cannon_matrix(4)).bound);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(bartholdi_lower(1), InvalidGenus);
  CHECK_THROWS_AS(bartholdi_lower(2, 64), ConfigError);
  CHECK_THROWS_AS(zeta_root(0, 256), InvalidGenus);
}
