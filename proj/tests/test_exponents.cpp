#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "kinavg/exponents.hpp"

using kinavg::Rational;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

// Sphere threshold for beta_-, written out independently of the kappa family.
Rational sphere_beta_minus_star(int d, const Rational& q, const Rational& r) {
  const Rational a = R(1) / q + R(d - 1) / (R(2) * r) - R(d - 1, 2);
  const Rational b = -R(d - 1, 4);
  return a > b ? a : b;
}

std::vector<Rational> exponent_lattice() {
  std::vector<Rational> out;
  for (int num = 4; num <= 24; ++num) out.push_back(R(num, 2));
  out.push_back(R(7, 3));
  out.push_back(R(100));
  return out;
}

}  // namespace

TEST_CASE("rational parsing and arithmetic") {
  CHECK(Rational::parse("3/4") == R(3, 4));
  CHECK(Rational::parse("-1") == R(-1));
  CHECK(Rational::parse("0.25") == R(1, 4));
  CHECK(Rational::parse("-0.5") == R(-1, 2));
  CHECK(Rational::parse(" 6 ") == R(6));
  CHECK_THROWS_AS(Rational::parse("inf"), kinavg::InputError);
  CHECK_THROWS_AS(Rational::parse("1/0"), kinavg::InputError);
  CHECK_THROWS_AS(Rational::parse(""), kinavg::InputError);
  CHECK(R(1, 3) + R(1, 6) == R(1, 2));
  CHECK(R(2, 4).num() == 1);
  CHECK(R(1, -2) == R(-1, 2));
  CHECK(R(1, 3) < R(1, 2));
}

TEST_CASE("scaling total") {
  CHECK(kinavg::scaling_total(2, R(2), R(2), R(2), R(0)) == R(1, 2));
  CHECK(kinavg::scaling_total(3, R(2), R(2), R(2), R(0)) == R(1, 2));
  CHECK(kinavg::scaling_total(2, R(2), R(2), R(2), R(1)) == R(3, 2));
  CHECK_THROWS_AS(kinavg::scaling_total(2, R(1), R(2), R(2), R(0)), kinavg::InputError);
  CHECK_THROWS_AS(kinavg::scaling_total(1, R(2), R(2), R(2), R(0)), kinavg::InputError);
}

TEST_CASE("scaling-consistent tuples") {
  kinavg::ExponentTuple t;
  t.d = 2;
  t.beta_plus = R(1, 4);
  t.beta_minus = R(1, 4);
  CHECK(t.scaling_consistent());
  t.beta_minus = R(1, 3);
  CHECK_FALSE(t.scaling_consistent());
}

TEST_CASE("alpha star") {
  CHECK(kinavg::alpha_star(2, R(2), R(2)).value == R(0));
  CHECK(kinavg::alpha_star(2, R(2), R(2)).branch == 0);
  CHECK(kinavg::alpha_star(2, R(4), R(4)).value == R(-3, 8));
  const auto third = kinavg::alpha_star(3, R(6), R(6));
  CHECK(third.value == R(-1, 2));
  CHECK(third.branch == 1);
  const auto tie = kinavg::alpha_star(3, R(4), R(4));
  CHECK(tie.value == R(-1, 2));
  CHECK(tie.boundary);
  CHECK(tie.branch == 0);
}

TEST_CASE("beta minus star family") {
  CHECK(kinavg::beta_minus_star(3, R(2), R(2), R(-1)).value == sphere_beta_minus_star(3, R(2), R(2)));
  CHECK(kinavg::beta_minus_star(3, R(2), R(2), R(-1)).value == R(0));
  CHECK(kinavg::beta_minus_star(3, R(2), R(2), R(0)).value == R(-1, 2));
  CHECK(kinavg::beta_minus_star(2, R(2), R(2), R(-1)).value == R(1, 4));
  CHECK(sphere_beta_minus_star(2, R(2), R(2)) == R(1, 4));
  CHECK_THROWS_AS(kinavg::beta_minus_star(2, R(2), R(2), R(1, 2)), kinavg::InputError);
}

TEST_CASE("wave admissibility") {
  CHECK(kinavg::wave_admissible(3, R(4), R(4)));
  CHECK_FALSE(kinavg::wave_admissible(2, R(2), R(2)));
  CHECK_THROWS_AS(Rational::parse("inf"), kinavg::InputError);
  CHECK(kinavg::radial_admissible(3, R(4), R(4)));
  CHECK_FALSE(kinavg::radial_admissible(2, R(2), R(2)));
}

TEST_CASE("equivalent cone order") {
  CHECK(kinavg::equiv_alpha(3, R(0), R(-1)) == R(0));
  CHECK(kinavg::equiv_alpha(2, R(1, 4), R(-1)) == R(0));
  CHECK(kinavg::equiv_alpha(3, R(0), R(0)) == R(1, 2));
}

TEST_CASE("decoupling exponent") {
  CHECK(kinavg::gamma_decoupling(2, R(2), R(6)).value == R(-1, 2));
  CHECK(kinavg::gamma_decoupling(2, R(2), R(6)).value == kinavg::alpha_star(2, R(6), R(6)).value);
  CHECK(kinavg::gamma_decoupling(2, R(2), R(2)).value == R(0));
  CHECK(kinavg::gamma_decoupling(2, R(2), R(2)).value == kinavg::alpha_star(2, R(2), R(2)).value);
  const auto g = kinavg::gamma_decoupling(3, R(2), R(2));
  CHECK(g.value == R(0));
  CHECK(g.branch == 0);
  CHECK(kinavg::gamma_decoupling(3, R(2), R(20)).branch == 1);
  CHECK_THROWS_AS(kinavg::gamma_decoupling(2, R(4), R(2)), kinavg::InputError);
  CHECK(kinavg::besov_beta_minus_star(3, R(2), R(2)) == R(0));
}

TEST_CASE("radial Strichartz threshold") {
  CHECK(kinavg::alpha_double_star(3, R(2), R(4)).value == R(-1, 2));
  CHECK(kinavg::alpha_double_star(3, R(2), R(4)).boundary);
  CHECK(kinavg::alpha_double_star(2, R(2), R(2)).value == R(0));
  CHECK(kinavg::alpha_double_star(3, R(8), R(8)).value == R(-1, 2));
  CHECK(kinavg::alpha_double_star(3, R(8), R(8)).branch == 1);
}

TEST_CASE("radial data thresholds") {
  CHECK(kinavg::radial_x_beta_minus_star(3, R(2), R(2)).value == R(-1, 2));
  CHECK(kinavg::radial_xv_beta_minus_star(3, R(2), R(2)).value == R(-1, 2));
  CHECK(kinavg::radial_x_beta_minus_star(2, R(2), R(2)).value == R(0));
}

TEST_CASE("thresholds are complementary under scaling") {
  for (int d = 2; d <= 5; ++d) {
    for (const auto& q : exponent_lattice()) {
      for (const auto& r : exponent_lattice()) {
        const Rational bp = kinavg::beta_plus_star(d, q, r).value;
        const Rational bm = sphere_beta_minus_star(d, q, r);
        CHECK(bp + bm == R(d) / r + R(1) / q - R(d, 2));
        CHECK(kinavg::beta_minus_star(d, q, r, R(-1)).value == bm);
        // beta_+ < beta_+^* exactly when beta_- > beta_-^*
        const Rational total = kinavg::scaling_total(d, q, r, R(2), R(0));
        for (const Rational& shift : {R(-1, 8), R(0), R(1, 8)}) {
          const Rational beta_plus = bp + shift;
          CHECK((beta_plus < bp) == (total - beta_plus > bm));
        }
      }
    }
  }
}

TEST_CASE("cone order matches alpha star on the kappa family") {
  for (int d = 2; d <= 5; ++d) {
    for (const auto& q : exponent_lattice()) {
      for (const auto& r : exponent_lattice()) {
        for (const Rational& kappa : {R(-1), R(-3, 4), R(-1, 2), R(-1, 3), R(0)}) {
          const Rational bm = kinavg::beta_minus_star(d, q, r, kappa).value;
          CHECK(kinavg::equiv_alpha(d, bm, kappa) == kinavg::alpha_star(d, q, r).value);
        }
        if (q == r) CHECK(kinavg::gamma_decoupling(d, R(2), q).value == kinavg::alpha_star(d, q, q).value);
      }
    }
  }
}

TEST_CASE("verdicts") {
  using kinavg::Verdict;
  // wave-admissible: fails at the threshold
  const Rational star = kinavg::beta_plus_star(3, R(4), R(4)).value;
  CHECK(kinavg::smoothing_verdict(3, R(4), R(4), star - R(1, 10)) == Verdict::holds);
  CHECK(kinavg::smoothing_verdict(3, R(4), R(4), star) == Verdict::fails);
  CHECK(kinavg::smoothing_verdict(3, R(4), R(4), star + R(1, 10)) == Verdict::fails);
  // not wave-admissible: the threshold itself is open
  const Rational star2 = kinavg::beta_plus_star(2, R(4), R(4)).value;
  CHECK(kinavg::smoothing_verdict(2, R(4), R(4), star2) == Verdict::open);
  CHECK(kinavg::smoothing_verdict(2, R(4), R(4), star2 - R(1, 100)) == Verdict::holds);
  const Rational a = kinavg::alpha_star(2, R(4), R(4)).value;
  CHECK(kinavg::cone_verdict(2, R(4), R(4), a) == Verdict::open);
  CHECK(kinavg::cone_verdict(2, R(4), R(4), a + R(1, 100)) == Verdict::holds);
  CHECK(kinavg::cone_verdict(3, R(4), R(4), kinavg::alpha_star(3, R(4), R(4)).value) == Verdict::fails);
  CHECK(kinavg::to_string(Verdict::open) == "open");
}
