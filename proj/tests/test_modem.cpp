#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stsbc/modem.hpp"
#include "stsbc/rng.hpp"

using namespace stsbc;

namespace {
int popcount_diff(int a, int b) { return __builtin_popcount(static_cast<unsigned>(a ^ b)); }
}  // namespace

TEST_CASE("4-QAM maps all-zero bits to the first-quadrant point") {
  const auto& c = Constellation::get(4);
  const std::vector<std::uint8_t> bits{0, 0};
  const auto syms = map_bits(c, bits);
  const double a = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(syms[0] - cplx{a, a}) < 1e-15);
}

TEST_CASE("constellations have unit average energy and distinct points") {
  for (int m : {4, 16, 64, 256}) {
    const auto& c = Constellation::get(m);
    double e = 0.0;
    for (const auto& p : c.points) e += std::norm(p);
    CHECK(e / m == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) CHECK(c.points[i] != c.points[j]);
    }
  }
}

TEST_CASE("nearest neighbours differ in exactly one bit") {
  for (int m : {4, 16, 64, 256}) {
    const auto& c = Constellation::get(m);
    double dmin = 1e300;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) dmin = std::min(dmin, std::abs(c.points[i] - c.points[j]));
    }
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if (std::abs(c.points[i] - c.points[j]) < dmin * 1.0001) {
          CHECK(popcount_diff(i, j) == 1);
        }
      }
    }
  }
}

TEST_CASE("hard demapping inverts the mapping for every label") {
  for (int m : {4, 16, 64, 256}) {
    const auto& c = Constellation::get(m);
    std::vector<std::uint8_t> bits(c.bits);
    for (int label = 0; label < m; ++label) {
      hard_demap(c, c.points[label], bits.data());
      int back = 0;
      for (int b = 0; b < c.bits; ++b) back = (back << 1) | bits[b];
      CHECK(back == label);
    }
  }
}

TEST_CASE("map_bits validates the bit count") {
  const auto& c = Constellation::get(16);
  const std::vector<std::uint8_t> bits{0, 1, 0};
  CHECK_THROWS_AS(map_bits(c, bits), std::invalid_argument);
}

TEST_CASE("zero LLRs give a uniform prior") {
  const auto& c = Constellation::get(16);
  const std::vector<double> llrs(4, 0.0);
  const auto priors = priors_from_llrs(c, llrs);
  REQUIRE(priors.size() == 1);
  for (double p : priors[0]) CHECK(p == doctest::Approx(1.0 / 16).epsilon(1e-12));
}

TEST_CASE("saturated LLRs concentrate the prior on one point") {
  const auto& c = Constellation::get(16);
  const std::vector<double> llrs(4, 50.0);  // all bits 0 -> label 0000
  const auto priors = priors_from_llrs(c, llrs);
  CHECK(priors[0][0] >= 1.0 - 1e-8);
}

TEST_CASE("priors sum to one for random LLRs") {
  Rng rng(21, 1);
  const auto& c = Constellation::get(64);
  std::vector<double> llrs(6 * 32);
  for (auto& l : llrs) l = 6.0 * rng.next_gaussian();
  const auto priors = priors_from_llrs(c, llrs);
  for (const auto& p : priors) {
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("soft symbol statistics") {
  const auto& c = Constellation::get(16);

  SUBCASE("uniform prior has zero mean and unit variance") {
    SymbolPrior uniform(16, 1.0 / 16);
    const auto [mean, var] = soft_symbol_stats(c, uniform);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("point mass has the point's mean and zero variance") {
    SymbolPrior point(16, 0.0);
    point[5] = 1.0;
    const auto [mean, var] = soft_symbol_stats(c, point);
    CHECK(std::abs(mean - c.points[5]) < 1e-15);
    CHECK(std::abs(var) < 1e-12);
  }

  SUBCASE("variance is never negative") {
    Rng rng(22, 1);
    for (int t = 0; t < 200; ++t) {
      SymbolPrior p(16);
      double sum = 0.0;
      for (auto& v : p) {
        v = rng.next_double();
        sum += v;
      }
      for (auto& v : p) v /= sum;
      const auto [mean, var] = soft_symbol_stats(c, p);
      (void)mean;
      CHECK(var >= -1e-12);
    }
  }
}
