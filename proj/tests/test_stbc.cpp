#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "stsbc/modem.hpp"
#include "stsbc/stbc.hpp"
#include "test_util.hpp"

using namespace stsbc;
using test::random_gaussian_symbols;
using test::random_qam_symbols;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);

double max_abs_diff(const CMat& a, const CMat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("scheme dimensions and rates") {
  CHECK(scheme_dims(SchemeId::Alamouti).n_tx == 2);
  CHECK(scheme_dims(SchemeId::Alamouti).n_time == 2);
  CHECK(scheme_dims(SchemeId::Alamouti).n_syms == 2);
  CHECK(scheme_dims(SchemeId::SpatialMux).n_time == 1);
  CHECK(scheme_dims(SchemeId::Golden).n_syms == 4);
  CHECK(scheme_dims(SchemeId::ThreeD).n_tx == 4);
  CHECK(scheme_dims(SchemeId::ThreeD).n_time == 4);
  CHECK(scheme_dims(SchemeId::ThreeD).n_syms == 8);

  CHECK(code_rate(SchemeId::Alamouti).value() == doctest::Approx(1.0));
  CHECK(code_rate(SchemeId::SpatialMux).value() == doctest::Approx(2.0));
  CHECK(code_rate(SchemeId::Golden).value() == doctest::Approx(2.0));
  CHECK(code_rate(SchemeId::ThreeD).value() == doctest::Approx(2.0));
}

TEST_CASE("golden constants") {
  const auto& k = golden_constants();
  CHECK(k.theta == doctest::Approx(1.6180339887498949).epsilon(1e-15));
  CHECK(k.theta * k.theta_bar == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(k.theta + k.theta_bar == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k.alpha.real() == 1.0);
  CHECK(k.alpha.imag() == doctest::Approx(-0.6180339887498949).epsilon(1e-15));
  CHECK(k.alpha_bar.imag() == doctest::Approx(1.6180339887498949).epsilon(1e-15));
  CHECK(k.mu == cplx{0.0, 1.0});
}

TEST_CASE("alamouti codeword entries") {
  const auto x = encode(SchemeId::Alamouti, std::vector<cplx>{{1.0, 0.0}, {0.0, 0.0}});
  CHECK(max_abs_diff(x.entries, kInvSqrt2 * CMat::Identity(2, 2)) < 1e-15);

  const cplx s1{1.0, 1.0}, s2{1.0, -1.0};
  const auto y = encode(SchemeId::Alamouti, std::vector<cplx>{s1, s2});
  CMat expect(2, 2);
  expect << cplx{1, 1}, cplx{-1, -1}, cplx{1, -1}, cplx{1, -1};
  CHECK(max_abs_diff(y.entries, kInvSqrt2 * expect) < 1e-15);
}

TEST_CASE("alamouti orthogonality for random inputs") {
  Rng rng(7, 1);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_gaussian_symbols(rng, 2);
    const auto x = encode(SchemeId::Alamouti, s);
    const double e = 0.5 * (std::norm(s[0]) + std::norm(s[1]));
    const CMat gram = x.entries * x.entries.adjoint();
    CHECK(max_abs_diff(gram, e * CMat::Identity(2, 2)) < 1e-13);
  }
}

TEST_CASE("spatial multiplexing codeword") {
  const auto x = encode(SchemeId::SpatialMux, std::vector<cplx>{{1.0, 0.0}, {0.0, 0.0}});
  CHECK(x.entries.rows() == 2);
  CHECK(x.entries.cols() == 1);
  CHECK(std::abs(x.entries(0, 0) - cplx{kInvSqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(x.entries(1, 0)) == 0.0);

  Rng rng(8, 1);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_gaussian_symbols(rng, 2);
    const auto y = encode(SchemeId::SpatialMux, s);
    CHECK(std::abs(y.entries(0, 0) - kInvSqrt2 * s[0]) < 1e-15);
    CHECK(std::abs(y.entries(1, 0) - kInvSqrt2 * s[1]) < 1e-15);
  }
}

TEST_CASE("golden base matrix matches the construction constants") {
  const std::vector<cplx> s{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  const CMat g = golden_matrix(s);
  CHECK(std::abs(g(0, 0) - kInvSqrt5 * cplx{1.0, -0.6180339887498949}) < 1e-12);
  CHECK(std::abs(g(1, 1) - kInvSqrt5 * cplx{1.0, 1.6180339887498949}) < 1e-12);
  CHECK(std::abs(g(0, 1)) == 0.0);
  CHECK(std::abs(g(1, 0)) == 0.0);

  // encode() adds the transmit power normalisation on top.
  const auto x = encode(SchemeId::Golden, s);
  CHECK(max_abs_diff(x.entries, kInvSqrt2 * g) < 1e-15);

  const std::vector<cplx> zero(4, cplx{0.0, 0.0});
  CHECK(golden_matrix(zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("golden minimum determinant over 4-QAM differences is nonvanishing") {
  // Exhaustive scan over all nonzero difference vectors of 4-QAM symbol
  // pairs; each component lies in {0, +-sqrt2} x {0, +-j sqrt2}.
  const double d = std::sqrt(2.0);
  std::vector<cplx> diffs;
  for (double re : {0.0, d, -d}) {
    for (double im : {0.0, d, -d}) diffs.push_back({re, im});
  }
  double min_det = 1e300;
  std::vector<cplx> s(4);
  for (size_t a = 0; a < diffs.size(); ++a) {
    for (size_t b = 0; b < diffs.size(); ++b) {
      for (size_t c = 0; c < diffs.size(); ++c) {
        for (size_t e = 0; e < diffs.size(); ++e) {
          if (a == 0 && b == 0 && c == 0 && e == 0) continue;
          s[0] = diffs[a];
          s[1] = diffs[b];
          s[2] = diffs[c];
          s[3] = diffs[e];
          const CMat x = golden_matrix(s);
          const double det = std::abs(x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0));
          min_det = std::min(min_det, det);
        }
      }
    }
  }
  CHECK(min_det > 0.0);
  // The scan bottoms out at 2/sqrt(5).
  CHECK(min_det == doctest::Approx(0.8944271909999156).epsilon(1e-9));
}

TEST_CASE("three_d codeword for an impulse input") {
  std::vector<cplx> s(8, cplx{0.0, 0.0});
  s[0] = cplx{1.0, 0.0};
  const auto x = encode(SchemeId::ThreeD, s);
  const auto& k = golden_constants();
  const double norm = 0.5 * kInvSqrt5;  // power scale times construction scale
  CMat expect = CMat::Zero(4, 4);
  expect(0, 0) = norm * k.alpha;
  expect(1, 1) = norm * k.alpha_bar;
  expect(2, 2) = norm * std::conj(k.alpha);
  expect(3, 3) = norm * std::conj(k.alpha_bar);
  CHECK(max_abs_diff(x.entries, expect) < 1e-14);

  const std::vector<cplx> zero(8, cplx{0.0, 0.0});
  CHECK(encode(SchemeId::ThreeD, zero).entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("three_d equals the layered alamouti-over-golden construction") {
  const auto enc = build_double_layer(alamouti_outer(), golden_inner());
  CHECK(enc.n_tx() == 4);
  CHECK(enc.n_time() == 4);
  CHECK(enc.n_syms() == 8);
  CHECK(enc.rate().num == 8);
  CHECK(enc.rate().den == 4);

  Rng rng(11, 1);
  const double scale = power_scale(SchemeId::ThreeD);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_gaussian_symbols(rng, 8);
    const auto direct = encode(SchemeId::ThreeD, s);
    const CMat layered = scale * enc(s);
    CHECK(max_abs_diff(direct.entries, layered) < 1e-12);
  }
}

TEST_CASE("three_d block structure follows the inter-site pattern") {
  Rng rng(12, 1);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_gaussian_symbols(rng, 8);
    const auto x = encode(SchemeId::ThreeD, s);
    const double scale = power_scale(SchemeId::ThreeD);
    const CMat a = scale * golden_matrix(std::span<const cplx>(s).subspan(0, 4));
    const CMat b = scale * golden_matrix(std::span<const cplx>(s).subspan(4, 4));
    CHECK(max_abs_diff(x.entries.block(0, 0, 2, 2), a) < 1e-14);
    CHECK(max_abs_diff(x.entries.block(0, 2, 2, 2), b) < 1e-14);
    CHECK(max_abs_diff(x.entries.block(2, 0, 2, 2), CMat(-b.conjugate())) < 1e-14);
    CHECK(max_abs_diff(x.entries.block(2, 2, 2, 2), CMat(a.conjugate())) < 1e-14);
  }
}

TEST_CASE("layered encoder with an identity inner layer is a 2x2 orthogonal design") {
  const auto enc = build_double_layer(alamouti_outer(), identity_inner());
  CHECK(enc.n_tx() == 2);
  CHECK(enc.n_time() == 2);
  CHECK(enc.rate().value() == doctest::Approx(1.0));

  Rng rng(13, 1);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_gaussian_symbols(rng, 2);
    const CMat x = enc(s);
    // Time-transposed single-layer arrangement of the same code.
    CHECK(std::abs(x(0, 0) - s[0]) < 1e-15);
    CHECK(std::abs(x(0, 1) - s[1]) < 1e-15);
    CHECK(std::abs(x(1, 0) + std::conj(s[1])) < 1e-15);
    CHECK(std::abs(x(1, 1) - std::conj(s[0])) < 1e-15);
    const double e = std::norm(s[0]) + std::norm(s[1]);
    CHECK(max_abs_diff(x * x.adjoint(), e * CMat::Identity(2, 2)) < 1e-13);
  }
}

TEST_CASE("layered encoder validates its layers") {
  OuterLayer bad = alamouti_outer();
  bad.entries[1].set = 7;
  CHECK_THROWS_AS(build_double_layer(bad, golden_inner()), std::invalid_argument);

  InnerLayer no_encode;
  no_encode.n_tx = 1;
  no_encode.n_time = 1;
  no_encode.n_syms = 1;
  CHECK_THROWS_AS(build_double_layer(alamouti_outer(), no_encode), std::invalid_argument);
}

TEST_CASE("symbol count mismatches are rejected") {
  const std::vector<cplx> three(3, cplx{0.0, 0.0});
  CHECK_THROWS_AS(encode(SchemeId::Golden, three), std::invalid_argument);
  CHECK_THROWS_AS(encode(SchemeId::ThreeD, three), std::invalid_argument);
  CHECK_THROWS_AS(golden_matrix(three), std::invalid_argument);
  CHECK_THROWS_AS(three_d_matrix(three), std::invalid_argument);
}

TEST_CASE("dispersion generators reproduce the encoders") {
  SUBCASE("alamouti basis generator") {
    const auto& d = dispersion(SchemeId::Alamouti);
    CHECK(d.gens.size() == 4);
    CHECK(max_abs_diff(d.gens[0], kInvSqrt2 * CMat::Identity(2, 2)) < 1e-15);
  }
  SUBCASE("three_d has 16 generators of shape 4x4") {
    const auto& d = dispersion(SchemeId::ThreeD);
    CHECK(d.gens.size() == 16);
    for (const auto& g : d.gens) {
      CHECK(g.rows() == 4);
      CHECK(g.cols() == 4);
    }
  }
  SUBCASE("reconstruction equals direct encoding") {
    Rng rng(14, 1);
    for (SchemeId id : {SchemeId::Alamouti, SchemeId::SpatialMux, SchemeId::Golden,
                        SchemeId::ThreeD}) {
      const auto& d = dispersion(id);
      for (int i = 0; i < 200; ++i) {
        const auto s = random_gaussian_symbols(rng, d.n_syms);
        CHECK(max_abs_diff(reconstruct(d, s), encode(id, s).entries) < 1e-12);
      }
    }
  }
}

TEST_CASE("encoders are real-linear") {
  Rng rng(15, 1);
  for (SchemeId id : {SchemeId::Alamouti, SchemeId::SpatialMux, SchemeId::Golden,
                      SchemeId::ThreeD}) {
    const int q = scheme_dims(id).n_syms;
    for (int i = 0; i < 20; ++i) {
      const auto s = random_gaussian_symbols(rng, q);
      const auto t = random_gaussian_symbols(rng, q);
      const double a = 2.0 * rng.next_double() - 1.0;
      std::vector<cplx> combo(q);
      for (int k = 0; k < q; ++k) combo[k] = a * s[k] + t[k];
      const CMat lhs = encode(id, combo).entries;
      const CMat rhs = a * encode(id, s).entries + encode(id, t).entries;
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("total radiated power per channel use is one") {
  Rng rng(16, 1);
  const auto& qam = Constellation::get(16);
  for (SchemeId id : {SchemeId::Alamouti, SchemeId::SpatialMux, SchemeId::Golden,
                      SchemeId::ThreeD}) {
    const auto dims = scheme_dims(id);
    double acc = 0.0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
      const auto s = random_qam_symbols(rng, qam, dims.n_syms);
      acc += encode(id, s).entries.squaredNorm();
    }
    const double avg = acc / trials / dims.n_time;
    CHECK(avg == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("scheme names round trip") {
  for (SchemeId id : {SchemeId::Alamouti, SchemeId::SpatialMux, SchemeId::Golden,
                      SchemeId::ThreeD}) {
    CHECK(scheme_from_name(scheme_name(id)) == id);
  }
  CHECK_THROWS_AS(scheme_from_name("bogus"), std::invalid_argument);
}
