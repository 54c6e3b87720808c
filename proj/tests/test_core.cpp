#include <cmath>
#include <complex>

#include "doctest.h"
#include "kickbec/core.hpp"

using namespace kickbec;

namespace {

PhysicalParams with_g(double g) {
  PhysicalParams p;
  p.g = g;
  return p;
}

// textbook homogeneous-gas amplitudes, written independently of A_k:
//   U^2 = ((e + gn)/(hbar omega) + 1)/2,  V^2 = ((e + gn)/(hbar omega) - 1)/2,  V <= 0
std::pair<double, double> textbook_uv(int k, double g) {
  const double e = 0.5 * k * k;
  const double gn = g / kTwoPi;
  const double w = std::sqrt(e * (e + 2.0 * gn));
  return {std::sqrt(0.5 * ((e + gn) / w + 1.0)), -std::sqrt(0.5 * ((e + gn) / w - 1.0))};
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("mode frequency") {
    CHECK(mode_frequency(1, with_g(0.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mode_frequency(1, with_g(1.0)) == doctest::Approx(0.639652).epsilon(1e-6));
    CHECK(mode_frequency(2, with_g(kPi * (kPi * kPi / 2.0 - 2.0))) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(mode_frequency(0, with_g(1.0)) == 0.0);
    CHECK(mode_frequency(-3, with_g(1.0)) == mode_frequency(3, with_g(1.0)));
  }

  TEST_CASE("mode coefficients against the textbook amplitudes") {
    for (double g : {0.0, 0.3, 1.0, 9.22, 12.0}) {
      for (int k = 1; k <= 32; ++k) {
        const auto c = mode_coefficients(k, with_g(g));
        const auto [u, v] = textbook_uv(k, g);
        CHECK(c.U == doctest::Approx(u).epsilon(1e-12));
        CHECK(c.V == doctest::Approx(v).epsilon(1e-12).scale(1.0));
        CHECK(c.U * c.U - c.V * c.V == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.A == doctest::Approx(c.U + c.V).epsilon(1e-12));
      }
    }
    const auto c1 = mode_coefficients(1, with_g(1.0));
    CHECK(c1.A == doctest::Approx(std::pow(0.5 / (0.5 + 1.0 / kPi), 0.25)).epsilon(1e-14));
    CHECK(std::abs(mode_coefficients(10, with_g(1.0)).V) < 2e-3);
    CHECK(mode_coefficients(4, with_g(0.0)).V == 0.0);
    CHECK_THROWS_AS(mode_coefficients(0, with_g(1.0)), std::invalid_argument);
  }

  TEST_CASE("initial depletion is the sum of V_k^2") {
    double oracle = 0.0;
    for (int k = 1; k <= 32; ++k) oracle += 2.0 * std::pow(textbook_uv(k, 1.0).second, 2);
    const ModeSpectrum s(with_g(1.0), 32);
    double got = 0.0;
    for (int k = 1; k <= 32; ++k) got += 2.0 * s.V(k) * s.V(k);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(got == doctest::Approx(0.0341689).epsilon(1e-5));
  }

  TEST_CASE("phi function") {
    CHECK(phi_function(7, kPi) == 7.0);
    CHECK(phi_function(4, kPi) == -4.0);
    CHECK(phi_function(5, 0.0) == 5.0);
    CHECK(phi_function(6, 2.0 * kPi) == 6.0);
    CHECK(std::abs(phi_function(4, kPi / 2.0)) < 1e-14);
    // |sum_{n<N} e^{2inx}| oracle
    std::complex<double> s{};
    for (int n = 0; n < 5; ++n) s += std::polar(1.0, 2.0 * n * 0.3);
    CHECK(phi_function(5, 0.3) == doctest::Approx(std::abs(s)).epsilon(1e-14));
    CHECK(phi_function(5, 0.3) == doctest::Approx(3.3753).epsilon(1e-4));
    // continuous through x = m pi
    CHECK(phi_function(9, kPi + 1e-9) == doctest::Approx(9.0).epsilon(1e-9));
  }

  TEST_CASE("ring grid") {
    const RingGrid g(256);
    CHECK(g.d_theta() == doctest::Approx(kTwoPi / 256));
    CHECK(g.wavenumber(3) == 3);
    CHECK(g.wavenumber(253) == -3);
    CHECK(g.index_of(-3) == 253);
    CHECK_NOTHROW(g.require_resolves(32));
    CHECK_THROWS_AS(g.require_resolves(33), std::invalid_argument);
    CHECK_THROWS_AS(RingGrid(100), std::invalid_argument);
  }

  TEST_CASE("parameter validation") {
    PhysicalParams p;
    p.T = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = PhysicalParams{};
    p.kick_kind = KickKind::DoublePair;
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK(kick_kind_from_string("qkr2") == KickKind::DoublePair);
    CHECK_THROWS_AS(kick_kind_from_string("triple"), std::invalid_argument);
  }

  TEST_CASE("single-mode predictions") {
    const ParamRange overT{SweptParam::T, 1.0, 20.0};
    auto r = predict_single_mode_resonances(with_g(1.0), 2, 2, overT);
    bool found = false;
    for (const auto& p : r) found |= p.l == 1 && p.order == 1 && std::abs(p.value - 9.823) < 1e-3;
    CHECK(found);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].value <= r[i].value);

    auto free = predict_single_mode_resonances(with_g(0.0), 1, 1, overT);
    REQUIRE(free.size() == 1);
    CHECK(free[0].value == doctest::Approx(4.0 * kPi).epsilon(1e-12));

    PhysicalParams p;
    p.T = 2.0;
    auto overG = predict_single_mode_resonances(p, 2, 1, ParamRange{SweptParam::g, 0.0, 20.0});
    found = false;
    for (const auto& q : overG) found |= q.l == 2 && std::abs(q.value - 9.21995) < 1e-4;
    CHECK(found);
  }

  TEST_CASE("two-mode predictions") {
    PhysicalParams p;
    p.T = kTwoPi;
    const ParamRange range{SweptParam::g, 0.0, 50.0};
    auto r12 = predict_two_mode_resonances(p, {{1, 2}}, 3, range);
    bool found = false;
    for (const auto& q : r12) found |= q.order == 3 && std::abs(q.value - 1.797) < 1e-3;
    CHECK(found);

    auto r23 = predict_two_mode_resonances(p, {{2, 3}}, 7, range);
    found = false;
    for (const auto& q : r23) found |= q.order == 7 && std::abs(q.value - 1.65) < 0.1;
    CHECK(found);
    PhysicalParams at = p;
    at.g = 1.65;
    const double residual = (mode_frequency(2, at) + mode_frequency(3, at)) * p.T / kTwoPi - 7.0;
    CHECK(std::abs(residual) < 1e-2);

    std::vector<ResonancePrediction> none;
    for (const auto& q : r12)
      if (q.order == 1) none.push_back(q);
    CHECK(none.empty());
    CHECK_THROWS_AS(predict_two_mode_resonances(p, {{1, 2}}, 3, ParamRange{SweptParam::T, 1.0, 2.0}),
                    std::invalid_argument);
  }
}
