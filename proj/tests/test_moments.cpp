#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dbar/measure_spec.hpp"
#include "dbar/moments.hpp"

using namespace dbar;

namespace {
constexpr double kPi = M_PI;
}

TEST_CASE("Gaussian Fock moments n=1: m_j = pi j!") {
    auto fock = make_fock(1, 12);
    CHECK(fock->moment(MultiIndex{{0}}) == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(fock->moment(MultiIndex{{2}}) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
    CHECK(fock->moment(MultiIndex{{5}}) == doctest::Approx(120.0 * kPi).epsilon(1e-13));
}

TEST_CASE("unit disc moments: m_j = pi/(j+1)") {
    auto disc = make_ball(1, 12);
    CHECK(disc->moment(MultiIndex{{3}}) == doctest::Approx(kPi / 4.0).epsilon(1e-13));
    CHECK(disc->moment(MultiIndex{{0}}) == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("total mass is positive for every catalog measure") {
    for (int n = 1; n <= 3; ++n) {
        auto fock = make_fock(n, 4);
        CHECK(fock->moment(MultiIndex::zeros(n)) > 0.0);
        auto ball = make_ball(n, 4);
        CHECK(ball->moment(MultiIndex::zeros(n)) > 0.0);
    }
    CHECK(make_polydisc(2, 4)->moment(MultiIndex::zeros(2)) ==
          doctest::Approx(kPi * kPi).epsilon(1e-13));
}

TEST_CASE("c convention: zero on negative entries, reciprocal otherwise") {
    auto fock = make_fock(1, 12);
    CHECK(fock->coeff(MultiIndex{{2}}) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK(fock->coeff(MultiIndex{{-1}}) == 0.0);
    auto fock2 = make_fock(2, 12);
    CHECK(fock2->coeff(MultiIndex{{-1, 3}}) == 0.0);
    // exactly the indices with a negative entry map to zero
    for (int k = -1; k <= 5; ++k)
        for (const auto& g : enumerate_grade(2, k))
            CHECK((fock2->coeff(g) == 0.0) == g.any_negative());
    CHECK_THROWS_AS(fock2->coeff(MultiIndex{{-2, 0}}), NotInGamma);
}

TEST_CASE("radial_to_multimoment closed form") {
    // Fock n=2: m_2 = 6 pi^2, c_{(1,1)} = 1/pi^2
    std::vector<double> m;
    for (int d = 0; d <= 4; ++d)
        m.push_back(kPi * kPi * std::exp(std::lgamma(d + 2.0)));
    CHECK(m[2] == doctest::Approx(6.0 * kPi * kPi).epsilon(1e-13));
    CHECK(radial_to_multimoment(m, 2, MultiIndex{{1, 1}}) ==
          doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-13));
    CHECK(radial_to_multimoment(m, 2, MultiIndex{{0, 0}}) ==
          doctest::Approx(1.0 / m[0]).epsilon(1e-13));
    // n=1: prefactor is trivial
    std::vector<double> m1{2.0, 3.0, 5.0};
    CHECK(radial_to_multimoment(m1, 1, MultiIndex{{2}}) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK_THROWS_AS(radial_to_multimoment(m1, 1, MultiIndex{{7}}), DegreeExceeded);
}

TEST_CASE("product_multimoment") {
    // bidisc: per-factor c^j = (j+1)/pi
    std::vector<double> disc_factor;
    for (int j = 0; j <= 5; ++j) disc_factor.push_back(kPi / (j + 1));
    std::vector<std::vector<double>> factors{disc_factor, disc_factor};
    CHECK(product_multimoment(factors, MultiIndex{{1, 2}}) ==
          doctest::Approx(6.0 / (kPi * kPi)).epsilon(1e-13));
    CHECK(product_multimoment(factors, MultiIndex{{0, 0}}) ==
          doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-13));
    CHECK_THROWS_AS(product_multimoment(factors, MultiIndex{{1, 9}}), DegreeExceeded);
    CHECK_THROWS_AS(product_multimoment(factors, MultiIndex{{1, 1, 1}}), DimensionMismatch);
}

TEST_CASE("product and radial representations agree on the Gaussian") {
    const int D = 10;
    auto radial = make_fock(2, D);
    std::vector<double> fock_factor;
    for (int j = 0; j <= D; ++j) fock_factor.push_back(kPi * std::exp(log_factorial(j)));
    ProductMomentProvider product(2, {fock_factor, fock_factor}, "product");
    for (int k = 0; k <= D; ++k)
        for (const auto& g : enumerate_nonnegative_grade(2, k))
            CHECK(radial->coeff(g) == doctest::Approx(product.coeff(g)).epsilon(1e-12));
}

TEST_CASE("quadrature radial moments") {
    RadialWeight gauss{[](double r) { return std::exp(-r * r); }, 0.0, true};
    CHECK(quadrature_radial_moment(gauss, 1) == doctest::Approx(kPi).epsilon(1e-9));
    RadialWeight disc{[](double r) { return r <= 1.0 ? 1.0 : 0.0; }, 1.0, false};
    CHECK(quadrature_radial_moment(disc, 0) == doctest::Approx(kPi).epsilon(1e-9));
    RadialWeight quartic{[](double r) { return std::exp(-std::pow(r, 4)); }, 0.0, true};
    CHECK(quadrature_radial_moment(quartic, 0) ==
          doctest::Approx(0.5 * kPi * std::tgamma(0.5)).epsilon(1e-8));
}

TEST_CASE("radial moment via quadrature matches closed forms") {
    auto genfock = make_generalized_fock(1, 2.0, 6);
    RadialWeight quartic{[](double r) { return std::exp(-std::pow(r, 4)); }, 0.0, true};
    for (int d = 0; d <= 6; ++d)
        CHECK((*genfock->radial_moments())[static_cast<size_t>(d)] ==
              doctest::Approx(quadrature_radial_moment_nd(quartic, 1, d)).epsilon(1e-8));
}

TEST_CASE("log-convexity validation") {
    std::vector<double> fock_m;
    for (int d = 0; d <= 10; ++d) fock_m.push_back(kPi * std::exp(log_factorial(d)));
    CHECK(validate_log_convexity(fock_m, 9).empty());
    std::vector<double> disc_m;
    for (int d = 0; d <= 10; ++d) disc_m.push_back(kPi / (d + 1));
    CHECK(validate_log_convexity(disc_m, 9).empty());
    CHECK(validate_log_convexity({1.0, 1.0, 3.0, 1.0}, 2) == std::vector<int>{2});
}

TEST_CASE("radial moments are permutation symmetric") {
    auto ball = make_ball(3, 8);
    CHECK(ball->moment(MultiIndex{{3, 1, 2}}) ==
          doctest::Approx(ball->moment(MultiIndex{{2, 3, 1}})).epsilon(1e-14));
}

TEST_CASE("moment preconditions") {
    auto fock = make_fock(2, 6);
    CHECK_THROWS_AS(fock->moment(MultiIndex{{4, 4}}), DegreeExceeded);
    CHECK_THROWS_AS(fock->moment(MultiIndex{{-1, 0}}), NotInGamma);
    CHECK_THROWS_AS(fock->moment(MultiIndex{{1}}), DimensionMismatch);
}

TEST_CASE("moment table loading") {
    nlohmann::json spec = nlohmann::json::parse(
        R"({"n":1,"multimoments":{"0":3.14159,"1":3.14159}})");
    auto provider = make_provider_from_spec(spec, 1);
    CHECK(provider->kind() == "table");
    CHECK(provider->moment(MultiIndex{{0}}) == doctest::Approx(3.14159));
    CHECK(provider->moment(MultiIndex{{1}}) == doctest::Approx(3.14159));
    CHECK_THROWS_AS(provider->moment(MultiIndex{{2}}), DegreeExceeded);

    nlohmann::json sparse = nlohmann::json::parse(
        R"({"n":2,"multimoments":{"0,0":1.0,"2,0":1.0}})");
    auto p2 = make_provider_from_spec(sparse, 2);
    CHECK_THROWS_AS(p2->moment(MultiIndex{{1, 0}}), DegreeExceeded);

    nlohmann::json zero = nlohmann::json::parse(R"({"n":1,"multimoments":{"0":0.0}})");
    CHECK_THROWS_AS(make_provider_from_spec(zero, 0), NonpositiveMoment);

    nlohmann::json bad_key = nlohmann::json::parse(R"({"n":1,"multimoments":{"x":1.0}})");
    CHECK_THROWS_AS(make_provider_from_spec(bad_key, 0), ParseError);
}

TEST_CASE("measure spec validation") {
    CHECK_THROWS_AS(make_provider_from_spec(nlohmann::json::parse("{}"), 2), ParseError);
    CHECK_THROWS_AS(make_provider_from_spec(
                        nlohmann::json::parse(R"({"n":1,"catalog":{"name":"nope"}})"), 2),
                    ParseError);
    CHECK_THROWS_AS(
        make_provider_from_spec(
            nlohmann::json::parse(
                R"({"n":1,"catalog":{"name":"fock"},"radial_moments":[1.0]})"),
            2),
        ParseError);
    CHECK_THROWS_AS(make_provider_from_spec(
                        nlohmann::json::parse(R"({"n":1,"radial_moments":[1.0,1.0]})"), 5),
                    DegreeExceeded);
}

TEST_CASE("radial weight expressions") {
    auto w = parse_weight_expr("exp(-r^4)");
    CHECK(w(1.2) == doctest::Approx(std::exp(-std::pow(1.2, 4))).epsilon(1e-14));
    auto w2 = parse_weight_expr("exp(-2*r^2)");
    CHECK(w2(0.7) == doctest::Approx(std::exp(-2 * 0.49)).epsilon(1e-14));
    auto c = parse_weight_expr("1");
    CHECK(c(5.0) == 1.0);
    CHECK_THROWS_AS(parse_weight_expr("sin(r)"), ParseError);

    auto lin = tabulated_weight({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(lin(0.25) == doctest::Approx(0.75));
    CHECK(lin(2.0) == 0.0);
}

TEST_CASE("radial_weight spec builds a provider consistent with the catalog") {
    nlohmann::json spec = nlohmann::json::parse(
        R"json({"n":1,"radial_weight":{"expr":"exp(-r^2)","support":[0,"inf"]}})json");
    auto provider = make_provider_from_spec(spec, 6);
    auto fock = make_fock(1, 6);
    for (int d = 0; d <= 6; ++d)
        CHECK(provider->moment(MultiIndex{{d}}) ==
              doctest::Approx(fock->moment(MultiIndex{{d}})).epsilon(1e-9));
}

TEST_CASE("perturbed provider decouples moments from coefficients") {
    auto fock = std::shared_ptr<const MomentProvider>(make_fock(1, 8));
    PerturbedProvider perturbed(fock, MultiIndex{{2}}, 1e-6);
    CHECK(perturbed.moment(MultiIndex{{2}}) ==
          doctest::Approx(fock->moment(MultiIndex{{2}}) * (1.0 + 1e-6)).epsilon(1e-14));
    CHECK(perturbed.coeff(MultiIndex{{2}}) ==
          doctest::Approx(fock->coeff(MultiIndex{{2}})).epsilon(1e-16));
}
