#include "doctest.h"
#include "oracles.hpp"
#include "ris/estimators.hpp"
#include "ris/kernels.hpp"
#include "ris/noise.hpp"
#include "ris/simulation.hpp"

#include <limits>

using namespace ris;

TEST_CASE("pilot campaign validation") {
    const auto h = KnownBsRisChannel::unit(4);
    CHECK_THROWS_AS(PilotCampaign(CMatrix::Ones(2, 4), CVector::Ones(3), 1.0, h), DimensionError);
    CHECK_THROWS_AS(PilotCampaign(CMatrix::Ones(2, 5), CVector::Ones(2), 1.0, h), DimensionError);
    CHECK_THROWS_AS(PilotCampaign(CMatrix::Ones(2, 4), CVector::Ones(2), 0.0, h), DomainError);
    CMatrix b = CMatrix::Ones(2, 4);
    b(1, 1) = 0.5;
    CHECK_THROWS_AS(PilotCampaign(b, CVector::Ones(2), 1.0, h), DomainError);

    const auto e = PilotCampaign::empty(2.0, h);
    CHECK(e.num_pilots() == 0);
    const auto one = e.with_pilot(RisConfiguration(CVector::Ones(4)), cplx(1.0, 2.0));
    CHECK(one.num_pilots() == 1);
    CHECK(e.num_pilots() == 0);
    CHECK(one.received()[0] == cplx(1.0, 2.0));
}

TEST_CASE("search grid construction") {
    const auto g = AoaSearchGrid::uniform(-1.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.points().front() == -1.0);
    CHECK(g.points().back() == 1.0);
    CHECK(g.step() == doctest::Approx(0.5));
    const std::vector<double> extra{0.25, 0.5, 3.0};
    const auto m = g.with_points(extra);
    CHECK(m.size() == 6);
    CHECK(std::is_sorted(m.points().begin(), m.points().end()));
    CHECK_THROWS_AS(AoaSearchGrid::uniform(-2.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(AoaSearchGrid::uniform(1.0, -1.0, 5), DomainError);
    CHECK_THROWS_AS(AoaSearchGrid::uniform(-1.0, 1.0, 1), DomainError);
}

TEST_CASE("ml_utility matches the oracle and rejects a null direction") {
    Rng rng = derive_stream(9, 0);
    const ArrayModel array(10, 0.25);
    const auto h = KnownBsRisChannel::random_unit_phases(10, rng);
    const CMatrix b = random_dft_configurations(10, 4, rng);
    CVector y(4);
    for (int l = 0; l < 4; ++l) y[l] = complex_gaussian(1.0, rng);
    const PilotCampaign c(b, y, 3.0, h);
    for (double phi : {-1.4, -0.3, 0.0, 0.9}) {
        CHECK(ml_utility(c, array, phi) ==
              doctest::Approx(oracle::utility(b, h.coefficients(), y, 0.25, phi)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ml_utility(PilotCampaign::empty(1.0, h), array, 0.1), DegenerateDirectionError);
}

TEST_CASE("scalar coefficient closed form") {
    const auto s = scalar_coefficient_from_projection(cplx(3.0, -4.0), 2.0, 5.0);
    CHECK(s.gain == doctest::Approx(25.0 / (5.0 * 4.0)));
    CHECK(s.phase == doctest::Approx(std::atan2(4.0, 3.0)));
    CHECK_THROWS_AS(scalar_coefficient_from_projection(1.0, 0.0, 1.0), DegenerateDirectionError);
}

TEST_CASE("noise-free ML recovers an on-grid LOS channel from random DFT pilots") {
    const ArrayModel array(24, 0.25);
    const auto grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 1001);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng = derive_stream(seed, 1);
        const auto h = KnownBsRisChannel::random_unit_phases(24, rng);
        std::uniform_int_distribution<std::size_t> pick(100, 900);
        const double phi = grid.points()[pick(rng)];
        const LosChannel truth(0.7 + 0.1 * static_cast<double>(seed), 0.2 * static_cast<double>(seed), phi);
        const CMatrix b = random_dft_configurations(24, 6, rng);
        const CVector g = expand_channel(truth, array);
        const CVector y = std::sqrt(2.0) * (b * h.coefficients().cwiseProduct(g));
        const auto est = parametric_ml_estimate(PilotCampaign(b, y, 2.0, h), array, grid);
        CHECK(est.aoa_estimate == phi);
        CHECK(est.gain_estimate == doctest::Approx(truth.gain()).epsilon(1e-9));
        CHECK(std::abs(std::polar(1.0, est.phase_estimate) - std::polar(1.0, truth.phase())) < 1e-9);
        CHECK((est.channel_estimate - g).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("refinement recovers an off-grid angle in the noise-free case") {
    Rng rng = derive_stream(4, 0);
    const ArrayModel array(16, 0.25);
    const auto h = KnownBsRisChannel::random_unit_phases(16, rng);
    const auto grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 181);
    const LosChannel truth(1.0, 1.0, 0.123456);
    const CMatrix b = random_dft_configurations(16, 8, rng);
    const CVector y = b * h.coefficients().cwiseProduct(expand_channel(truth, array));
    const PilotCampaign c(b, y, 1.0, h);
    const auto coarse = parametric_ml_estimate(c, array, grid);
    const auto fine = parametric_ml_estimate(c, array, grid, {.record_trace = true, .refine = true});
    CHECK(std::abs(fine.aoa_estimate - truth.aoa()) < 1e-7);
    CHECK(std::abs(fine.aoa_estimate - truth.aoa()) < std::abs(coarse.aoa_estimate - truth.aoa()));
    REQUIRE(fine.utility_trace.has_value());
    CHECK(fine.utility_trace->size() == grid.size());
}

TEST_CASE("scaling y leaves the AOA estimate unchanged") {
    const ArrayModel array(20, 0.25);
    const auto grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 720);
    Rng rng = derive_stream(77, 0);
    std::uniform_real_distribution<double> mag(0.01, 100.0), ph(0.0, kTwoPi);
    for (int c = 0; c < 20; ++c) {
        const auto h = KnownBsRisChannel::random_unit_phases(20, rng);
        const CMatrix b = random_dft_configurations(20, 5, rng);
        CVector y(5);
        for (int l = 0; l < 5; ++l) y[l] = complex_gaussian(1.0, rng);
        const cplx s = std::polar(mag(rng), ph(rng));
        CHECK(estimate_aoa(PilotCampaign(b, y, 1.0, h), array, grid) ==
              estimate_aoa(PilotCampaign(b, s * y, 1.0, h), array, grid));
    }
}

TEST_CASE("pseudo-inverse satisfies the Moore-Penrose conditions on a rank-deficient matrix") {
    Rng rng = derive_stream(8, 0);
    CMatrix u(6, 2), v(2, 4);
    for (int i = 0; i < u.size(); ++i) u.data()[i] = complex_gaussian(1.0, rng);
    for (int i = 0; i < v.size(); ++i) v.data()[i] = complex_gaussian(1.0, rng);
    const CMatrix a = u * v;
    const CMatrix p = pseudo_inverse(a);
    CHECK((a * p * a - a).norm() < 1e-10);
    CHECK((p * a * p - p).norm() < 1e-10);
    CHECK(((a * p).adjoint() - a * p).norm() < 1e-10);
    CHECK(((p * a).adjoint() - p * a).norm() < 1e-10);
    CHECK(pseudo_inverse(CMatrix(0, 3)).rows() == 3);
}

TEST_CASE("least squares matches the normal-equation oracle for L >= N") {
    Rng rng = derive_stream(12, 0);
    for (int pilots : {8, 11, 16}) {
        CVector hv(8);
        for (int n = 0; n < 8; ++n) hv[n] = complex_gaussian(1.0, rng) + 0.2;
        const KnownBsRisChannel h(hv);
        CMatrix b(pilots, 8);
        std::uniform_real_distribution<double> ph(0.0, kTwoPi);
        for (int i = 0; i < b.size(); ++i) b.data()[i] = std::polar(1.0, ph(rng));
        CVector y(pilots);
        for (int l = 0; l < pilots; ++l) y[l] = complex_gaussian(1.0, rng);
        const CVector ls = least_squares_estimate(PilotCampaign(b, y, 4.0, h));
        const CVector ref = oracle::normal_equations_ls(b, hv, y, 4.0);
        CHECK((ls - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("least squares is unbiased") {
    Rng rng = derive_stream(13, 0);
    const ArrayModel array(6, 0.25);
    const auto h = KnownBsRisChannel::random_unit_phases(6, rng);
    const CVector g = expand_channel(LosChannel(1.0, 0.5, 0.4), array);
    const CMatrix b = random_dft_configurations(6, 6, rng);
    const CVector clean = b * h.coefficients().cwiseProduct(g);
    constexpr int kTrials = 40000;
    CVector mean = CVector::Zero(6);
    for (int t = 0; t < kTrials; ++t) {
        CVector y = clean;
        for (int l = 0; l < 6; ++l) y[l] += complex_gaussian(1.0, rng);
        mean += least_squares_estimate(PilotCampaign(b, y, 1.0, h));
    }
    mean /= static_cast<double>(kTrials);
    // per-entry std of the estimate is 1/sqrt(L) = 0.41, so the mean's is ~0.002
    CHECK((mean - g).cwiseAbs().maxCoeff() < 0.012);
}

TEST_CASE("peak detection") {
    const std::vector<double> v{1.0, 3.0, 2.0, 5.0, 4.0};
    const auto p = find_peaks(v);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 3);
    CHECK(p[1] == 1);
    CHECK(top_two_peak_gap_db(v) == doctest::Approx(10.0 * std::log10(5.0 / 3.0)));

    const std::vector<double> edges{4.0, 1.0, 2.0, 1.0, 6.0};
    const auto pe = find_peaks(edges);
    REQUIRE(pe.size() == 3);
    CHECK(pe[0] == 4);
    CHECK(pe[1] == 0);

    const std::vector<double> plateau{0.0, 2.0, 2.0, 2.0, 1.0};
    const auto pp = find_peaks(plateau);
    REQUIRE(pp.size() == 1);
    CHECK(pp[0] == 1);

    const std::vector<double> single{1.0, 2.0, 3.0};
    CHECK(top_two_peak_gap_db(single) == std::numeric_limits<double>::infinity());
}

TEST_CASE("exact ties go to the smallest angle") {
    Rng rng = derive_stream(31, 0);
    const ArrayModel array(12, 0.25);
    const auto h = KnownBsRisChannel::random_unit_phases(12, rng);
    const auto grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 500);
    // L = 1: the utility is |y_1|^2 at every angle
    const CMatrix b = random_dft_configurations(12, 1, rng);
    for (int i = 0; i < 20; ++i) {
        CVector y(1);
        y[0] = complex_gaussian(1.0, rng);
        CHECK(estimate_aoa(PilotCampaign(b, y, 1.0, h), array, grid) == grid.points().front());
    }
    const CMatrix b3 = random_dft_configurations(12, 3, rng);
    CHECK(estimate_aoa(PilotCampaign(b3, CVector::Zero(3), 1.0, h), array, grid) == grid.points().front());
    const auto zero = parametric_ml_estimate(PilotCampaign(b3, CVector::Zero(3), 1.0, h), array, grid);
    CHECK(zero.gain_estimate == 0.0);
    CHECK(zero.phase_estimate == 0.0);
    CHECK(zero.channel_estimate.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise-free utility at the truth equals P_p beta ||B D_h a||^2") {
    Rng rng = derive_stream(32, 0);
    const ArrayModel array(10, 0.25);
    const auto h = KnownBsRisChannel::random_unit_phases(10, rng);
    const CMatrix b = random_dft_configurations(10, 4, rng);
    const LosChannel truth(2.0, 1.0, 0.45);
    const CVector y = std::sqrt(3.0) * (b * h.coefficients().cwiseProduct(expand_channel(truth, array)));
    const CVector z = b * h.coefficients().cwiseProduct(array_response(array, 0.45));
    CHECK(ml_utility(PilotCampaign(b, y, 3.0, h), array, 0.45) ==
          doctest::Approx(3.0 * 2.0 * z.squaredNorm()).epsilon(1e-12));
}
