#include "doctest.h"
#include "oracles.hpp"
#include "ris/adaptive.hpp"
#include "ris/kernels.hpp"
#include "ris/noise.hpp"
#include "ris/simulation.hpp"

using namespace ris;

namespace {

struct RandomCampaign {
    ArrayModel array;
    PilotCampaign campaign;
};

RandomCampaign random_campaign(int n_el, int pilots, std::uint64_t seed) {
    Rng rng = derive_stream(seed, 0);
    const ArrayModel array(n_el, 0.25);
    const auto h = KnownBsRisChannel::random_unit_phases(n_el, rng);
    const CMatrix b = random_dft_configurations(n_el, pilots, rng);
    CVector y(pilots);
    for (int l = 0; l < pilots; ++l) y[l] = complex_gaussian(1.0, rng);
    return {array, PilotCampaign(b, y, 1.0, h)};
}

}  // namespace

TEST_CASE("serial utility matches the brute-force oracle") {
    const auto rc = random_campaign(12, 5, 1);
    const auto grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 101);
    const auto f = kernels::utility_serial(rc.campaign, rc.array, grid.points());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double ref = oracle::utility(rc.campaign.config_matrix(), rc.campaign.bs_ris_channel().coefficients(),
                                           rc.campaign.received(), 0.25, grid.points()[k]);
        CHECK(f.utility[k] == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("serial and OpenMP kernels agree") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rc = random_campaign(20, 1 + static_cast<int>(seed % 7), seed);
        const auto grid = AoaSearchGrid::uniform(-1.2, 1.3, 777);
        const CMatrix steering = kernels::steering_table(rc.campaign.bs_ris_channel(), rc.array, grid.points());
        const auto s = kernels::utility_serial(rc.campaign, rc.array, grid.points());
        const auto p = kernels::utility_omp(rc.campaign, steering);
        REQUIRE(s.utility.size() == p.utility.size());
        for (std::size_t k = 0; k < s.utility.size(); ++k) {
            CHECK(p.utility[k] == doctest::Approx(s.utility[k]).epsilon(1e-10));
            CHECK(p.norm_sq[k] == doctest::Approx(s.norm_sq[k]).epsilon(1e-10));
        }
        CHECK(s.best() == p.best());

        const CMatrix ps = kernels::project_rows_serial(rc.campaign.config_matrix(), steering);
        const CMatrix po = kernels::project_rows_omp(rc.campaign.config_matrix(), steering);
        CHECK((ps - po).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("accumulator reproduces the batch utility pilot by pilot") {
    const auto rc = random_campaign(16, 6, 3);
    const auto grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 301);
    const auto& h = rc.campaign.bs_ris_channel();
    const CMatrix steering = kernels::steering_table(h, rc.array, grid.points());
    const CMatrix proj = kernels::project_rows_omp(rc.campaign.config_matrix(), steering);
    const double hs = h.coefficients().cwiseAbs().sum();
    kernels::UtilityAccumulator acc(grid.size(), hs * hs);
    PilotCampaign partial = PilotCampaign::empty(1.0, h);
    for (Eigen::Index l = 0; l < rc.campaign.num_pilots(); ++l) {
        const CVector row = proj.row(l).transpose();
        acc.add_pilot(std::span<const cplx>(row.data(), grid.size()), rc.campaign.received()[l]);
        partial = partial.with_pilot(RisConfiguration(rc.campaign.config_matrix().row(l).transpose()),
                                     rc.campaign.received()[l]);
        const auto batch = kernels::utility_omp(partial, steering);
        const auto inc = acc.field();
        CHECK(acc.num_pilots() == static_cast<std::size_t>(l + 1));
        CHECK(inc.floor == doctest::Approx(batch.floor));
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(inc.utility[k] == doctest::Approx(batch.utility[k]).epsilon(1e-10));
        }
        CHECK(inc.best() == batch.best());
    }
    const std::vector<cplx> wrong(3);
    CHECK_THROWS_AS(acc.add_pilot(wrong, 1.0), DimensionError);
}

TEST_CASE("degenerate directions score zero and never win") {
    // Two orthogonal pool configurations (even index offset): the pool angles at even
    // offsets from both are exact nulls of B D_h a(phi).
    const ArrayModel array(8, 0.25);
    const auto h = KnownBsRisChannel::unit(8);
    const auto pool = build_configuration_pool(h, plausible_angles(8), array);
    CMatrix b(2, 8);
    b.row(0) = pool.entry(0).config.entries().transpose();
    b.row(1) = pool.entry(2).config.entries().transpose();
    CVector y(2);
    y << cplx(1e-3, 0.0), cplx(0.0, 1e-3);
    const PilotCampaign campaign(b, y, 1.0, h);
    const std::vector<double> angles{pool.entry(4).angle, pool.entry(6).angle, 0.05, 0.3};
    const auto f = kernels::utility_serial(campaign, array, angles);
    CHECK_FALSE(f.defined(0));
    CHECK_FALSE(f.defined(1));
    CHECK(f.utility[0] == 0.0);
    CHECK(f.defined(2));
    CHECK(f.best() >= 2);

    const std::vector<double> nulls{pool.entry(4).angle, pool.entry(6).angle};
    CHECK_THROWS_AS(kernels::utility_serial(campaign, array, nulls).best(), DegenerateDirectionError);
    const double hs = 8.0;
    CHECK_THROWS_AS(kernels::UtilityAccumulator(5, hs * hs).field().best(), DegenerateDirectionError);
}

TEST_CASE("argmax_first breaks ties toward the first index") {
    const std::vector<double> v{1.0, 3.0, 2.0, 3.0};
    CHECK(kernels::argmax_first(v) == 1);
}
