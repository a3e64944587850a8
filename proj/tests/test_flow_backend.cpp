#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace amfst;
using amfst::testing::moving_scene;

TEST(OracleBackend, ExactFlowMatchesGroundTruth) {
    const Scene        scene(moving_scene(8, 25));
    const OracleBackend oracle(scene);
    const auto&        gt = scene.ground_truth();
    const auto         r  = oracle.estimate_flow(oracle.features_at(2), oracle.features_at(7), gt.positions[2]);
    ASSERT_EQ(r.size(), 25U);
    for (std::size_t p = 0; p < 25; ++p) {
        EXPECT_TRUE(r.valid[p]);
        EXPECT_LT(distance(r.displaced[p], gt.positions[7][p]), 1e-9);
    }
}

TEST(OracleBackend, OutOfBoundsQueriesAreInvalid) {
    const Scene         scene(moving_scene(3, 1));
    const OracleBackend oracle(scene);
    const std::vector<Point2> q{{-1.0, 5.0}, {5.0, 500.0}};
    const auto r = oracle.estimate_flow(oracle.features_at(0), oracle.features_at(1), q);
    EXPECT_FALSE(r.valid[0]);
    EXPECT_FALSE(r.valid[1]);
}

TEST(OracleBackend, NoisyForwardBackwardMeanMatchesRayleigh) {
    // Forward and backward each add N(0, s^2) per axis: the round trip error is Rayleigh with scale
    // s * sqrt(2), whose mean is s * sqrt(pi).
    const double        sigma = 0.5;
    const Scene         scene(moving_scene(2, 400));
    const OracleBackend noisy(scene, sigma, 9);
    const auto          ref = amfst::testing::record_at(noisy, scene.ground_truth(), 0);
    const auto          fb  = forward_backward_epe(ref, noisy.features_at(1), noisy, 400);
    double              sum = 0.0;
    for (double e : fb.epe) {
        sum += e;
    }
    const double expected = sigma * std::sqrt(std::numbers::pi);
    EXPECT_NEAR(sum / 400.0, expected, 0.08);
}

TEST(OracleBackend, NoiseIsSeededAndReproducible) {
    const Scene               scene(moving_scene(3, 5));
    const OracleBackend       a(scene, 0.5, 1), b(scene, 0.5, 1), c(scene, 0.5, 2);
    const auto&               q = scene.ground_truth().positions[0];
    const auto                ra = a.estimate_flow(a.features_at(0), a.features_at(1), q);
    const auto                rb = b.estimate_flow(b.features_at(0), b.features_at(1), q);
    const auto                rc = c.estimate_flow(c.features_at(0), c.features_at(1), q);
    EXPECT_EQ(ra.displaced, rb.displaced);
    EXPECT_NE(ra.displaced, rc.displaced);
    const auto same = a.estimate_flow(a.features_at(1), a.features_at(1), q);
    EXPECT_EQ(same.displaced, std::vector<Point2>(q.begin(), q.end()));
}

TEST(OracleBackend, RejectsNegativeSigma) {
    const Scene scene(moving_scene(2, 1));
    EXPECT_THROW(OracleBackend(scene, -0.1), InvalidInput);
}

TEST(FlowBackend, FeaturesFromAnotherBackendAreRejected) {
    const Scene         scene(moving_scene(2, 1));
    const OracleBackend a(scene), b(scene);
    const auto&         q = scene.ground_truth().positions[0];
    EXPECT_THROW((void)a.estimate_flow(b.features_at(0), a.features_at(1), q), ContractViolation);
    BlockMatchingBackend bm;
    const auto           img = render_frame(scene, 0);
    const auto           fbm = bm.extract_features(img, 0);
    EXPECT_THROW((void)a.estimate_flow(fbm, a.features_at(1), q), ContractViolation);
}

TEST(FlowBackend, MismatchedDimensionsAreRejected) {
    BlockMatchingBackend bm;
    const auto           small = bm.extract_features(GrayImage(32, 32, 1.0F), 0);
    const auto           large = bm.extract_features(GrayImage(48, 32, 1.0F), 1);
    const std::vector<Point2> q{{5.0, 5.0}};
    EXPECT_THROW((void)bm.estimate_flow(small, large, q), ContractViolation);
    EXPECT_THROW((void)bm.extract_features(GrayImage{}, 0), InvalidInput);
}

TEST(BlockMatching, RecoversIntegerTranslation) {
    SceneConfig config             = moving_scene(2, 1);
    config.width                   = 160;
    config.height                  = 160;
    config.deformation             = {};
    config.deformation.translation = {5.0, -3.0};
    const Scene                scene(config);
    const BlockMatchingBackend bm;
    const auto                 f0 = bm.extract_features(render_frame(scene, 0), 0);
    const auto                 f1 = bm.extract_features(render_frame(scene, 1), 1);
    std::vector<Point2>        q;
    for (double y = 40; y <= 120; y += 20) {
        for (double x = 40; x <= 120; x += 20) {
            q.push_back({x, y});
        }
    }
    const auto r = bm.estimate_flow(f0, f1, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_TRUE(r.valid[i]);
        EXPECT_LT(distance(r.displaced[i], q[i] + Point2{5.0, -3.0}), 0.5) << "query " << i;
    }
}

TEST(BlockMatching, LargeMotionNeedsThePyramid) {
    SceneConfig config             = moving_scene(2, 1);
    config.width                   = 160;
    config.height                  = 160;
    config.deformation             = {};
    config.deformation.translation = {18.0, 0.0};
    const Scene                scene(config);
    const BlockMatchingBackend bm;
    const auto f0 = bm.extract_features(render_frame(scene, 0), 0);
    const auto f1 = bm.extract_features(render_frame(scene, 1), 1);
    const std::vector<Point2> q{{60.0, 80.0}, {80.0, 60.0}};
    const auto                r = bm.estimate_flow(f0, f1, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_LT(distance(r.displaced[i], q[i] + Point2{18.0, 0.0}), 1.0);
    }
}

TEST(BlockMatching, IdenticalFramesGiveZeroMotion) {
    const Scene                scene(moving_scene(2, 1));
    const BlockMatchingBackend bm;
    const auto                 img = render_frame(scene, 0);
    const auto                 f0  = bm.extract_features(img, 0);
    const auto                 f1  = bm.extract_features(img, 1);
    const std::vector<Point2>  q{{30.0, 30.0}, {64.0, 90.0}};
    const auto                 r = bm.estimate_flow(f0, f1, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_LT(distance(r.displaced[i], q[i]), 1e-6);
    }
}

TEST(BlockMatching, FlatOccluderYieldsLargeForwardBackwardError) {
    SceneConfig config             = moving_scene(2, 1);
    config.width                   = 160;
    config.height                  = 160;
    config.deformation             = {};
    config.deformation.translation = {4.0, 0.0};
    OccluderConfig bar;
    bar.center      = {80.0, 80.0};
    bar.size        = {60.0, 60.0};
    bar.first_frame = 1;
    bar.last_frame  = 1;
    config.occluders.push_back(bar);
    const Scene                scene(config);
    const BlockMatchingBackend bm;
    FrameRecord ref{0, bm.extract_features(render_frame(scene, 0), 0), {{80.0, 80.0}, {30.0, 30.0}}, {true, true}};
    const auto  fb = forward_backward_epe(ref, bm.extract_features(render_frame(scene, 1), 1), bm, 2);
    EXPECT_LT(fb.epe[1], 0.5);
    EXPECT_GT(fb.epe[0], fb.epe[1]);
}
