#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "crowdkit/common/rng.hpp"
#include "crowdkit/stitching/hungarian.hpp"
#include "crowdkit/stitching/spline.hpp"
#include "crowdkit/stitching/stitch.hpp"

using namespace crowdkit;

TEST_CASE("StitchConfig schedule ends exactly at h_max") {
    StitchConfig cfg;
    const auto sched = cfg.schedule();
    const std::vector<double> want = {3, 6, 9, 12, 15, 18, 21, 23};
    REQUIRE(sched.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(sched[i] == doctest::Approx(want[i]));

    StitchConfig flat;
    flat.h_start = 5;
    flat.h_max = 5;
    const auto one = flat.schedule();
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(5.0));

    StitchConfig bad;
    bad.h_step = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = StitchConfig{};
    bad.h_max = 1.0;  // below h_start
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("endpoint features and distance") {
    const Trajectory tr = testutil::traj("a", {{0.0, 1.0, 2.0, 1.6}, {1.0, 2.0, 3.0, 1.8}});
    const auto s = start_feature(tr);
    const auto e = end_feature(tr);
    CHECK(s.t == doctest::Approx(0.0));
    CHECK(s.x == doctest::Approx(1.0));
    CHECK(s.y == doctest::Approx(2.0));
    CHECK(s.zbar == doctest::Approx(1.7));  // trajectory-mean height on both ends
    CHECK(e.t == doctest::Approx(1.0));
    CHECK(e.zbar == doctest::Approx(1.7));

    SUBCASE("identical endpoints have zero distance") {
        CHECK(endpoint_distance(e, e) == doctest::Approx(0.0));
    }
    SUBCASE("a pure 3 s offset costs 3") {
        EndpointFeature b = e;
        b.t += 3.0;
        CHECK(endpoint_distance(e, b) == doctest::Approx(3.0));
    }
    SUBCASE("1 s, 2 m, 2 m mixed offset costs 3") {
        EndpointFeature b = e;
        b.t += 1.0;
        b.x += 2.0;
        b.y += 2.0;
        CHECK(endpoint_distance(e, b) == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("build_distance_matrix pads to square with a dominating null value") {
    const Trajectory a = testutil::line_walk("a", 0, 0, 1, 0, 0.0, 1.0, 10);
    const Trajectory b = testutil::line_walk("b", 3, 0, 1, 0, 1.0, 2.0, 10);

    SUBCASE("1x1 keeps the real distance") {
        const auto m = build_distance_matrix({a}, {b});
        REQUIRE(m.cost.size() == 1);
        CHECK(m.cost[0][0] ==
              doctest::Approx(endpoint_distance(end_feature(a), start_feature(b))));
    }

    SUBCASE("2 ending vs 1 starting pads one null column") {
        const Trajectory c = testutil::line_walk("c", -5, 2, 1, 0, 0.0, 1.0, 10);
        const auto m = build_distance_matrix({a, c}, {b});
        REQUIRE(m.cost.size() == 2);
        REQUIRE(m.cost[0].size() == 2);
        CHECK(m.n_ending == 2);
        CHECK(m.n_starting == 1);
        CHECK(m.cost[0][1] == doctest::Approx(m.d0));
        CHECK(m.cost[1][1] == doctest::Approx(m.d0));
        double max_real = std::max(m.cost[0][0], m.cost[1][0]);
        CHECK(m.d0 == doctest::Approx(max_real + 1.0));
    }

    SUBCASE("random 4x3 entries match the pairwise recomputation") {
        Rng rng(4);
        std::vector<Trajectory> ending, starting;
        for (int i = 0; i < 4; ++i) ending.push_back(testutil::random_traj(rng, "e" + std::to_string(i), 6));
        for (int i = 0; i < 3; ++i) starting.push_back(testutil::random_traj(rng, "s" + std::to_string(i), 6));
        const auto m = build_distance_matrix(ending, starting);
        REQUIRE(m.cost.size() == 4);
        double max_real = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) {
                const double want =
                    endpoint_distance(end_feature(ending[i]), start_feature(starting[j]));
                CHECK(m.cost[i][j] == doctest::Approx(want).epsilon(1e-12));
                max_real = std::max(max_real, want);
            }
        for (int i = 0; i < 4; ++i) CHECK(m.cost[i][3] > max_real);
    }
}

TEST_CASE("hungarian_assign returns a global minimum matching") {
    SUBCASE("identity-favoring matrix") {
        const std::vector<std::vector<double>> cost = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
        const auto col = hungarian_assign(cost);
        REQUIRE(col.size() == 3);
        for (int i = 0; i < 3; ++i) CHECK(col[i] == i);
        CHECK(assignment_cost(cost, col) == doctest::Approx(0.0));
    }

    SUBCASE("1x1") {
        const auto col = hungarian_assign({{7.0}});
        REQUIRE(col.size() == 1);
        CHECK(col[0] == 0);
    }

    SUBCASE("random matrices match the permutation oracle") {
        Rng rng(99);
        for (int rep = 0; rep < 120; ++rep) {
            const int n = 1 + static_cast<int>(rng.uniform_index(7));
            std::vector<std::vector<double>> cost(n, std::vector<double>(n));
            for (auto& row : cost)
                for (auto& v : row) v = rng.uniform(0, 10);
            const auto col = hungarian_assign(cost);
            const double got = assignment_cost(cost, col);
            const double want = oracle::assignment_brute_force(cost);
            REQUIRE(got == doctest::Approx(want).epsilon(1e-9));
        }
    }

    SUBCASE("invalid input is rejected") {
        CHECK_THROWS_AS(hungarian_assign({{1, 2}, {3}}), std::invalid_argument);
        CHECK_THROWS_AS(hungarian_assign({{1, 2}, {3, std::numeric_limits<double>::infinity()}}),
                        std::invalid_argument);
    }
}

TEST_CASE("iterative_stitch merges seam fragments and passes the rest through") {
    StitchConfig cfg;
    cfg.smoothing_enabled = false;

    SUBCASE("disjoint fragments pass through unmerged") {
        TrajectorySet a(30.0), b(30.0);
        a.add(testutil::line_walk("a0", 0, 0, 1, 0, 0.0, 2.0, 30));
        b.add(testutil::line_walk("b0", 100, 100, 1, 0, 50.0, 52.0, 30));
        const auto res = iterative_stitch(a, b, cfg);
        CHECK(res.merged.size() == 2);
        CHECK(res.merged.contains("a0"));
        CHECK(res.merged.contains("b0"));
        CHECK(res.report.accepted().empty());
    }

    SUBCASE("a walker split at the seam becomes one trajectory") {
        TrajectorySet a(30.0), b(30.0);
        a.add(testutil::line_walk("a0", -2, 0, 1, 0, 0.0, 2.0, 30));
        // resumes 0.2 s later, 0.2 m further along the same line
        b.add(testutil::line_walk("b0", -2 + 2.2, 0, 1, 0, 2.2, 4.2, 30));
        const auto res = iterative_stitch(a, b, cfg);
        REQUIRE(res.merged.size() == 1);
        const auto& tr = res.merged.trajectories()[0];
        CHECK(tr.id() == "a0+b0");
        CHECK(tr.front().t == doctest::Approx(0.0));
        CHECK(tr.back().t == doctest::Approx(4.2));
        REQUIRE(res.report.accepted().size() == 1);
        CHECK(res.report.accepted()[0].cost < cfg.h_start);
    }

    SUBCASE("every accepted pair costs less than its round threshold and h_max") {
        Rng rng(5);
        TrajectorySet a(30.0), b(30.0);
        for (int i = 0; i < 6; ++i) {
            const double y = 1.5 * i;
            a.add(testutil::line_walk("a" + std::to_string(i), -3, y, 1.2, 0, 0.0, 2.5, 30));
            const double gap = rng.uniform(0.1, 1.5);
            b.add(testutil::line_walk("b" + std::to_string(i), -3 + 1.2 * (2.5 + gap), y, 1.2, 0,
                                      2.5 + gap, 5.0 + gap, 30));
        }
        const auto res = iterative_stitch(a, b, cfg);
        for (const auto& r : res.report.records)
            if (r.accepted) {
                CHECK(r.cost < r.round_h);
                CHECK(r.cost < cfg.h_max);
            }
    }

    SUBCASE("fragments overlapping beyond the seam window never merge") {
        TrajectorySet a(30.0), b(30.0);
        // time ranges overlap by 1.8 s > seam_overlap_max = 1 s
        a.add(testutil::line_walk("a0", 0, 0, 1, 0, 0.0, 3.0, 30));
        b.add(testutil::line_walk("b0", 1.2, 0, 1, 0, 1.2, 4.5, 30));
        const auto res = iterative_stitch(a, b, cfg);
        CHECK(res.merged.size() == 2);
        CHECK(res.report.accepted().empty());
    }

    SUBCASE("duplicate ids across sets are re-keyed deterministically") {
        TrajectorySet a(30.0), b(30.0);
        a.add(testutil::line_walk("w", 0, 0, 1, 0, 0.0, 1.0, 30));
        b.add(testutil::line_walk("w", 40, 40, 1, 0, 30.0, 31.0, 30));
        const auto res = iterative_stitch(a, b, cfg);
        REQUIRE(res.merged.size() == 2);
        CHECK(res.merged.contains("w"));
        CHECK(res.merged.contains("w_2"));
    }
}

TEST_CASE("smooth_spline follows the path and suppresses noise") {
    SUBCASE("cubic polynomial is reproduced") {
        std::vector<TrajectoryPoint> pts;
        auto poly = [](double t) { return 0.02 * t * t * t - 0.1 * t * t + 0.5 * t + 1.0; };
        for (int k = 0; k <= 120; ++k) {
            const double t = k / 30.0;
            pts.push_back({t, {poly(t), -0.5 * poly(t), 1.7}});
        }
        const Trajectory sm = smooth_spline(Trajectory("c", pts), 30.0);
        for (const auto& p : sm.points()) {
            CHECK(std::abs(p.position.x - poly(p.t)) < 1e-6);
            CHECK(std::abs(p.position.y - (-0.5 * poly(p.t))) < 1e-6);
            CHECK(p.position.z == doctest::Approx(1.7));
        }
    }

    SUBCASE("straight line is preserved") {
        const Trajectory line = testutil::line_walk("l", 0, 1, 0.8, -0.2, 0.0, 4.0, 30);
        const Trajectory sm = smooth_spline(line, 30.0);
        for (const auto& p : sm.points()) {
            CHECK(std::abs(p.position.x - 0.8 * p.t) < 1e-6);
            CHECK(std::abs(p.position.y - (1 - 0.2 * p.t)) < 1e-6);
        }
        CHECK(std::abs(sm.front().t - line.front().t) < 1e-9);
        CHECK(std::abs(sm.back().t - line.back().t) < 1e-9);
    }

    SUBCASE("noisy line comes out closer to the truth than the input") {
        Rng rng(17);
        const double sigma = 0.03;
        std::vector<TrajectoryPoint> pts;
        double in_sq = 0.0;
        for (int k = 0; k <= 150; ++k) {
            const double t = k / 30.0;
            const double nx = rng.normal(0, sigma), ny = rng.normal(0, sigma);
            pts.push_back({t, {0.8 * t + nx, 0.1 + 0.3 * t + ny, 1.7}});
            in_sq += nx * nx + ny * ny;
        }
        const double in_rms = std::sqrt(in_sq / (2.0 * 151));
        const Trajectory sm = smooth_spline(Trajectory("n", pts), 30.0);
        double out_sq = 0.0;
        for (const auto& p : sm.points()) {
            const double ex = p.position.x - 0.8 * p.t;
            const double ey = p.position.y - (0.1 + 0.3 * p.t);
            out_sq += ex * ex + ey * ey;
        }
        const double out_rms = std::sqrt(out_sq / (2.0 * sm.size()));
        CHECK(out_rms < in_rms);
    }

    SUBCASE("endpoints stay within 5 cm") {
        Rng rng(23);
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<TrajectoryPoint> pts;
            for (int k = 0; k <= 90; ++k) {
                const double t = k / 30.0;
                pts.push_back({t, {1.1 * t + rng.normal(0, 0.03),
                                   0.2 * std::sin(t) + rng.normal(0, 0.03), 1.7}});
            }
            const Trajectory in("e", pts);
            const Trajectory sm = smooth_spline(in, 30.0);
            CHECK(std::hypot(sm.front().position.x - in.front().position.x,
                             sm.front().position.y - in.front().position.y) < 0.05);
            CHECK(std::hypot(sm.back().position.x - in.back().position.x,
                             sm.back().position.y - in.back().position.y) < 0.05);
        }
    }

    SUBCASE("short trajectories are returned unsmoothed") {
        const Trajectory tiny = testutil::traj("t", {{0, 0, 0, 1.7}, {0.1, 1, 0, 1.7}, {0.2, 2, 0, 1.7}});
        const Trajectory sm = smooth_spline(tiny, 30.0);
        REQUIRE(sm.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(sm.points()[i].position.x == doctest::Approx(tiny.points()[i].position.x));
    }
}
