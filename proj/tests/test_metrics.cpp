#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "crowdkit/common/rng.hpp"
#include "crowdkit/metrics/evaluate.hpp"

using namespace crowdkit;

namespace {

std::vector<Point3> positions(const Trajectory& tr) {
    std::vector<Point3> pts;
    for (const auto& p : tr.points()) pts.push_back(p.position);
    return pts;
}

// Copy of a trajectory rigidly shifted in the horizontal plane.
Trajectory shifted(const Trajectory& tr, const std::string& id, double dx, double dy) {
    std::vector<TrajectoryPoint> pts = tr.points();
    for (auto& p : pts) {
        p.position.x += dx;
        p.position.y += dy;
    }
    return Trajectory(id, std::move(pts));
}

}  // namespace

TEST_CASE("discrete_frechet basics") {
    SUBCASE("identical trajectories have zero distance") {
        Rng rng(3);
        const Trajectory a = testutil::random_traj(rng, "a", 12);
        CHECK(discrete_frechet(a, a) == doctest::Approx(0.0));
    }

    SUBCASE("parallel straight segments offset by 0.3 m give 0.3") {
        const Trajectory a = testutil::line_walk("a", 0, 0, 1, 0, 0.0, 2.0, 10);
        const Trajectory b = shifted(a, "b", 0.0, 0.3);
        CHECK(discrete_frechet(a, b) == doctest::Approx(0.3).epsilon(1e-12));
    }

    SUBCASE("z differences are ignored") {
        const Trajectory a = testutil::line_walk("a", 0, 0, 1, 0, 0.0, 1.0, 10, 1.6);
        const Trajectory b = testutil::line_walk("b", 0, 0, 1, 0, 0.0, 1.0, 10, 1.9);
        CHECK(discrete_frechet(a, b) == doctest::Approx(0.0));
    }

    SUBCASE("matches the recursive memoized definition") {
        Rng rng(41);
        for (int rep = 0; rep < 200; ++rep) {
            const int na = 1 + static_cast<int>(rng.uniform_index(8));
            const int nb = 1 + static_cast<int>(rng.uniform_index(8));
            const Trajectory a = testutil::random_traj(rng, "a", na);
            const Trajectory b = testutil::random_traj(rng, "b", nb);
            const double got = discrete_frechet(a, b);
            const double want = oracle::frechet_recursive(positions(a), positions(b));
            REQUIRE(got == doctest::Approx(want).epsilon(1e-12));
        }
    }

    SUBCASE("matches exhaustive coupling enumeration on 6-point pairs") {
        Rng rng(42);
        for (int rep = 0; rep < 60; ++rep) {
            const Trajectory a = testutil::random_traj(rng, "a", 6);
            const Trajectory b = testutil::random_traj(rng, "b", 6);
            const double got = discrete_frechet(a, b);
            const double want = oracle::frechet_enumerate(positions(a), positions(b));
            REQUIRE(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("match_to_ground_truth pairs optimally and flags leftovers") {
    Rng rng(7);

    SUBCASE("identical sets pair perfectly") {
        TrajectorySet autos(30.0), truth(30.0);
        for (int i = 0; i < 4; ++i) {
            const auto tr = testutil::random_traj(rng, "w" + std::to_string(i), 10);
            autos.add(tr);
            truth.add(tr);
        }
        const auto m = match_to_ground_truth(autos, truth, 0.5);
        CHECK(m.pairs.size() == 4);
        CHECK(m.unmatched_auto.empty());
        CHECK(m.unmatched_truth.empty());
        for (const auto& p : m.pairs) CHECK(p.frechet == doctest::Approx(0.0));
    }

    SUBCASE("an extra truth trajectory becomes one miss") {
        TrajectorySet autos(30.0), truth(30.0);
        const auto a = testutil::line_walk("a", 0, 0, 1, 0, 0.0, 2.0, 10);
        autos.add(a);
        truth.add(shifted(a, "t0", 0.02, 0.0));
        truth.add(testutil::line_walk("t1", 50, 50, 1, 0, 0.0, 2.0, 10));
        const auto m = match_to_ground_truth(autos, truth, 0.5);
        REQUIRE(m.pairs.size() == 1);
        CHECK(m.unmatched_truth.size() == 1);
        CHECK(m.unmatched_auto.empty());
        CHECK(truth[m.unmatched_truth[0]].id() == "t1");
        CHECK(m.pairs[0].steps == 21);  // truth point count weights MOTP
    }

    SUBCASE("distances above max_dist never pair") {
        TrajectorySet autos(30.0), truth(30.0);
        const auto a = testutil::line_walk("a", 0, 0, 1, 0, 0.0, 2.0, 10);
        autos.add(a);
        truth.add(shifted(a, "t", 0.8, 0.0));
        const auto m = match_to_ground_truth(autos, truth, 0.5);
        CHECK(m.pairs.empty());
        CHECK(m.unmatched_auto.size() == 1);
        CHECK(m.unmatched_truth.size() == 1);
    }

    SUBCASE("pairing cost equals the brute-force assignment minimum") {
        for (int rep = 0; rep < 15; ++rep) {
            TrajectorySet autos(30.0), truth(30.0);
            std::vector<Trajectory> base;
            for (int i = 0; i < 5; ++i)
                base.push_back(testutil::random_traj(rng, "t" + std::to_string(i), 8));
            for (int i = 0; i < 5; ++i) truth.add(base[i]);
            for (int i = 0; i < 5; ++i)
                autos.add(shifted(base[i], "a" + std::to_string(i), rng.uniform(-0.1, 0.1),
                                  rng.uniform(-0.1, 0.1)));
            const double max_dist = 0.5;
            const auto m = match_to_ground_truth(autos, truth, max_dist);
            double got = 0.0;
            for (const auto& p : m.pairs) got += p.frechet;
            got += max_dist * (m.unmatched_auto.size() + m.unmatched_truth.size());

            // With every auto within ~0.15 m of its own truth, the optimal
            // pairing uses no null slots, so the summed cost must equal the
            // plain 5x5 brute-force assignment minimum.
            REQUIRE(m.pairs.size() == 5);
            const int n = 5;
            std::vector<std::vector<double>> small(n, std::vector<double>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) small[i][j] = discrete_frechet(autos[i], truth[j]);
            const double want = oracle::assignment_brute_force(small);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("motp is the duration-weighted mean pair distance") {
    SUBCASE("single pair") {
        CHECK(motp({{0, 0, 0.04, 1}}) == doctest::Approx(0.04));
    }
    SUBCASE("equal-duration pairs average evenly") {
        CHECK(motp({{0, 0, 0.02, 60}, {1, 1, 0.06, 60}}) == doctest::Approx(0.04));
    }
    SUBCASE("longer pairs weigh more") {
        CHECK(motp({{0, 0, 0.02, 90}, {1, 1, 0.06, 30}}) == doctest::Approx(0.03));
    }
    SUBCASE("no matches is rejected") {
        CHECK_THROWS_AS(motp({}), std::invalid_argument);
    }
}

TEST_CASE("pdr is the detected fraction") {
    CHECK(pdr(10, 0) == doctest::Approx(1.0));
    CHECK(pdr(0, 5) == doctest::Approx(0.0));
    CHECK(pdr(153, 6) == doctest::Approx(153.0 / 159.0).epsilon(1e-12));
    CHECK(pdr(153, 6) == doctest::Approx(0.96226).epsilon(1e-4));
    CHECK_THROWS_AS(pdr(0, 0), std::invalid_argument);
}

TEST_CASE("stitch_tpr counts reproduced seam pairs") {
    MatchReport report;
    auto add = [&](const std::string& a, const std::string& b, bool acc) {
        MatchRecord r;
        r.id_a = a;
        r.id_b = b;
        r.accepted = acc;
        report.records.push_back(r);
    };
    add("a", "b", true);
    add("c", "d", true);
    add("e", "f", false);

    SUBCASE("all reproduced") {
        CHECK(stitch_tpr(report, {{"a", "b"}, {"d", "c"}}) == doctest::Approx(1.0));
    }
    SUBCASE("order inside a pair does not matter") {
        CHECK(stitch_tpr(report, {{"b", "a"}}) == doctest::Approx(1.0));
    }
    SUBCASE("rejected records do not count") {
        CHECK(stitch_tpr(report, {{"e", "f"}}) == doctest::Approx(0.0));
    }
    SUBCASE("partial recovery") {
        CHECK(stitch_tpr(report, {{"a", "b"}, {"x", "y"}}) == doctest::Approx(0.5));
    }
    SUBCASE("119-pair regime arithmetic") {
        MatchReport big;
        std::vector<std::pair<std::string, std::string>> truth;
        for (int i = 0; i < 119; ++i) {
            const std::string a = "p" + std::to_string(i), b = "q" + std::to_string(i);
            truth.emplace_back(a, b);
            if (i > 0) {  // one pair missed
                MatchRecord r;
                r.id_a = a;
                r.id_b = b;
                r.accepted = true;
                big.records.push_back(r);
            }
        }
        CHECK(stitch_tpr(big, truth) == doctest::Approx(118.0 / 119.0).epsilon(1e-12));
        CHECK(stitch_tpr(big, truth) == doctest::Approx(0.99159).epsilon(1e-4));
    }
    SUBCASE("empty truth is rejected") {
        CHECK_THROWS_AS(stitch_tpr(report, {}), std::invalid_argument);
    }
}

TEST_CASE("evaluate composes matching and the two scores") {
    Rng rng(13);
    TrajectorySet autos(30.0), truth(30.0);
    for (int i = 0; i < 3; ++i) {
        const auto t = testutil::line_walk("t" + std::to_string(i), 0, 1.5 * i, 1.1, 0, 0.0, 3.0, 30);
        truth.add(t);
        autos.add(shifted(t, "a" + std::to_string(i), 0.01 * (i + 1), -0.01));
    }
    autos.add(testutil::line_walk("ghost", 40, 40, 1, 0, 0.0, 1.0, 30));  // false positive
    truth.add(testutil::line_walk("hidden", -40, -40, 1, 0, 0.0, 1.0, 30));  // miss

    const auto rep = evaluate(autos, truth, 0.5);
    CHECK(rep.true_positives == 3);
    CHECK(rep.false_positives == 1);
    CHECK(rep.false_negatives == 1);
    CHECK(rep.pdr == doctest::Approx(0.75));
    // per-pair Fréchet of a rigid shift is the shift magnitude
    const double d1 = std::hypot(0.01, 0.01), d2 = std::hypot(0.02, 0.01), d3 = std::hypot(0.03, 0.01);
    CHECK(rep.motp == doctest::Approx((d1 + d2 + d3) / 3.0).epsilon(1e-9));
    CHECK(rep.pairs.size() == 3);
    CHECK(rep.pair_auto_ids.size() == 3);

    SUBCASE("report text carries the headline numbers") {
        const std::string text = eval_report_text(rep);
        CHECK(text.find("motp") != std::string::npos);
        CHECK(text.find("pdr") != std::string::npos);
    }

    SUBCASE("empty versus empty degrades gracefully") {
        const auto empty = evaluate(TrajectorySet(30.0), TrajectorySet(30.0), 0.5);
        CHECK(empty.true_positives == 0);
        CHECK(empty.motp == doctest::Approx(0.0));
        CHECK(empty.pdr == doctest::Approx(0.0));
    }
}
