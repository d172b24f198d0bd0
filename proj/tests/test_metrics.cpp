#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ignn/metrics.hpp"
#include "oracles.hpp"

using namespace ignn;

namespace {

std::vector<double> random_small_values(Rng& rng, std::size_t n) {
    // values from {0,1,2,3} make ties frequent
    std::vector<double> v(n);
    for (double& x : v) x = static_cast<double>(uniform_below(rng, 4));
    return v;
}

} // namespace

TEST_CASE("auc basics", "[metrics]") {
    SECTION("perfect separation") {
        const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
        const std::vector<int> y{1, 1, 0, 0};
        REQUIRE(auc_roc(s, y) == 1.0);
    }
    SECTION("perfect inversion") {
        const std::vector<double> s{0.1, 0.9};
        const std::vector<int> y{1, 0};
        REQUIRE(auc_roc(s, y) == 0.0);
    }
    SECTION("all-equal scores give one half") {
        const std::vector<double> s{0.5, 0.5, 0.5, 0.5};
        const std::vector<int> y{1, 0, 1, 0};
        REQUIRE(auc_roc(s, y) == 0.5);
    }
    SECTION("single-class input is undefined") {
        const std::vector<double> s{0.1, 0.9};
        const std::vector<int> pos{1, 1};
        REQUIRE_THROWS_AS(auc_roc(s, pos), undefined_metric_error);
    }
}

TEST_CASE("auc rank-sum equals brute-force pair counting", "[metrics]") {
    Rng rng = make_rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 40);
        const std::vector<double> scores = random_small_values(rng, n);
        std::vector<int> labels(n);
        bool has_pos = false;
        bool has_neg = false;
        for (auto& y : labels) {
            y = static_cast<int>(uniform_below(rng, 2));
            has_pos = has_pos || y == 1;
            has_neg = has_neg || y == 0;
        }
        if (!has_pos || !has_neg) continue;
        REQUIRE(auc_roc(scores, labels) == oracle::auc_brute(scores, labels));
    }
}

TEST_CASE("kendall tau-b basics", "[metrics]") {
    SECTION("perfect concordance") {
        const std::vector<double> a{1, 2, 3};
        const std::vector<double> b{1, 2, 3};
        REQUIRE(kendall_tau_b(a, b).tau == 1.0);
    }
    SECTION("perfect reversal") {
        const std::vector<double> a{1, 2, 3};
        const std::vector<double> b{3, 2, 1};
        REQUIRE(kendall_tau_b(a, b).tau == -1.0);
    }
    SECTION("documented tie case: tau = 0.8 with P=4, T=U=1") {
        const std::vector<double> a{1, 2, 2, 3};
        const std::vector<double> b{1, 2, 3, 3};
        const TauResult r = kendall_tau_b(a, b);
        REQUIRE(r.concordant == 4);
        REQUIRE(r.discordant == 0);
        REQUIRE(r.ties_a_only == 1);
        REQUIRE(r.ties_b_only == 1);
        REQUIRE(r.tau == Catch::Approx(0.8).margin(1e-15));
    }
    SECTION("all-tied input is undefined") {
        const std::vector<double> a{1, 1, 1};
        const std::vector<double> b{1, 2, 3};
        REQUIRE_THROWS_AS(kendall_tau_b(a, b), undefined_metric_error);
    }
    SECTION("length mismatch") {
        const std::vector<double> a{1, 2};
        const std::vector<double> b{1};
        REQUIRE_THROWS_AS(kendall_tau_b(a, b), usage_error);
    }
}

TEST_CASE("kendall tau-b equals exhaustive pair classification", "[metrics]") {
    Rng rng = make_rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 50);
        const std::vector<double> a = random_small_values(rng, n);
        const std::vector<double> b = random_small_values(rng, n);
        const oracle::BruteTau want = oracle::kendall_brute(a, b);
        if (!want.defined) {
            REQUIRE_THROWS_AS(kendall_tau_b(a, b), undefined_metric_error);
            continue;
        }
        const TauResult got = kendall_tau_b(a, b);
        REQUIRE(got.concordant == want.P);
        REQUIRE(got.discordant == want.Q);
        REQUIRE(got.ties_a_only == want.T);
        REQUIRE(got.ties_b_only == want.U);
        REQUIRE(got.tau == want.tau);
        REQUIRE(got.tau >= -1.0);
        REQUIRE(got.tau <= 1.0);
    }
}

TEST_CASE("kendall tau-b symmetry properties", "[metrics]") {
    Rng rng = make_rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + uniform_below(rng, 30);
        const std::vector<double> a = random_small_values(rng, n);
        std::vector<double> b = random_small_values(rng, n);

        oracle::BruteTau ba = oracle::kendall_brute(a, b);
        if (!ba.defined) continue;

        const TauResult ab = kendall_tau_b(a, b);
        const TauResult rev = kendall_tau_b(b, a);
        REQUIRE(ab.tau == Catch::Approx(rev.tau).margin(1e-15));
        REQUIRE(ab.ties_a_only == rev.ties_b_only);
        REQUIRE(ab.ties_b_only == rev.ties_a_only);

        // negation flips the sign when b has no ties
        std::vector<double> b_unique(n);
        for (std::size_t i = 0; i < n; ++i) b_unique[i] = static_cast<double>(i) + uniform_real01(rng) * 0.5;
        fisher_yates_shuffle(b_unique, rng);
        std::vector<double> b_neg(n);
        for (std::size_t i = 0; i < n; ++i) b_neg[i] = -b_unique[i];
        const TauResult plus = kendall_tau_b(a, b_unique);
        const TauResult minus = kendall_tau_b(a, b_neg);
        REQUIRE(minus.tau == Catch::Approx(-plus.tau).margin(1e-15));
    }
}

TEST_CASE("distance-similarity KT protocol", "[metrics]") {
    SECTION("cosine similarity strictly decreasing in distance gives tau = 1") {
        const Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
        const auto dm = bfs_apsp(path);
        // 1-D unit "angles": rows on the unit circle spreading with index
        Tensor z(4, 2);
        for (int i = 0; i < 4; ++i) {
            const double angle = 0.4 * static_cast<double>(i);
            z(i, 0) = std::cos(angle);
            z(i, 1) = std::sin(angle);
        }
        REQUIRE(distance_similarity_kt(z, dm, 100, 1) == Catch::Approx(1.0));
    }

    SECTION("invariant under strictly increasing transforms of similarity") {
        const auto [g, part] = generate_communities(3, 4, 0.0, 3);
        const auto dm = bfs_apsp(g);
        Rng rng = make_rng(14);
        Tensor z(g.num_nodes(), 3);
        for (std::size_t k = 0; k < z.size(); ++k) z.data()[k] = 2.0 * uniform_real01(rng) - 1.0;
        Tape t;
        const Tensor zn = t.value(t.l2_normalize_rows(t.constant(z)));

        const double tau = distance_similarity_kt(zn, dm, 100000, 1);
        // scaling all embeddings by 3 scales similarities monotonically
        Tensor z3 = zn;
        for (std::size_t k = 0; k < z3.size(); ++k) z3.data()[k] *= 3.0;
        const double tau_scaled = distance_similarity_kt(z3, dm, 100000, 1);
        REQUIRE(tau == Catch::Approx(tau_scaled).margin(1e-12));
    }

    SECTION("all pairs at the same distance is undefined") {
        const Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
        const auto dm = bfs_apsp(k3);
        Tensor z = Tensor::from_rows({{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}});
        REQUIRE_THROWS_AS(distance_similarity_kt(z, dm, 10, 1), undefined_metric_error);
    }

    SECTION("random embeddings show weak correlation") {
        const auto [g, part] = generate_communities(20, 20, 0.0, 4);
        const auto dm = bfs_apsp(g);
        Rng rng = make_rng(15);
        Tensor z(g.num_nodes(), 8);
        for (std::size_t k = 0; k < z.size(); ++k) z.data()[k] = 2.0 * uniform_real01(rng) - 1.0;
        Tape t;
        const Tensor zn = t.value(t.l2_normalize_rows(t.constant(z)));
        const double tau = distance_similarity_kt(zn, dm, default_kt_budget(g.num_nodes()), 1);
        REQUIRE(std::abs(tau) < 0.1);
    }
}

TEST_CASE("empirical distortion", "[metrics]") {
    SECTION("uniform scaling is distortion 1") {
        const Graph path(3, {{0, 1}, {1, 2}});
        const auto dm = bfs_apsp(path);
        // place rows at 0, 2, 4 on a line: every distance is exactly 2 * d_G
        const Tensor z = Tensor::from_rows({{0.0}, {2.0}, {4.0}});
        const DistortionResult r = empirical_distortion(z, dm);
        REQUIRE_FALSE(r.infinite);
        REQUIRE(r.alpha == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(r.r == Catch::Approx(2.0).margin(1e-12));
    }

    SECTION("documented 3-point example: alpha = 2, r = 1") {
        const Graph path(3, {{0, 1}, {1, 2}});
        const auto dm = bfs_apsp(path);
        const Tensor z = Tensor::from_rows({{0.0}, {1.0}, {3.0}});
        const DistortionResult r = empirical_distortion(z, dm);
        REQUIRE(r.alpha == Catch::Approx(2.0).margin(1e-12));
        REQUIRE(r.r == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("coincident embeddings flag infinite distortion") {
        const Graph path(3, {{0, 1}, {1, 2}});
        const auto dm = bfs_apsp(path);
        const Tensor z = Tensor::from_rows({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
        const DistortionResult r = empirical_distortion(z, dm);
        REQUIRE(r.infinite);
        REQUIRE(std::isinf(r.alpha_value()));
    }

    SECTION("no eligible pairs is undefined") {
        const Graph isolated(2, {});
        const auto dm = bfs_apsp(isolated);
        REQUIRE_THROWS_AS(empirical_distortion(Tensor(2, 2), dm), undefined_metric_error);
    }

    SECTION("alpha is always at least 1") {
        Rng rng = make_rng(16);
        const auto [g, part] = generate_communities(3, 3, 0.5, 6);
        const auto dm = bfs_apsp(g);
        for (int trial = 0; trial < 10; ++trial) {
            Tensor z(g.num_nodes(), 4);
            for (std::size_t k = 0; k < z.size(); ++k) z.data()[k] = 3.0 * uniform_real01(rng);
            const DistortionResult r = empirical_distortion(z, dm);
            if (!r.infinite) REQUIRE(r.alpha >= 1.0);
        }
    }
}

TEST_CASE("metrics record serialization", "[metrics]") {
    MetricsRecord rec;
    rec.auc = 0.9375;
    rec.kendall_tau = 0.25;
    rec.distortion = 3.5;
    rec.P = 10;
    rec.Q = 6;
    rec.T = 2;
    rec.U = 1;
    rec.dataset = "communities";
    rec.model = "gcn";
    rec.variant = "both";
    rec.task = "link";
    rec.seed = 17;
    rec.epochs_run = 250;
    rec.wall_time_s = 1.5;

    const nlohmann::json j = rec.to_json();
    REQUIRE(j.at("auc") == 0.9375);
    REQUIRE(j.at("P") == 10);
    REQUIRE(j.at("metadata").at("variant") == "both");

    const MetricsRecord back = MetricsRecord::from_json(j);
    REQUIRE(back.auc == rec.auc);
    REQUIRE(back.kendall_tau == rec.kendall_tau);
    REQUIRE(back.distortion == rec.distortion);
    REQUIRE(back.seed == rec.seed);

    // tau-b consistency whenever the denominator is nonzero
    const double denom = std::sqrt(static_cast<double>(rec.P + rec.Q + rec.T) *
                                   static_cast<double>(rec.P + rec.Q + rec.U));
    REQUIRE(denom > 0.0);

    // infinite distortion round-trips through the null flag
    rec.distortion = std::numeric_limits<double>::infinity();
    const nlohmann::json j2 = rec.to_json();
    REQUIRE(j2.at("distortion").is_null());
    REQUIRE(std::isinf(MetricsRecord::from_json(j2).distortion));
}
