#include "noveltyscope/random.hpp"
#include "noveltyscope/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace noveltyscope;

TEST_CASE("log z-score within one fandom") {
    const double e = std::exp(1.0);
    std::vector<double> values{e - 1, std::exp(3.0) - 1};
    std::vector<std::string> fandoms{"A", "A"};
    auto z = log_zscore_by_fandom(values, fandoms);
    REQUIRE(z[0]);
    REQUIRE(z[1]);
    CHECK(*z[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(*z[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("log z-score flags zero-variance fandoms") {
    std::vector<double> values{4, 4, 4, 1, 9};
    std::vector<std::string> fandoms{"A", "A", "A", "B", "B"};
    auto z = log_zscore_by_fandom(values, fandoms);
    CHECK_FALSE(z[0]);
    CHECK_FALSE(z[2]);
    CHECK(z[3]);
    CHECK(z[4]);
    std::vector<double> negative{-1, 2};
    std::vector<std::string> two{"A", "A"};
    CHECK_THROWS_AS(log_zscore_by_fandom(negative, two), StatsError);
}

TEST_CASE("log z-score depends only on within-fandom pattern") {
    std::vector<double> a{0, 10, 100, 5};
    std::vector<double> values;
    std::vector<std::string> fandoms;
    for (double v : a) {
        values.push_back(v);
        fandoms.push_back("A");
    }
    for (double v : a) {
        values.push_back(std::exp(std::log1p(v) + 2.5) - 1);  // same logs shifted by a constant
        fandoms.push_back("B");
    }
    auto z = log_zscore_by_fandom(values, fandoms);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*z[i] == doctest::Approx(*z[i + a.size()]).epsilon(1e-9));
}

TEST_CASE("binned curve basics") {
    std::vector<double> nov{0.05, 0.06, 0.07, 0.08};
    std::vector<double> z{0.3, 0.3, 0.3, 0.3};
    auto c = binned_curve(nov, z, 0.1, 200, 7);
    REQUIRE(c.bins() == 10);
    CHECK(c.edges.front() == 0.0);
    CHECK(c.edges.back() == doctest::Approx(1.0));
    CHECK(c.count[0] == 4);
    CHECK(c.ci_lo[0] == doctest::Approx(0.3));
    CHECK(c.ci_hi[0] == doctest::Approx(0.3));
    CHECK(c.count[5] == 0);
    CHECK(std::isnan(c.mean[5]));
    CHECK(std::isnan(c.ci_lo[5]));
    CHECK_THROWS_AS(binned_curve(nov, z, 0.0), StatsError);
    CHECK_THROWS_AS(binned_curve(nov, z, -0.1), StatsError);
    std::vector<double> short_z{1.0};
    CHECK_THROWS_AS(binned_curve(nov, short_z, 0.1), StatsError);
}

TEST_CASE("binned curve of z = -novelty is strictly decreasing") {
    Rng rng(11);
    std::vector<double> nov, z;
    for (int i = 0; i < 5000; ++i) {
        nov.push_back(uniform01(rng));
        z.push_back(-nov.back());
    }
    for (double width : {0.1, 0.05}) {
        auto c = binned_curve(nov, z, width, 100, 3);
        std::size_t total = 0;
        for (std::size_t b = 0; b < c.bins(); ++b) {
            total += c.count[b];
            CHECK(c.ci_lo[b] <= c.mean[b]);
            CHECK(c.mean[b] <= c.ci_hi[b]);
            if (b > 0) CHECK(c.mean[b] < c.mean[b - 1]);
            CHECK(c.edges[b + 1] > c.edges[b]);
        }
        CHECK(total == nov.size());
    }
}

TEST_CASE("binned curve is deterministic under seed") {
    Rng rng(5);
    std::vector<double> nov, z;
    for (int i = 0; i < 300; ++i) {
        nov.push_back(uniform01(rng));
        z.push_back(uniform01(rng));
    }
    auto a = binned_curve(nov, z, 0.05, 300, 42);
    auto b = binned_curve(nov, z, 0.05, 300, 42);
    for (std::size_t i = 0; i < a.bins(); ++i) {
        if (a.count[i] == 0) continue;
        CHECK(a.ci_lo[i] == b.ci_lo[i]);
        CHECK(a.ci_hi[i] == b.ci_hi[i]);
    }
}

TEST_CASE("novelty of exactly 1 lands in the last bin") {
    std::vector<double> nov{1.0, 0.0};
    std::vector<double> z{1.0, 2.0};
    auto c = binned_curve(nov, z, 0.1, 10, 1);
    CHECK(c.count.back() == 1);
    CHECK(c.count.front() == 1);
}

TEST_CASE("type-7 quantile") {
    std::vector<double> s{1, 2, 3, 4};
    CHECK(quantile_sorted(s, 0.0) == 1.0);
    CHECK(quantile_sorted(s, 1.0) == 4.0);
    CHECK(quantile_sorted(s, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(s, 0.025) == doctest::Approx(1.075));
}

TEST_CASE("correlation matrix") {
    Eigen::MatrixXd d(3, 3);
    d << 1, 1, -1, 2, 2, -2, 3, 4, -3;
    auto r = correlation_matrix(d);
    CHECK(r(0, 0) == doctest::Approx(1.0));
    CHECK(r(0, 1) == doctest::Approx(0.9819805060619656).epsilon(1e-12));
    CHECK(r(1, 0) == r(0, 1));
    CHECK(r(0, 2) == doctest::Approx(-1.0));
    Eigen::MatrixXd constant(3, 2);
    constant << 1, 5, 2, 5, 3, 5;
    CHECK_THROWS_AS(correlation_matrix(constant), StatsError);
    Eigen::MatrixXd one_row(1, 2);
    one_row << 1, 2;
    CHECK_THROWS_AS(correlation_matrix(one_row), StatsError);
}
