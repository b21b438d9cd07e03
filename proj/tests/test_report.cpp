/* Copyright 2026 The rfglove Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "rfglove/error.hpp"
#include "rfglove/report.hpp"

using namespace rfglove;

namespace {

ExperimentOptions options(int test, int n, std::uint64_t seed) {
    ExperimentOptions o;
    o.test_id = test;
    o.participants = n;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("reports are byte-reproducible") {
    for (int test = 1; test <= 4; ++test) {
        const auto o = options(test, 6, 21);
        CHECK(experiment_report(o).dump() == experiment_report(o).dump());
        CHECK(experiment_traces(o) == experiment_traces(o));
        auto other = o;
        other.seed = 22;
        CHECK(experiment_report(o).dump() != experiment_report(other).dump());
    }
}

TEST_CASE("test 1 structure") {
    const auto doc = experiment_report(options(1, 17, 3));
    CHECK(doc.at("test_id") == 1);
    CHECK(doc.at("participants") == 17);
    CHECK(doc.at("cohort").size() == 17);
    const auto& a = doc.at("analysis");
    REQUIRE(a.at("attempt_times").size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(a.at("attempt_times")[i].at("attempt") == i + 1);
        CHECK(a.at("attempt_times")[i].at("n") == 17);
    }
    const auto& anova = a.at("rm_anova_gg");
    CHECK(anova.at("conditions") == 8);
    CHECK(anova.at("subjects") == 17);
    CHECK(anova.at("df2").get<double>() / anova.at("df1").get<double>() == doctest::Approx(16.0));
    CHECK(anova.at("F").get<double>() > 0.0);
    CHECK(a.at("bonferroni").at("comparisons") == 28);
    CHECK(a.at("success").at("subjects") == 17);
}

TEST_CASE("test 2 without errors reports 100 percent") {
    auto o = options(2, 17, 8);
    o.p_error = 0.0;
    const auto a = experiment_report(o).at("analysis");
    CHECK(a.at("placement_success_pct") == 100.0);
    CHECK(a.at("success").at("task_rate_pct") == 100.0);
    CHECK(a.at("placements") == 17 * 9);
    CHECK(a.at("correct_placements") == 17 * 9);
    CHECK(a.at("normality_time").at("method") == "jarque-bera");
}

TEST_CASE("test 3 paired comparisons") {
    const auto a = experiment_report(options(3, 15, 5)).at("analysis");
    for (const char* key : {"glove", "no_glove", "paired_score", "paired_time", "paired_errors"}) {
        CHECK(a.contains(key));
    }
    CHECK(a.at("paired_time").contains("t"));
    CHECK(a.at("paired_time").at("t").get<double>() < 0.0);
}

TEST_CASE("test 4 scores and cv") {
    const auto a = experiment_report(options(4, 17, 7)).at("analysis");
    CHECK(a.at("scores").size() == 17);
    const double cv = a.at("cv").at("cv").get<double>();
    CHECK(cv > 0.0);
    CHECK(cv == doctest::Approx(a.at("cv").at("sd").get<double>() / a.at("cv").at("mean").get<double>()));
}

TEST_CASE("energy summary") {
    const auto e = experiment_report(options(2, 3, 1)).at("energy");
    CHECK(e.at("average_mA") == doctest::Approx(800.0));
    CHECK(e.at("battery_life_h") == doctest::Approx(2.5));
    CHECK(e.at("sleep_W") == doctest::Approx(2.0));
    CHECK(e.at("active_W") == doctest::Approx(7.0));
}

TEST_CASE("invalid experiments") {
    CHECK_THROWS_AS(experiment_report(options(5, 17, 1)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_report(options(0, 17, 1)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_report(options(1, 1, 1)), std::invalid_argument);
}

TEST_CASE("stats cv fixture") {
    std::vector<double> z{-1.6, -0.9, -0.4, 0.0, 0.2, 0.5, 0.9, 1.3};
    double zm = 0.0;
    for (double v : z) zm += v / z.size();
    double ss = 0.0;
    for (double v : z) ss += (v - zm) * (v - zm);
    const double zs = std::sqrt(ss / (z.size() - 1));
    std::ostringstream csv;
    csv.precision(17);
    csv << "score\n";
    for (double v : z) csv << 25.43 + 7.82 * (v - zm) / zs << "\n";
    const auto doc = stats_report(csv.str(), "cv");
    CHECK(doc.at("result").at("cv_3dp") == doctest::Approx(0.307));
    CHECK(doc.at("result").at("mean") == doctest::Approx(25.43));
    CHECK(doc.at("result").at("sd") == doctest::Approx(7.82));
    CHECK(doc.at("rows") == 8);
}

TEST_CASE("stats ttest") {
    const auto doc = stats_report("w,wo\n1,2\n3,5\n4,4\n", "ttest");
    CHECK(doc.at("result").at("t").get<double>() == doctest::Approx(-std::sqrt(3.0)));
    CHECK(doc.at("result").at("df") == 2.0);
    CHECK(doc.at("columns")[1] == "wo");
}

TEST_CASE("stats errors") {
    CHECK_THROWS_AS(stats_report("a,b\n1,1\n2,2\n3,3\n", "anova"), StatsError);
    CHECK_THROWS_AS(stats_report("a,b,c\n1,2,3\n2,3,5\n", "ttest"), StatsError);
    CHECK_THROWS_AS(stats_report("a,b\n1,2\n2,1\n", "cv"), StatsError);
    CHECK_THROWS_AS(stats_report("a\n1\n2\n", "alpha"), StatsError);
    CHECK_THROWS_AS(stats_report("a\n1\n2\n", "median"), std::exception);
    try {
        stats_report("a,b\n1,2\n3,x\n", "ttest");
        FAIL("accepted a non-numeric cell");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        stats_report("a,b\n1,2\n3\n", "ttest");
        FAIL("accepted a short row");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

}
