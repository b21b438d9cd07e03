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
#pragma once

// Trial scoring and the statistics used to analyse trials.
//
// Variances are sample variances (n - 1 denominator) throughout. All
// functions are pure; errors are reported as StatsError.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rfglove::stats {

/// Rows are subjects, columns are conditions or items. Must be rectangular.
using Matrix = std::vector<std::vector<double>>;

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);
double sample_sd(std::span<const double> x);

// ---------------------------------------------------------------- scores

/// Accuracy over nine moves, where an error costs a third of a correct move:
/// 100 * (c - e/3) / 9. Deliberately not clamped, so many errors go negative.
double accuracy(int correct, int errors);

struct ScoreInputs3 {
    int correct = 0;
    int errors = 0;
    double time_s = 0.0;
    double mean_time_s = 0.0;  // mean over the same cohort and condition
};

/// accuracy - (t - t_bar) / divisor. Averaged over a cohort whose t_bar is
/// that cohort's mean time, the time term cancels.
double score_test3(const ScoreInputs3& in, double time_divisor = 3.0);

struct ScoreInputs4 {
    double total_time_s = 0.0;   // start to placement
    double find_time_s = 0.0;    // start until the target object was found
    int origin_scans = 0;        // region tags scanned to reach the origin
    int destination_scans = 0;   // region tags scanned to reach the destination
};

/// tT / (n1 + n2) + t1 / n1. Throws StatsError if n1 or n2 < 1 or t1 > tT.
double score_test4(const ScoreInputs4& in);

struct SubjectOutcome {
    int done = 0;
    int attempted = 0;
};

struct SuccessRate {
    double task_rate_pct = 0.0;  // subjects that completed every attempt
    double mean_rate_pct = 0.0;  // mean of per-subject done/attempted
    std::size_t subjects = 0;
};

SuccessRate success_rate(std::span<const SubjectOutcome> outcomes);

// ------------------------------------------------------------------ tests

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;          // two-tailed
    double mean_diff = 0.0;  // mean(x - y)
    std::size_t n = 0;
};

/// Student's paired t-test on x - y. Needs equal lengths >= 2 and
/// non-constant differences, except that all-zero differences give t = 0,
/// p = 1.
TTestResult paired_t_test(std::span<const double> x, std::span<const double> y);

struct AnovaResult {
    double F = 0.0;
    double df1 = 0.0;      // Greenhouse-Geisser corrected
    double df2 = 0.0;
    double p = 1.0;        // corrected
    double epsilon = 1.0;  // Box's estimate, in [1/(k-1), 1]
    double p_uncorrected = 1.0;
    double ss_conditions = 0.0;
    double ss_subjects = 0.0;
    double ss_error = 0.0;
    std::size_t subjects = 0;
    std::size_t conditions = 0;
};

/// One-way repeated-measures ANOVA with the Greenhouse-Geisser correction.
/// Throws StatsError when n < 2, k < 2, the matrix is ragged, or the
/// residual (subject x condition) variance is zero, which includes the case
/// of identical columns.
AnovaResult rm_anova_gg(const Matrix& data);

struct PairwiseResult {
    Matrix raw_p;       // k x k, diagonal 1
    Matrix adjusted_p;  // raw * comparisons, capped at 1
    std::size_t comparisons = 0;
};

/// Every pair of columns compared with paired_t_test, Bonferroni adjusted.
PairwiseResult bonferroni_pairwise(const Matrix& data);

struct AlphaResult {
    double alpha = 0.0;
    std::size_t items = 0;
    std::size_t subjects = 0;
};

/// Cronbach's alpha, k/(k-1) * (1 - sum(item variances) / var(total)).
AlphaResult cronbach_alpha(const Matrix& items);

struct CvResult {
    double cv = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

/// sd / mean. Throws StatsError for fewer than 2 values or a zero mean.
CvResult coefficient_of_variation(std::span<const double> x);

/// Jarque-Bera normality test. This is a stand-in: the original analysis
/// does not name its normality test.
struct NormalityResult {
    std::string method = "jarque-bera";
    double statistic = 0.0;
    double p = 1.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

NormalityResult jarque_bera(std::span<const double> x);

}  // namespace rfglove::stats
