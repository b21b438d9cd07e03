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
#include "rfglove/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfglove/distributions.hpp"
#include "rfglove/error.hpp"

namespace rfglove::stats {
namespace {

void check_rectangular(const Matrix& m, std::size_t min_rows, std::size_t min_cols, const char* what) {
    if (m.size() < min_rows) {
        throw StatsError(std::string(what) + " needs at least " + std::to_string(min_rows) + " rows");
    }
    const std::size_t k = m.front().size();
    if (k < min_cols) {
        throw StatsError(std::string(what) + " needs at least " + std::to_string(min_cols) + " columns");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != k) {
            throw StatsError(std::string(what) + ": row " + std::to_string(i + 1) + " has " +
                             std::to_string(m[i].size()) + " values, expected " + std::to_string(k));
        }
    }
}

std::vector<double> column(const Matrix& m, std::size_t j) {
    std::vector<double> out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(row[j]);
    return out;
}

}  // namespace

double mean(std::span<const double> x) {
    if (x.empty()) throw StatsError("mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw StatsError("sample variance needs at least 2 values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double accuracy(int correct, int errors) {
    return 100.0 * (static_cast<double>(correct) - static_cast<double>(errors) / 3.0) / 9.0;
}

double score_test3(const ScoreInputs3& in, double time_divisor) {
    if (!(time_divisor > 0.0)) throw StatsError("time divisor must be > 0");
    return accuracy(in.correct, in.errors) - (in.time_s - in.mean_time_s) / time_divisor;
}

double score_test4(const ScoreInputs4& in) {
    if (in.origin_scans < 1 || in.destination_scans < 1) {
        throw StatsError("origin and destination scan counts must be >= 1");
    }
    if (in.find_time_s > in.total_time_s) throw StatsError("find time exceeds total time");
    return in.total_time_s / static_cast<double>(in.origin_scans + in.destination_scans) +
           in.find_time_s / static_cast<double>(in.origin_scans);
}

SuccessRate success_rate(std::span<const SubjectOutcome> outcomes) {
    if (outcomes.empty()) throw StatsError("success rate of an empty cohort");
    std::size_t complete = 0;
    double rate_sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.attempted <= 0 || o.done < 0 || o.done > o.attempted) {
            throw StatsError("each subject needs 0 <= done <= attempted and attempted > 0");
        }
        if (o.done == o.attempted) ++complete;
        rate_sum += static_cast<double>(o.done) / static_cast<double>(o.attempted);
    }
    const auto n = static_cast<double>(outcomes.size());
    return SuccessRate{100.0 * static_cast<double>(complete) / n, 100.0 * rate_sum / n, outcomes.size()};
}

TTestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatsError("paired t-test needs samples of equal length");
    if (x.size() < 2) throw StatsError("paired t-test needs at least 2 pairs");

    std::vector<double> d(x.size());
    std::transform(x.begin(), x.end(), y.begin(), d.begin(), std::minus<>());
    const double md = mean(d);
    const double var = sample_variance(d);

    TTestResult r;
    r.n = d.size();
    r.df = static_cast<double>(d.size() - 1);
    r.mean_diff = md;
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
        r.t = 0.0;
        r.p = 1.0;
        return r;
    }
    if (var <= 0.0) throw StatsError("paired differences have zero variance");
    r.t = md / std::sqrt(var / static_cast<double>(d.size()));
    r.p = student_t_two_tailed_p(r.t, r.df);
    return r;
}

AnovaResult rm_anova_gg(const Matrix& data) {
    check_rectangular(data, 2, 2, "repeated-measures ANOVA");
    const std::size_t n = data.size();
    const std::size_t k = data.front().size();
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);

    std::vector<double> row_mean(n, 0.0);
    std::vector<double> col_mean(k, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += data[i][j] / kd;
            col_mean[j] += data[i][j] / nd;
            grand += data[i][j];
        }
    }
    grand /= nd * kd;

    AnovaResult r;
    r.subjects = n;
    r.conditions = k;
    double ss_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double resid = data[i][j] - row_mean[i] - col_mean[j] + grand;
            r.ss_error += resid * resid;
            ss_total += (data[i][j] - grand) * (data[i][j] - grand);
        }
    }
    for (double c : col_mean) r.ss_conditions += nd * (c - grand) * (c - grand);
    for (double m : row_mean) r.ss_subjects += kd * (m - grand) * (m - grand);

    if (ss_total == 0.0 || r.ss_error <= 1e-14 * ss_total) {
        throw StatsError("degenerate data: no subject x condition variance");
    }

    const double df_cond = kd - 1.0;
    const double df_err = (kd - 1.0) * (nd - 1.0);
    r.F = (r.ss_conditions / df_cond) / (r.ss_error / df_err);
    r.p_uncorrected = f_upper_tail(r.F, df_cond, df_err);

    // Box's epsilon from the double-centred covariance matrix of conditions.
    Matrix cov(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += (data[i][a] - col_mean[a]) * (data[i][b] - col_mean[b]);
            cov[a][b] = cov[b][a] = s / (nd - 1.0);
        }
    }
    std::vector<double> cov_row_mean(k, 0.0);
    double cov_mean = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) cov_row_mean[a] += cov[a][b] / kd;
        cov_mean += cov_row_mean[a] / kd;
    }
    double trace = 0.0;
    double sum_sq = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            const double centred = cov[a][b] - cov_row_mean[a] - cov_row_mean[b] + cov_mean;
            sum_sq += centred * centred;
            if (a == b) trace += centred;
        }
    }
    r.epsilon = std::clamp(trace * trace / (df_cond * sum_sq), 1.0 / df_cond, 1.0);
    r.df1 = r.epsilon * df_cond;
    r.df2 = r.epsilon * df_err;
    r.p = f_upper_tail(r.F, r.df1, r.df2);
    return r;
}

PairwiseResult bonferroni_pairwise(const Matrix& data) {
    check_rectangular(data, 2, 2, "pairwise comparison");
    const std::size_t k = data.front().size();
    PairwiseResult r;
    r.comparisons = k * (k - 1) / 2;
    r.raw_p.assign(k, std::vector<double>(k, 1.0));
    r.adjusted_p.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t a = 0; a < k; ++a) {
        const auto col_a = column(data, a);
        for (std::size_t b = a + 1; b < k; ++b) {
            const auto col_b = column(data, b);
            const double p = paired_t_test(col_a, col_b).p;
            const double adj = std::min(1.0, p * static_cast<double>(r.comparisons));
            r.raw_p[a][b] = r.raw_p[b][a] = p;
            r.adjusted_p[a][b] = r.adjusted_p[b][a] = adj;
        }
    }
    return r;
}

AlphaResult cronbach_alpha(const Matrix& items) {
    check_rectangular(items, 2, 2, "Cronbach's alpha");
    const std::size_t k = items.front().size();
    double item_var_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) item_var_sum += sample_variance(column(items, j));

    std::vector<double> totals;
    totals.reserve(items.size());
    for (const auto& row : items) totals.push_back(std::accumulate(row.begin(), row.end(), 0.0));
    const double total_var = sample_variance(totals);
    if (total_var <= 0.0) throw StatsError("total score has zero variance");

    const auto kd = static_cast<double>(k);
    return AlphaResult{kd / (kd - 1.0) * (1.0 - item_var_sum / total_var), k, items.size()};
}

CvResult coefficient_of_variation(std::span<const double> x) {
    if (x.size() < 2) throw StatsError("coefficient of variation needs at least 2 values");
    const double m = mean(x);
    if (m == 0.0) throw StatsError("coefficient of variation undefined for zero mean");
    const double sd = sample_sd(x);
    return CvResult{sd / m, m, sd};
}

NormalityResult jarque_bera(std::span<const double> x) {
    if (x.size() < 3) throw StatsError("normality test needs at least 3 values");
    const double m = mean(x);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const auto n = static_cast<double>(x.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0) throw StatsError("normality test undefined for a constant sample");

    NormalityResult r;
    r.skewness = m3 / std::pow(m2, 1.5);
    r.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    r.statistic = n / 6.0 * (r.skewness * r.skewness + 0.25 * r.excess_kurtosis * r.excess_kurtosis);
    r.p = chi2_2df_upper_tail(r.statistic);
    return r;
}

}  // namespace rfglove::stats
