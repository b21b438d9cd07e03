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
#include "rfglove/report.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rfglove/agent.hpp"
#include "rfglove/error.hpp"
#include "rfglove/json_io.hpp"
#include "rfglove/metrics.hpp"
#include "rfglove/scene.hpp"

namespace rfglove {
namespace {

using nlohmann::json;
namespace st = stats;

constexpr int kTest1Attempts = 8;
constexpr int kSortMoves = 9;
constexpr std::uint64_t kNoGloveSalt = 0x6e6f2d676c6f7665ULL;

// Runs fn, turning a StatsError into {"error": ...}.
json guarded(const std::function<json()>& fn) {
    try {
        return fn();
    } catch (const StatsError& e) {
        return json{{"error", e.what()}};
    }
}

json rounded(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(round6(x));
    return a;
}

json matrix_json(const st::Matrix& m) {
    json a = json::array();
    for (const auto& row : m) a.push_back(json(row));
    return a;
}

json describe(const std::vector<double>& x) {
    return guarded([&] {
        return json{{"n", x.size()}, {"mean", round6(st::mean(x))}, {"sd", round6(st::sample_sd(x))}};
    });
}

json anova_json(const st::AnovaResult& r) {
    return {{"F", r.F},
            {"df1", r.df1},
            {"df2", r.df2},
            {"p", r.p},
            {"epsilon", r.epsilon},
            {"p_uncorrected", r.p_uncorrected},
            {"ss_conditions", r.ss_conditions},
            {"ss_subjects", r.ss_subjects},
            {"ss_error", r.ss_error},
            {"subjects", r.subjects},
            {"conditions", r.conditions}};
}

json ttest_json(const st::TTestResult& r) {
    return {{"t", r.t}, {"df", r.df}, {"p", r.p}, {"mean_diff", r.mean_diff}, {"n", r.n}};
}

json normality_json(const st::NormalityResult& r) {
    return {{"method", r.method},
            {"statistic", r.statistic},
            {"p", r.p},
            {"skewness", r.skewness},
            {"excess_kurtosis", r.excess_kurtosis}};
}

json success_json(const st::SuccessRate& r) {
    return {{"task_rate_pct", r.task_rate_pct}, {"mean_rate_pct", r.mean_rate_pct}, {"subjects", r.subjects}};
}

json params_json(const AgentParams& p) {
    return {{"t0_s", p.t0_s},
            {"t_inf_s", p.t_inf_s},
            {"learn_rate", p.learn_rate},
            {"time_sd_s", p.time_sd_s},
            {"prebound_objects", p.prebound_objects},
            {"move_mean_s", p.move_mean_s},
            {"move_sd_s", p.move_sd_s},
            {"p_error", p.p_error},
            {"with_glove", p.with_glove}};
}

AgentParams params_for(const ExperimentOptions& opt, bool with_glove) {
    AgentParams p = AgentParams::defaults_for(opt.test_id, with_glove);
    if (opt.p_error) p.p_error = *opt.p_error;
    return p;
}

std::vector<TrialTranscript> cohort(const ExperimentOptions& opt, const AgentParams& params, std::uint64_t salt) {
    if (salt == 0) return run_cohort(opt.test_id, opt.participants, params, opt.seed, opt.device);
    const Scene scene = build_setup(opt.test_id, opt.seed);
    std::vector<TrialTranscript> out;
    for (int i = 1; i <= opt.participants; ++i) {
        AgentParams p = params;
        p.seed = participant_seed(opt.seed ^ salt, i);
        out.push_back(run_test(opt.test_id, p, scene, opt.device, i));
    }
    return out;
}

json participants_json(const std::vector<TrialTranscript>& c) {
    json a = json::array();
    for (const auto& t : c) a.push_back(summary_json(t));
    return a;
}

json analyse_test1(const std::vector<TrialTranscript>& c, const AgentParams& params) {
    st::Matrix times;
    std::vector<st::SubjectOutcome> outcomes;
    for (const auto& t : c) {
        times.push_back(t.per_attempt_times_s);
        outcomes.push_back({t.correct, static_cast<int>(t.per_attempt_times_s.size())});
    }
    json attempts = json::array();
    for (int a = 0; a < kTest1Attempts; ++a) {
        std::vector<double> col;
        for (const auto& row : times) col.push_back(row[static_cast<std::size_t>(a)]);
        json d = describe(col);
        d["attempt"] = a + 1;
        d["expected_s"] = round6(expected_attempt_time_s(params, a + 1));
        attempts.push_back(std::move(d));
    }
    return {{"attempt_times", std::move(attempts)},
            {"rm_anova_gg", guarded([&] { return anova_json(st::rm_anova_gg(times)); })},
            {"bonferroni", guarded([&] {
                 const auto r = st::bonferroni_pairwise(times);
                 return json{{"comparisons", r.comparisons}, {"adjusted_p", matrix_json(r.adjusted_p)}};
             })},
            {"success", guarded([&] { return success_json(st::success_rate(outcomes)); })}};
}

struct SortSummary {
    std::vector<double> times;
    std::vector<double> errors;
    std::vector<double> accuracy;
    std::vector<double> scores;
    std::vector<st::SubjectOutcome> outcomes;
    int placed = 0;
    int correct = 0;
};

SortSummary summarise_sorting(const std::vector<TrialTranscript>& c) {
    SortSummary s;
    for (const auto& t : c) {
        s.times.push_back(t.aux.at("total_time_s"));
        s.errors.push_back(t.errors);
        s.accuracy.push_back(st::accuracy(t.correct, t.errors));
        s.outcomes.push_back({t.correct, kSortMoves});
        s.placed += static_cast<int>(t.placements.size());
        s.correct += t.correct;
    }
    const double t_bar = st::mean(s.times);
    for (const auto& t : c) {
        s.scores.push_back(st::score_test3({t.correct, t.errors, t.aux.at("total_time_s"), t_bar}));
    }
    return s;
}

json sorting_json(const SortSummary& s) {
    return {{"placements", s.placed},
            {"correct_placements", s.correct},
            {"placement_success_pct", 100.0 * s.correct / std::max(1, s.placed)},
            {"success", guarded([&] { return success_json(st::success_rate(s.outcomes)); })},
            {"total_time_s", describe(s.times)},
            {"errors", describe(s.errors)},
            {"accuracy_pct", describe(s.accuracy)},
            {"scores", rounded(s.scores)},
            {"score", describe(s.scores)},
            {"normality_time", guarded([&] { return normality_json(st::jarque_bera(s.times)); })}};
}

json analyse_test3(const SortSummary& glove, const SortSummary& bare) {
    return {{"glove", sorting_json(glove)},
            {"no_glove", sorting_json(bare)},
            {"paired_score", guarded([&] { return ttest_json(st::paired_t_test(glove.scores, bare.scores)); })},
            {"paired_time", guarded([&] { return ttest_json(st::paired_t_test(glove.times, bare.times)); })},
            {"paired_errors", guarded([&] { return ttest_json(st::paired_t_test(glove.errors, bare.errors)); })}};
}

json analyse_test4(const std::vector<TrialTranscript>& c) {
    std::vector<double> scores;
    std::vector<double> totals;
    std::vector<double> scans;
    std::vector<st::SubjectOutcome> outcomes;
    for (const auto& t : c) {
        const st::ScoreInputs4 in{t.aux.at("tT_s"), t.aux.at("t1_s"), static_cast<int>(t.aux.at("n1")),
                                  static_cast<int>(t.aux.at("n2"))};
        scores.push_back(st::score_test4(in));
        totals.push_back(in.total_time_s);
        scans.push_back(in.origin_scans + in.destination_scans);
        outcomes.push_back({t.completed ? 1 : 0, 1});
    }
    return {{"scores", rounded(scores)},
            {"score", describe(scores)},
            {"cv", guarded([&] {
                 const auto r = st::coefficient_of_variation(scores);
                 return json{{"cv", r.cv}, {"mean", r.mean}, {"sd", r.sd}};
             })},
            {"total_time_s", describe(totals)},
            {"region_scans", describe(scans)},
            {"normality_score", guarded([&] { return normality_json(st::jarque_bera(scores)); })},
            {"success", guarded([&] { return success_json(st::success_rate(outcomes)); })}};
}

void check(const ExperimentOptions& opt) {
    if (opt.test_id < 1 || opt.test_id > 4) throw std::invalid_argument("test id must be 1..4");
    if (opt.participants < 2) throw std::invalid_argument("a cohort needs at least 2 participants");
    if (opt.p_error && !(*opt.p_error >= 0.0 && *opt.p_error <= 1.0)) {
        throw std::invalid_argument("p_error must be in [0, 1]");
    }
    opt.device.validate();
    opt.energy.validate();
}

std::vector<double> number_row(std::string_view line, std::size_t line_no, std::size_t width) {
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
            throw ParseError(line_no, "column " + std::to_string(row.size() + 1) + ": not a number: '" +
                                          std::string(cell) + "'");
        }
        row.push_back(v);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (row.size() != width) {
        throw ParseError(line_no, "expected " + std::to_string(width) + " values, got " + std::to_string(row.size()));
    }
    return row;
}

}  // namespace

json energy_summary(const energy::EnergyProfile& p, double battery_mAh) {
    const double avg = energy::average_current_mA(p);
    return {{"sleep_mA", p.sleep_mA},
            {"active_mA", p.active_mA},
            {"supply_V", p.supply_V},
            {"duty_active", p.duty_active},
            {"average_mA", avg},
            {"sleep_W", energy::power_W(p, p.sleep_mA)},
            {"active_W", energy::power_W(p, p.active_mA)},
            {"average_W", energy::power_W(p, avg)},
            {"battery_mAh", battery_mAh},
            {"battery_life_h", energy::battery_life_h(p, battery_mAh)}};
}

json experiment_report(const ExperimentOptions& opt) {
    check(opt);
    json report{{"test_id", opt.test_id},
                {"participants", opt.participants},
                {"seed", opt.seed},
                {"device",
                 {{"record_duration_ms", opt.device.record_duration.count()},
                  {"context_timeout_ms", opt.device.context_timeout.count()},
                  {"playback_preemptible", opt.device.playback_preemptible}}}};

    if (opt.test_id == 3) {
        const AgentParams pg = params_for(opt, true);
        const AgentParams pb = params_for(opt, false);
        const auto glove = cohort(opt, pg, 0);
        const auto bare = cohort(opt, pb, kNoGloveSalt);
        report["params"] = {{"glove", params_json(pg)}, {"no_glove", params_json(pb)}};
        report["cohort"] = {{"glove", participants_json(glove)}, {"no_glove", participants_json(bare)}};
        report["analysis"] = analyse_test3(summarise_sorting(glove), summarise_sorting(bare));
    } else {
        const AgentParams p = params_for(opt, true);
        const auto c = cohort(opt, p, 0);
        report["params"] = params_json(p);
        report["cohort"] = participants_json(c);
        switch (opt.test_id) {
            case 1: report["analysis"] = analyse_test1(c, p); break;
            case 2: report["analysis"] = sorting_json(summarise_sorting(c)); break;
            case 4: report["analysis"] = analyse_test4(c); break;
        }
    }
    report["energy"] = energy_summary(opt.energy, opt.battery_mAh);
    return report;
}

std::string experiment_traces(const ExperimentOptions& opt) {
    check(opt);
    std::string out;
    auto emit = [&](const std::vector<TrialTranscript>& c, const char* condition) {
        for (const auto& t : c) {
            for (const auto& e : t.events) {
                json j = to_json(e);
                j["participant_id"] = t.participant_id;
                if (condition) j["condition"] = condition;
                out += j.dump();
                out += '\n';
            }
        }
    };
    if (opt.test_id == 3) {
        emit(cohort(opt, params_for(opt, true), 0), "glove");
        emit(cohort(opt, params_for(opt, false), kNoGloveSalt), "no_glove");
    } else {
        emit(cohort(opt, params_for(opt, true), 0), nullptr);
    }
    return out;
}

json stats_report(std::string_view csv_text, std::string_view analysis) {
    std::vector<std::string> header;
    st::Matrix rows;
    std::size_t line_no = 0;
    while (!csv_text.empty()) {
        ++line_no;
        const auto nl = csv_text.find('\n');
        std::string_view line = csv_text.substr(0, nl);
        csv_text = nl == std::string_view::npos ? std::string_view{} : csv_text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        if (header.empty()) {
            std::size_t start = 0;
            for (;;) {
                const auto comma = line.find(',', start);
                header.emplace_back(line.substr(start, comma == line.npos ? line.npos : comma - start));
                if (comma == line.npos) break;
                start = comma + 1;
            }
            continue;
        }
        rows.push_back(number_row(line, line_no, header.size()));
    }
    if (header.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");
    if (rows.empty()) throw StatsError("no data rows");

    const std::size_t k = header.size();
    json out{{"analysis", std::string(analysis)}, {"columns", header}, {"rows", rows.size()}};
    if (analysis == "ttest") {
        if (k != 2) throw StatsError("ttest needs exactly 2 columns, got " + std::to_string(k));
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& r : rows) {
            x.push_back(r[0]);
            y.push_back(r[1]);
        }
        out["result"] = ttest_json(st::paired_t_test(x, y));
    } else if (analysis == "anova") {
        if (k < 2) throw StatsError("anova needs at least 2 columns, got " + std::to_string(k));
        out["result"] = anova_json(st::rm_anova_gg(rows));
        out["bonferroni"] = guarded([&] {
            const auto r = st::bonferroni_pairwise(rows);
            return json{{"comparisons", r.comparisons}, {"raw_p", matrix_json(r.raw_p)},
                        {"adjusted_p", matrix_json(r.adjusted_p)}};
        });
    } else if (analysis == "alpha") {
        if (k < 2) throw StatsError("alpha needs at least 2 item columns, got " + std::to_string(k));
        const auto r = st::cronbach_alpha(rows);
        out["result"] = {{"alpha", r.alpha}, {"items", r.items}, {"subjects", r.subjects}};
    } else if (analysis == "cv") {
        if (k != 1) throw StatsError("cv needs exactly 1 column, got " + std::to_string(k));
        std::vector<double> x;
        for (const auto& r : rows) x.push_back(r[0]);
        const auto r = st::coefficient_of_variation(x);
        // Three decimals are truncated, not rounded.
        out["result"] = {{"cv", r.cv}, {"cv_3dp", std::trunc(r.cv * 1000.0) / 1000.0}, {"mean", r.mean},
                         {"sd", r.sd}};
    } else {
        throw std::invalid_argument("unknown analysis '" + std::string(analysis) + "'");
    }
    return out;
}

}  // namespace rfglove
