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

// Seeded synthetic participant for the four trial protocols.
//
// This is a data generator that exercises the device, scoring and
// statistics end to end. It does not claim to reproduce human results.
//
//   Test 1  identify-and-record on the eight tagged objects of setup 1.
//           Mean time of attempt i: t_inf + (t0 - t_inf) * exp(-rate * (i-1)).
//   Test 2  sort nine colour disks into three holes (setup 2), guided by
//           the clips the glove plays back. Placements never fail.
//   Test 3  the same task with polygon disks (setup 3), with or without
//           the glove.
//   Test 4  walk the eight table regions counter-clockwise, find disk "A"
//           in the origin region and carry it to the destination region.
//
// Every glove interaction goes through DeviceRunner, so the transcript is a
// genuine state-machine run. Task durations are lognormal with the given
// mean and sd; errors are independent Bernoulli draws.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rfglove/device.hpp"
#include "rfglove/rfmodel.hpp"
#include "rfglove/scene.hpp"

namespace rfglove {

struct AgentParams {
    // Test 1 learning curve.
    double t0_s = 70.17;
    double t_inf_s = 27.87;
    double learn_rate = 0.35;
    double time_sd_s = 8.0;  // 0 disables timing noise
    int prebound_objects = 3;

    // Tests 2-4: duration of one placement (tests 2, 3) or one scan step (test 4).
    double move_mean_s = 12.67;
    double move_sd_s = 5.5;

    double p_error = 0.05;
    bool with_glove = true;  // test 3 only
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument when t0 < t_inf, t_inf <= 0, a mean
    /// time is <= 0, an sd is negative or p_error is outside [0, 1].
    void validate() const;

    /// Calibrated defaults for a test (and glove condition for test 3).
    static AgentParams defaults_for(int test_id, bool with_glove = true);
};

/// Expected duration of Test-1 attempt `attempt` (1-based), in seconds.
double expected_attempt_time_s(const AgentParams& params, int attempt);

struct Placement {
    std::string object_id;
    std::string target_id;  // hole or region the object was put into
    bool correct = false;
    std::int64_t t_ms = 0;
};

struct TrialTranscript {
    int test_id = 0;
    int participant_id = 0;
    std::uint64_t seed = 0;
    bool with_glove = true;
    std::vector<TraceEntry> events;
    std::vector<double> per_attempt_times_s;
    std::vector<bool> attempt_success;
    std::vector<Placement> placements;
    int correct = 0;
    int errors = 0;
    bool completed = false;
    // Test 4: tT_s, t1_s, n1, n2. Tests 2-3: total_time_s.
    std::map<std::string, double> aux;
};

/// Runs one participant through a test on `scene`, which must have been
/// built for the matching setup (throws std::invalid_argument otherwise).
TrialTranscript run_test(int test_id, const AgentParams& params, const Scene& scene,
                         const DeviceConfig& cfg = {}, int participant_id = 1);

/// Seed of participant `participant_id` (1-based) in a cohort seeded with `seed`.
std::uint64_t participant_seed(std::uint64_t seed, int participant_id);

/// n participants on build_setup(test_id, seed), participant i running with
/// seed participant_seed(seed, i).
std::vector<TrialTranscript> run_cohort(int test_id, int n, const AgentParams& params, std::uint64_t seed,
                                        const DeviceConfig& cfg = {});

}  // namespace rfglove
