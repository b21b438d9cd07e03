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
#include "rfglove/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

namespace rfglove {
namespace {

// Hand held this far in front of a tag when aiming at it.
constexpr double kAimStandoffMm = 20.0;
// Pause between hearing the new-tag cue and pressing the button.
constexpr Millis kButtonDelay{700};
// Pause between consecutive hole scans in tests 2 and 3.
constexpr Millis kRescanGap{800};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

// Feature a sorting task keys on: colour for setup 2, polygon for setup 3.
std::string sort_feature(const SceneObject& o, int setup) {
    if (setup == 2) return o.color;
    const auto dash = o.shape.rfind('-');
    return dash == std::string::npos ? o.shape : o.shape.substr(dash + 1);
}

class Trial {
public:
    Trial(int test_id, const AgentParams& params, const Scene& scene, const DeviceConfig& cfg,
          int participant_id)
        : scene_(scene), params_(params), rng_(params.seed), device_(db_, cfg), tags_(scene.tag_placements()) {
        out_.test_id = test_id;
        out_.participant_id = participant_id;
        out_.seed = params.seed;
        out_.with_glove = params.with_glove;
    }

    TrialTranscript finish() && {
        out_.events = device_.trace();
        return std::move(out_);
    }

    void test1() {
        std::vector<const SceneObject*> objects;
        for (const auto& o : scene_.objects) {
            if (o.tag) objects.push_back(&o);
        }
        std::shuffle(objects.begin(), objects.end(), rng_);

        // Some tags already carry a recording when the participant starts.
        const auto prebound = std::min<std::size_t>(
            static_cast<std::size_t>(std::max(0, params_.prebound_objects)), objects.size());
        std::vector<std::size_t> order(objects.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);
        for (std::size_t i = 0; i < prebound; ++i) {
            const SceneObject& o = *objects[order[i]];
            db_.bind(*o.tag, make_clip(*o.tag, o.name, voice(o.name), device_.config().record_duration));
        }

        const DeviceConfig& cfg = device_.config();
        for (std::size_t i = 0; i < objects.size(); ++i) {
            const SceneObject& o = *objects[i];
            const std::int64_t start = device_.clock_ms();
            const std::size_t first_entry = device_.trace().size();
            const auto target_ms = to_ms(sample_time(
                expected_attempt_time_s(params_, static_cast<int>(i) + 1), params_.time_sd_s));
            const bool slip = bernoulli(params_.p_error);
            const HandPose aim = aim_at(o.x_mm, o.y_mm);
            const auto preview = scan(aim, tags_, rf_);
            const std::int64_t latency = preview ? latency_ms(*preview) : 0;

            if (db_.contains(*o.tag)) {
                if (slip) {
                    // Hand misses the tag: nothing is read during the attempt.
                    wait(target_ms);
                    (void)scan(HandPose(aim.x_mm, aim.y_mm, aim.facing_deg + 180.0), tags_, rf_);
                } else {
                    wait(target_ms - latency);
                    read(aim);
                }
            } else if (slip) {
                // Cue heard, but the button comes after the context expired.
                const std::int64_t late = std::max<std::int64_t>(1, cfg.context_timeout.count());
                wait(target_ms - latency - late);
                read(aim);
                wait(late);
                device_.apply(ButtonDown{});
            } else {
                wait(target_ms - latency - kButtonDelay.count() - cfg.record_duration.count());
                read(aim);
                wait(kButtonDelay.count());
                device_.apply(ButtonDown{});
                device_.apply(RecordingInput{o.name, voice(o.name)});
                wait(cfg.record_duration.count());
            }

            const bool ok = produced(first_entry, *o.tag);
            out_.attempt_success.push_back(ok);
            out_.per_attempt_times_s.push_back(static_cast<double>(device_.clock_ms() - start) / 1000.0);
            (ok ? out_.correct : out_.errors) += 1;
        }
        out_.completed = out_.errors == 0;
        out_.aux["attempts"] = static_cast<double>(objects.size());
    }

    void sorting(int setup, bool force_no_errors) {
        std::vector<const SceneObject*> disks;
        std::vector<const SceneObject*> holes;
        for (const auto& o : scene_.objects) {
            if (!o.tag) continue;
            if (starts_with(o.shape, "box-hole")) holes.push_back(&o);
            if (starts_with(o.shape, "disk")) disks.push_back(&o);
        }
        if (holes.size() < 2 || disks.empty()) throw std::invalid_argument("scene has no hole box");

        const double p_error = force_no_errors ? 0.0 : params_.p_error;
        if (params_.with_glove) {
            // Tags were labelled beforehand with a sighted helper.
            const Millis dur = device_.config().record_duration;
            for (const auto* d : disks) {
                const std::string label = sort_feature(*d, setup);
                db_.bind(*d->tag, make_clip(*d->tag, label, voice(label), dur));
            }
            for (const auto* h : holes) {
                const std::string label = sort_feature(*h, setup) + " hole";
                db_.bind(*h->tag, make_clip(*h->tag, label, voice(label), dur));
            }
        }
        std::shuffle(disks.begin(), disks.end(), rng_);

        std::int64_t clock = 0;  // task clock, also used without the glove
        for (const auto* disk : disks) {
            const std::int64_t target_ms = to_ms(sample_time(params_.move_mean_s, params_.move_sd_s));
            const bool slip = bernoulli(p_error);
            const SceneObject* chosen = nullptr;
            std::int64_t spent = 0;

            if (params_.with_glove) {
                const std::int64_t start = device_.clock_ms();
                wait(static_cast<std::int64_t>(0.4 * static_cast<double>(target_ms)));
                const auto heard = read(aim_at(disk->x_mm, disk->y_mm));
                auto order = holes;
                std::shuffle(order.begin(), order.end(), rng_);
                for (const auto* hole : order) {
                    wait(kRescanGap.count());
                    const auto hole_label = read(aim_at(hole->x_mm, hole->y_mm));
                    if (heard && hole_label && *hole_label == *heard + " hole") {
                        chosen = hole;
                        break;
                    }
                }
                wait(target_ms - (device_.clock_ms() - start));
                spent = device_.clock_ms() - start;
            } else {
                // By touch alone: the right hole is found unless the participant slips.
                for (const auto* hole : holes) {
                    if (sort_feature(*hole, setup) == sort_feature(*disk, setup)) chosen = hole;
                }
                spent = std::max<std::int64_t>(1, target_ms);
            }

            if (slip || chosen == nullptr) {
                std::vector<const SceneObject*> wrong;
                for (const auto* hole : holes) {
                    if (hole != chosen) wrong.push_back(hole);
                }
                std::uniform_int_distribution<std::size_t> pick(0, wrong.size() - 1);
                chosen = wrong[pick(rng_)];
            }
            clock += spent;
            const bool correct = sort_feature(*chosen, setup) == sort_feature(*disk, setup);
            out_.placements.push_back(Placement{disk->object_id, chosen->object_id, correct, clock});
            out_.per_attempt_times_s.push_back(static_cast<double>(spent) / 1000.0);
            (correct ? out_.correct : out_.errors) += 1;
        }
        out_.completed = out_.errors == 0;
        out_.aux["total_time_s"] = static_cast<double>(clock) / 1000.0;
    }

    void test4() {
        if (scene_.regions.size() < 2) throw std::invalid_argument("scene has no table regions");

        // Counter-clockwise order of regions around the table centre.
        std::vector<const Region*> ring;
        for (const auto& r : scene_.regions) ring.push_back(&r);
        const double cx = scene_.extent.center_x();
        const double cy = scene_.extent.center_y();
        auto angle = [&](const Region* r) {
            return std::atan2(r->bounds.center_y() - cy, r->bounds.center_x() - cx);
        };
        std::sort(ring.begin(), ring.end(), [&](const Region* a, const Region* b) {
            return std::make_pair(angle(a), a->region_id) < std::make_pair(angle(b), b->region_id);
        });

        const Millis dur = device_.config().record_duration;
        for (const auto* r : ring) {
            const std::string label = region_label(r->region_id);
            db_.bind(r->tag, make_clip(r->tag, label, voice(label), dur));
        }
        for (const auto& o : scene_.objects) {
            if (o.tag) db_.bind(*o.tag, make_clip(*o.tag, o.name, voice(o.name), dur));
        }

        std::uniform_int_distribution<std::size_t> pick(0, ring.size() - 1);
        std::size_t pos = pick(rng_);
        const std::size_t origin = pick(rng_);
        std::size_t destination = pick(rng_);
        while (destination == origin) destination = pick(rng_);

        const std::int64_t start = device_.clock_ms();
        int rescans = 0;

        // Walk until the region tag announces `wanted`; returns scans made.
        auto walk_to = [&](std::size_t wanted) {
            int scans = 0;
            for (;;) {
                const Region* r = ring[pos];
                wait(step_ms());
                auto heard = read(aim_at_region(*r));
                ++scans;
                while (bernoulli(params_.p_error)) {
                    // Lost track of what was announced: scan the same tag again.
                    wait(step_ms());
                    heard = read(aim_at_region(*r));
                    ++scans;
                    ++rescans;
                }
                if (heard && *heard == region_label(ring[wanted]->region_id)) return scans;
                pos = (pos + 1) % ring.size();
            }
        };

        const int n1 = walk_to(origin);
        const Region& here = *ring[origin];
        std::vector<const SceneObject*> disks;
        for (const auto& o : scene_.objects) {
            if (o.tag && here.bounds.contains(o.x_mm, o.y_mm)) disks.push_back(&o);
        }
        std::shuffle(disks.begin(), disks.end(), rng_);
        const SceneObject* found = nullptr;
        for (const auto* d : disks) {
            wait(step_ms());
            if (read(aim_at(d->x_mm, d->y_mm)) == std::optional<std::string>("A")) {
                found = d;
                break;
            }
        }
        const std::int64_t t1 = device_.clock_ms() - start;

        pos = (pos + 1) % ring.size();
        const int n2 = walk_to(destination);
        wait(step_ms());
        const std::int64_t total = device_.clock_ms() - start;

        const Region& dest = *ring[destination];
        const bool placed = found != nullptr;
        out_.placements.push_back(Placement{found ? found->object_id : std::string(),
                                            "region-" + std::to_string(dest.region_id), placed,
                                            device_.clock_ms()});
        out_.correct = placed ? 1 : 0;
        out_.errors = rescans;
        out_.completed = placed;
        out_.per_attempt_times_s.push_back(static_cast<double>(total) / 1000.0);
        out_.aux["tT_s"] = static_cast<double>(total) / 1000.0;
        out_.aux["t1_s"] = static_cast<double>(t1) / 1000.0;
        out_.aux["n1"] = n1;
        out_.aux["n2"] = n2;
        out_.aux["origin_region"] = here.region_id;
        out_.aux["destination_region"] = dest.region_id;
    }

private:
    static std::string voice(const std::string& label) { return "pcm:" + label; }
    static std::string region_label(int id) { return "region " + std::to_string(id); }
    static std::int64_t to_ms(double seconds) { return std::llround(seconds * 1000.0); }
    static std::int64_t latency_ms(const ReadResult& r) {
        return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(r.latency_ms)));
    }

    static HandPose aim_at(double x, double y) { return HandPose(x, y - kAimStandoffMm, 90.0); }

    HandPose aim_at_region(const Region& r) const {
        // Region tags sit on the table edge; reach for them from inside the table.
        const bool front_edge = r.tag_y_mm < scene_.extent.center_y();
        return front_edge ? HandPose(r.tag_x_mm, r.tag_y_mm + kAimStandoffMm, 270.0)
                          : HandPose(r.tag_x_mm, r.tag_y_mm - kAimStandoffMm, 90.0);
    }

    // Lognormal with the requested mean and sd.
    double sample_time(double mean_s, double sd_s) {
        if (sd_s <= 0.0) return mean_s;
        const double s2 = std::log1p((sd_s * sd_s) / (mean_s * mean_s));
        std::lognormal_distribution<double> dist(std::log(mean_s) - 0.5 * s2, std::sqrt(s2));
        return dist(rng_);
    }

    std::int64_t step_ms() { return to_ms(sample_time(params_.move_mean_s, params_.move_sd_s)); }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return std::bernoulli_distribution(p)(rng_);
    }

    void wait(std::int64_t ms) { device_.apply(Tick{Millis{std::max<std::int64_t>(1, ms)}}); }

    // Lets a non-preemptible clip finish so the next read is not swallowed.
    void settle() {
        const DeviceState& st = device_.state();
        if (device_.config().playback_preemptible) return;
        if (const auto* pb = std::get_if<PlaybackMode>(&st.mode)) {
            wait((pb->clip.duration - pb->elapsed).count());
        }
    }

    // Scans from `pose`; on a hit the read latency elapses and the device
    // sees a TagRead. Returns the label of any clip played in response.
    std::optional<std::string> read(const HandPose& pose) {
        settle();
        const auto hit = scan(pose, tags_, rf_);
        if (!hit) return std::nullopt;
        wait(latency_ms(*hit));
        const TraceEntry& e = device_.apply(TagRead{hit->uid, hit->latency_ms});
        for (const auto& a : e.actions) {
            if (const auto* play = std::get_if<PlayClip>(&a)) return play->clip.label;
        }
        return std::nullopt;
    }

    bool produced(std::size_t first_entry, const TagUid& uid) const {
        const auto& trace = device_.trace();
        for (std::size_t i = first_entry; i < trace.size(); ++i) {
            for (const auto& a : trace[i].actions) {
                const bool hit = std::holds_alternative<PlayClip>(a) || std::holds_alternative<StoreBinding>(a);
                if (hit && *action_uid(a) == uid) return true;
            }
        }
        return false;
    }

    const Scene& scene_;
    AgentParams params_;
    std::mt19937_64 rng_;
    TagDatabase db_;
    DeviceRunner device_;
    std::vector<TagPlacement> tags_;
    RfParams rf_;
    TrialTranscript out_;
};

}  // namespace

void AgentParams::validate() const {
    if (!(t_inf_s > 0.0 && t0_s >= t_inf_s)) throw std::invalid_argument("need t0_s >= t_inf_s > 0");
    if (!(learn_rate >= 0.0)) throw std::invalid_argument("learn_rate must be >= 0");
    if (!(move_mean_s > 0.0)) throw std::invalid_argument("move_mean_s must be > 0");
    if (!(time_sd_s >= 0.0 && move_sd_s >= 0.0)) throw std::invalid_argument("time sds must be >= 0");
    if (!(p_error >= 0.0 && p_error <= 1.0)) throw std::invalid_argument("p_error must be in [0, 1]");
}

AgentParams AgentParams::defaults_for(int test_id, bool with_glove) {
    AgentParams p;
    p.with_glove = true;
    switch (test_id) {
        case 1:
            // (1 - p)^8 ~ 13/17 subjects with a clean run.
            p.p_error = 0.033;
            break;
        case 2:
            // 114.0 s +/- 16.64 s for nine placements.
            p.move_mean_s = 114.0 / 9.0;
            p.move_sd_s = 16.64 / 3.0;
            p.p_error = 0.0;
            break;
        case 3:
            p.with_glove = with_glove;
            if (with_glove) {
                p.move_mean_s = 106.8 / 9.0;
                p.move_sd_s = 30.62 / 3.0;
                p.p_error = 0.06 / 9.0;
            } else {
                p.move_mean_s = 249.0 / 9.0;
                p.move_sd_s = 99.45 / 3.0;
                p.p_error = 2.4 / 9.0;
            }
            break;
        case 4:
            p.move_mean_s = 8.0;
            p.move_sd_s = 3.0;
            p.p_error = 0.05;
            break;
        default: throw std::out_of_range("test id must be 1..4");
    }
    return p;
}

double expected_attempt_time_s(const AgentParams& params, int attempt) {
    return params.t_inf_s + (params.t0_s - params.t_inf_s) * std::exp(-params.learn_rate * (attempt - 1));
}

TrialTranscript run_test(int test_id, const AgentParams& params, const Scene& scene, const DeviceConfig& cfg,
                         int participant_id) {
    if (test_id < 1 || test_id > 4) throw std::invalid_argument("test id must be 1..4");
    if (scene.setup != test_id) {
        throw std::invalid_argument("test " + std::to_string(test_id) + " needs a setup-" +
                                    std::to_string(test_id) + " scene, got setup " + std::to_string(scene.setup));
    }
    params.validate();

    Trial trial(test_id, params, scene, cfg, participant_id);
    switch (test_id) {
        case 1: trial.test1(); break;
        case 2: trial.sorting(2, /*force_no_errors=*/true); break;
        case 3: trial.sorting(3, false); break;
        case 4: trial.test4(); break;
    }
    return std::move(trial).finish();
}

std::uint64_t participant_seed(std::uint64_t seed, int participant_id) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(participant_id)));
}

std::vector<TrialTranscript> run_cohort(int test_id, int n, const AgentParams& params, std::uint64_t seed,
                                        const DeviceConfig& cfg) {
    if (n < 1) throw std::invalid_argument("cohort needs at least one participant");
    const Scene scene = build_setup(test_id, seed);
    std::vector<TrialTranscript> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        AgentParams p = params;
        p.seed = participant_seed(seed, i);
        out.push_back(run_test(test_id, p, scene, cfg, i));
    }
    return out;
}

}  // namespace rfglove
