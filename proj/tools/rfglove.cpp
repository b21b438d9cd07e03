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
// rfglove: command-line front end.
//
//   rfglove sim --scene scene.json --script run.txt [-o out.json] [--db DIR]
//   rfglove experiment --test 2 -n 17 --seed 7 [--p-error 0] [-o report.json]
//   rfglove stats --csv data.csv --analysis cv [-o result.json]
//   rfglove scene --setup 1 --seed 7 [-o scene.json]
//   rfglove serve [--port 8080] [--bind 127.0.0.1]

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"

#include "rfglove/error.hpp"
#include "rfglove/report.hpp"
#include "rfglove/scene.hpp"
#include "rfglove/server.hpp"
#include "rfglove/service.hpp"
#include "rfglove/sim.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rfglove::PersistenceError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw rfglove::PersistenceError("cannot write " + path);
    out << text;
    if (!out.flush()) throw rfglove::PersistenceError("write failed: " + path);
}

struct DeviceFlags {
    long record_ms = 3000;
    long timeout_ms = 10000;
    bool no_preempt = false;

    void add(CLI::App* cmd) {
        cmd->add_option("--record-ms", record_ms, "Recording window in ms")->check(CLI::PositiveNumber);
        cmd->add_option("--timeout-ms", timeout_ms, "Context timeout in ms")->check(CLI::NonNegativeNumber);
        cmd->add_flag("--no-preempt", no_preempt, "A new tag does not interrupt playback");
    }
    rfglove::DeviceConfig config() const {
        rfglove::DeviceConfig cfg;
        cfg.record_duration = rfglove::Millis{record_ms};
        cfg.context_timeout = rfglove::Millis{timeout_ms};
        cfg.playback_preemptible = !no_preempt;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RFID assistive glove simulator"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("sim", "Run a device script against a scene");
    std::string scene_path, script_path, sim_out, db_dir;
    DeviceFlags sim_dev;
    sim->add_option("--scene", scene_path, "Scene JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--script", script_path, "Device script")->required()->check(CLI::ExistingFile);
    sim->add_option("-o,--out", sim_out, "Transcript path (stdout if omitted)");
    sim->add_option("--db", db_dir, "Tag database directory (created if missing)");
    sim_dev.add(sim);

    auto* exp = app.add_subcommand("experiment", "Run a synthetic cohort through a test");
    rfglove::ExperimentOptions eopt;
    std::string exp_out, traces_out;
    std::optional<double> p_error;
    exp->add_option("--test", eopt.test_id, "Test 1-4")->required()->check(CLI::Range(1, 4));
    exp->add_option("-n,--participants", eopt.participants, "Cohort size")->check(CLI::Range(2, 10000));
    exp->add_option("--seed", eopt.seed, "Cohort seed");
    exp->add_option("--p-error", p_error, "Per-step error probability")->check(CLI::Range(0.0, 1.0));
    exp->add_option("--duty", eopt.energy.duty_active, "Active duty cycle")->check(CLI::Range(0.0, 1.0));
    exp->add_option("--battery-mah", eopt.battery_mAh, "Battery capacity")->check(CLI::PositiveNumber);
    exp->add_option("-o,--out", exp_out, "Report path (stdout if omitted)");
    exp->add_option("--traces", traces_out, "Also write every participant's trace as JSON lines");
    DeviceFlags exp_dev;
    exp_dev.add(exp);

    auto* st = app.add_subcommand("stats", "Analyse a CSV with a header row");
    std::string csv_path, analysis, st_out;
    st->add_option("--csv", csv_path, "Input CSV")->required()->check(CLI::ExistingFile);
    st->add_option("--analysis", analysis, "ttest | anova | alpha | cv")
        ->required()
        ->check(CLI::IsMember({"ttest", "anova", "alpha", "cv"}));
    st->add_option("-o,--out", st_out, "Result path (stdout if omitted)");

    auto* sc = app.add_subcommand("scene", "Write a canonical setup scene");
    int setup = 1;
    std::uint64_t scene_seed = 1;
    std::string sc_out;
    sc->add_option("--setup", setup, "Setup 1-4")->required()->check(CLI::Range(1, 4));
    sc->add_option("--seed", scene_seed, "Placement seed");
    sc->add_option("-o,--out", sc_out, "Scene path (stdout if omitted)");

    auto* serve = app.add_subcommand("serve", "Serve live sessions over HTTP and WebSocket");
    std::uint16_t port = rfglove::default_port();
    std::string bind = "127.0.0.1";
    serve->add_option("--port", port, "Listen port (default $RFGLOVE_PORT or 8080)");
    serve->add_option("--bind", bind, "Listen address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const auto scene = rfglove::load_scene(scene_path);
            const auto script = rfglove::parse_script(read_file(script_path));
            rfglove::TagDatabase db = db_dir.empty() ? rfglove::TagDatabase() : rfglove::TagDatabase::open(db_dir);
            write_output(sim_out, rfglove::run_sim(scene, script, db, sim_dev.config()).dump(2) + "\n");
        } else if (*exp) {
            eopt.p_error = p_error;
            eopt.device = exp_dev.config();
            write_output(exp_out, rfglove::experiment_report(eopt).dump(2) + "\n");
            if (!traces_out.empty()) write_output(traces_out, rfglove::experiment_traces(eopt));
        } else if (*st) {
            write_output(st_out, rfglove::stats_report(read_file(csv_path), analysis).dump(2) + "\n");
        } else if (*sc) {
            write_output(sc_out, rfglove::scene_to_json(rfglove::build_setup(setup, scene_seed)).dump(2) + "\n");
        } else if (*serve) {
            sigset_t signals;
            sigemptyset(&signals);
            sigaddset(&signals, SIGINT);
            sigaddset(&signals, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &signals, nullptr);

            rfglove::SessionManager sessions;
            rfglove::Server server(sessions, bind, port);
            std::cerr << "rfglove: listening on http://" << bind << ":" << server.port() << "\n";
            std::thread waiter([&] {
                int sig = 0;
                sigwait(&signals, &sig);
                sessions.close_all();
                server.stop();
            });
            server.run();
            waiter.join();
        }
    } catch (const rfglove::ParseError& e) {
        std::cerr << "rfglove: parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rfglove: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
