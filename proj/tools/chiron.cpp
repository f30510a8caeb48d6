// chiron: model validation, the evidence server, mission simulation,
// scoring and log replay.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O error.

#include <CLI11.hpp>
#include <httplib.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "chiron/bn/network.hpp"
#include "chiron/error.hpp"
#include "chiron/fusion/codec.hpp"
#include "chiron/service/server.hpp"
#include "chiron/sim/mission.hpp"
#include "chiron/triage/model.hpp"

namespace {

using chiron::Error;
using chiron::ErrorCode;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

chiron::bn::NetworkSpec load_model(const std::string& path) {
    return path.empty() ? chiron::triage::default_network() : chiron::bn::parse_network(read_file(path));
}

int run_validate(const std::string& model_path, const std::string& annotations_path) {
    const auto spec = chiron::bn::parse_network_unchecked(read_file(model_path));
    const auto report = chiron::bn::validate_network(spec);
    for (const auto& v : report) std::cout << "violation: " << v.message << "\n";
    if (!report.empty()) {
        std::cout << model_path << ": " << report.size() << " violation(s)\n";
        return kExitInvalid;
    }
    if (!annotations_path.empty()) {
        const auto annotations = chiron::triage::parse_annotations(read_file(annotations_path));
        const auto lint = chiron::triage::validate_convention(spec, annotations);
        for (const auto& v : lint) std::cout << "convention: " << v.message << "\n";
        if (!lint.empty()) {
            std::cout << annotations_path << ": " << lint.size() << " convention violation(s)\n";
            return kExitInvalid;
        }
    }
    std::cout << "ok: " << spec.name << " " << spec.version << ", " << spec.nodes.size() << " nodes\n";
    return kExitOk;
}

int run_serve(const std::string& model_path, const std::string& address, unsigned short port) {
    chiron::service::Session session(load_model(model_path));
    chiron::service::ServerOptions options;
    options.address = address;
    options.port = port;
    options.handle_signals = true;
    chiron::service::Server server(session, options);
    const auto bound = server.start();
    std::cout << "listening on " << address << ":" << bound << " (model " << session.model()->version << ")"
              << std::endl;
    server.wait();
    return kExitOk;
}

int run_simulate(const std::string& scenario_path, const std::string& sensor_path, const std::string& mode,
                 std::optional<std::uint64_t> seed, const std::string& out_path, const std::string& model_path) {
    const auto scenario = chiron::sim::parse_scenario(read_file(scenario_path));
    auto sensor = chiron::sim::parse_sensor_model(read_file(sensor_path));
    if (seed) sensor.seed = *seed;
    const auto spec = load_model(model_path);
    const auto result =
        chiron::sim::run_mission(scenario, sensor, chiron::sim::mission_mode_from_string(mode), spec);
    write_file(out_path, chiron::sim::format_mission_log(result.log));
    std::cout << chiron::sim::scorecard_to_json(result.score).dump(2) << "\n";
    return kExitOk;
}

int run_score(const std::string& log_path, const std::string& scenario_path) {
    const auto scenario = chiron::sim::parse_scenario(read_file(scenario_path));
    const auto events = chiron::sim::parse_mission_log(read_file(log_path));
    const auto card = chiron::sim::score_mission(chiron::sim::reports_from_log(events), scenario);
    std::cout << chiron::sim::scorecard_to_json(card).dump(2) << "\n";
    return kExitOk;
}

int run_replay(const std::string& log_path, const std::string& url) {
    const auto events = chiron::sim::parse_mission_log(read_file(log_path));
    httplib::Client client(url);
    client.set_connection_timeout(5);
    std::map<std::string, int> outcomes;
    for (const auto& e : events) {
        if (e.kind != "evidence") continue;
        const auto path = "/api/casualties/" + e.casualty_id + "/evidence";
        auto res = client.Post(path, e.payload.dump(), "application/json");
        if (!res) throw Error(ErrorCode::Io, "POST " + url + path + " failed: " + httplib::to_string(res.error()));
        std::string status = "http-" + std::to_string(res->status);
        try {
            status = chiron::fusion::Json::parse(res->body).value("status", status);
        } catch (const std::exception&) {
        }
        ++outcomes[status];
    }
    for (const auto& [status, count] : outcomes) std::cout << status << ": " << count << "\n";
    return kExitOk;
}

int run_generate(std::size_t casualties, std::uint64_t seed, const std::string& name, const std::string& out_path,
                 const std::string& model_path) {
    chiron::sim::ScenarioOptions options;
    options.casualty_count = casualties;
    options.name = name;
    const auto scenario = chiron::sim::generate_scenario(load_model(model_path), options, seed);
    write_file(out_path, chiron::sim::serialize_scenario(scenario));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian evidence fusion for casualty triage"};
    app.require_subcommand(1);

    std::string model_path, annotations_path, scenario_path, sensor_path, mode = "fused", out_path, log_path, url;
    std::string address = "127.0.0.1", name = "generated";
    unsigned short port = 8080;
    std::optional<std::uint64_t> seed;
    std::uint64_t generate_seed = 1;
    std::size_t casualties = 11;

    auto* validate = app.add_subcommand("validate", "Check a network file (and optionally its annotations)");
    validate->add_option("model-file", model_path, "Network file")->required();
    validate->add_option("--annotations", annotations_path, "Link annotation file to lint against the model");

    auto* serve = app.add_subcommand("serve", "Run the evidence API and update stream");
    serve->add_option("--model", model_path, "Network file (default: shipped model)");
    serve->add_option("--port", port, "Listen port");
    serve->add_option("--address", address, "Listen address");

    auto* simulate = app.add_subcommand("simulate", "Run one emulated mission and write its log");
    simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate->add_option("--sensor", sensor_path, "Sensor model file")->required();
    simulate->add_option("--mode", mode, "vision or fused")->check(CLI::IsMember({"vision", "fused"}));
    simulate->add_option("--seed", seed, "Overrides the sensor file's seed");
    simulate->add_option("--out", out_path, "Mission log output")->required();
    simulate->add_option("--model", model_path, "Network file (default: shipped model)");

    auto* score = app.add_subcommand("score", "Score the reports in a mission log");
    score->add_option("--log", log_path, "Mission log")->required();
    score->add_option("--scenario", scenario_path, "Scenario file")->required();

    auto* replay = app.add_subcommand("replay", "Post a mission log's evidence to a running server");
    replay->add_option("--log", log_path, "Mission log")->required();
    replay->add_option("--url", url, "Server base URL, e.g. http://127.0.0.1:8080")->required();

    auto* generate = app.add_subcommand("generate-scenario", "Sample a scenario from the model");
    generate->add_option("--casualties", casualties, "Casualty count");
    generate->add_option("--seed", generate_seed, "Sampling seed");
    generate->add_option("--name", name, "Scenario name");
    generate->add_option("--out", out_path, "Scenario output")->required();
    generate->add_option("--model", model_path, "Network file (default: shipped model)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*validate) return run_validate(model_path, annotations_path);
        if (*serve) return run_serve(model_path, address, port);
        if (*simulate) return run_simulate(scenario_path, sensor_path, mode, seed, out_path, model_path);
        if (*score) return run_score(log_path, scenario_path);
        if (*replay) return run_replay(log_path, url);
        if (*generate) return run_generate(casualties, generate_seed, name, out_path, model_path);
    } catch (const Error& e) {
        std::cerr << "error [" << chiron::to_string(e.code()) << "]: " << e.what() << "\n";
        return e.code() == ErrorCode::Io ? kExitIo : kExitInvalid;
    }
    return kExitInvalid;
}
