#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bifluid/config.hpp"
#include "bifluid/coupler.hpp"
#include "bifluid/errors.hpp"
#include "bifluid/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bifluid;

namespace {

json error_json(const char* kind, const std::string& message, int code)
{
    return {{"error", kind}, {"message", message}, {"exit_code", code}};
}

/// Runs `body`, mapping library errors to the exit-code contract and printing the error JSON.
template <class F>
int guarded(F&& body, json* error_out = nullptr)
{
    json err;
    int code = 0;
    try {
        return body();
    } catch (const Error& e) {
        code = e.exit_code();
        err = error_json(e.kind(), e.what(), code);
    } catch (const std::exception& e) {
        code = 1;
        err = error_json("internal_error", e.what(), code);
    }
    std::cerr << err.dump() << std::endl;
    if (error_out) *error_out = err;
    return code;
}

int run_one(const RunConfig& cfg)
{
    json err;
    const int code = guarded(
        [&] {
            const Trajectory traj = run_with_configured_reference(cfg);
            write_run_outputs(traj, cfg.output_dir);
            return 0;
        },
        &err);
    if (code != 0 && code != 2) {
        fs::create_directories(cfg.output_dir);
        std::ofstream out(fs::path(cfg.output_dir) / "summary.json");
        out << json{{"format", summary_format}, {"status", "error"}, {"exit_code", code}, {"error", err}}.dump(2) << '\n';
    }
    return code;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int sweep(const std::string& path, const std::string& vary)
{
    const auto eq = vary.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == vary.size())
        throw ConfigError("--vary expects key=v1,v2,...");
    const std::string key = vary.substr(0, eq);
    std::vector<std::string> values;
    std::istringstream vs(vary.substr(eq + 1));
    for (std::string v; std::getline(vs, v, ',');)
        if (!v.empty()) values.push_back(v);
    if (key == "output.dir") throw ConfigError("--vary cannot vary output.dir");

    const auto base_entries = read_entries(read_text(path), path);
    const RunConfig base = build_config(base_entries, path);
    std::vector<RunConfig> cfgs;
    for (const auto& v : values) {
        auto entries = base_entries;
        bool replaced = false;
        for (auto& e : entries)
            if (e.key == key) {
                e.value = v;
                replaced = true;
            }
        if (!replaced) entries.push_back({key, v, 0});
        RunConfig c = build_config(entries, path + " [" + key + "=" + v + "]");
        c.output_dir = (fs::path(base.output_dir) / (key + "=" + v)).string();
        cfgs.push_back(std::move(c));
    }

    std::vector<std::future<int>> jobs;
    for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&c] { return run_one(c); }));
    int worst = 0;
    json index = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const int code = jobs[i].get();
        worst = std::max(worst, code);
        index.push_back({{"value", values[i]}, {"dir", cfgs[i].output_dir}, {"exit_code", code}});
    }
    fs::create_directories(base.output_dir);
    std::ofstream(fs::path(base.output_dir) / "sweep.json") << json{{"key", key}, {"runs", index}}.dump(2) << '\n';
    return worst;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bi-fluid compressible Navier-Stokes solver and verification harness"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run the coupled solver and write trace.csv, summary.json");
    run_cmd->add_option("--config", config_path, "config file")->required();

    auto* verify_cmd = app.add_subcommand("verify", "structural checks");
    verify_cmd->require_subcommand(1);
    auto* verify_eos = verify_cmd->add_subcommand("eos", "certify the pressure law on the cone");
    verify_eos->add_option("--config", config_path, "config file")->required();
    int samples = 1000;
    verify_eos->add_option("--samples", samples, "sampled cone points")->check(CLI::PositiveNumber);

    std::string coarse_dir, fine_dir, out_path;
    auto* compare_cmd = app.add_subcommand("compare", "relative energy of a coarse run against a finer run");
    compare_cmd->add_option("--coarse", coarse_dir)->required();
    compare_cmd->add_option("--fine", fine_dir)->required();
    compare_cmd->add_option("--out", out_path, "output path (default <coarse>/compare.json)");

    std::string vary;
    auto* sweep_cmd = app.add_subcommand("sweep", "independent concurrent runs over one key");
    sweep_cmd->add_option("--config", config_path)->required();
    sweep_cmd->add_option("--vary", vary, "key=v1,v2,...")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*run_cmd) {
        RunConfig cfg;
        if (const int code = guarded([&] { cfg = parse_config(config_path); return 0; })) return code;
        return run_one(cfg);
    }
    if (*verify_eos) {
        return guarded([&] {
            const RunConfig cfg = parse_config(config_path);
            const ConvexityReport r = sample_convexity(cfg.eos, samples);
            std::cout << json{{"a_low", r.a_low},
                              {"a_high", r.a_high},
                              {"gamma_coercive", r.gamma_coercive},
                              {"hessian_min_eig", r.hessian_min_eig},
                              {"samples", r.samples},
                              {"helmholtz_base", to_string(cfg.eos.base)},
                              {"pass", r.pass},
                              {"failures", r.failures}}
                             .dump(2)
                      << std::endl;
            return r.pass ? 0 : CertificationError("").exit_code();
        });
    }
    if (*compare_cmd) {
        return guarded([&] {
            const json result = compare_runs(coarse_dir, fine_dir);
            const fs::path out = out_path.empty() ? fs::path(coarse_dir) / "compare.json" : fs::path(out_path);
            std::ofstream(out) << result.dump(2) << '\n';
            std::cout << out.string() << std::endl;
            return result["gronwall"]["pass"].get<bool>() ? 0 : 4;
        });
    }
    if (*sweep_cmd) return guarded([&] { return sweep(config_path, vary); });
    return 2;
}
