// oplab-lab: deterministic experiment runner over the oplab library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "oplab/lab/runner.hpp"
#include "oplab/version.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kOperationError = 3 };

void setup_logging() {
    auto logger = spdlog::stderr_color_st("lab");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("LAB_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

oplab::Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw oplab::ConfigInvalid("--config", "cannot open " + path);
    try {
        return oplab::Json::parse(in);
    } catch (const oplab::Json::parse_error& e) {
        throw oplab::ConfigInvalid("--config", std::string("not valid JSON: ") + e.what());
    }
}

// Fills in what the command line fixes and rejects contradictions.
void apply_command_line(oplab::Json& cell, const std::string& kind, const std::string& preset,
                        const std::optional<std::uint64_t>& seed, const std::string& path) {
    if (!cell.is_object()) throw oplab::ConfigInvalid(path.empty() ? "$" : path, "expected an object");
    auto at = [&](const char* f) { return path.empty() ? std::string(f) : path + "." + f; };
    if (cell.contains("kind") && cell["kind"] != kind) {
        throw oplab::ConfigInvalid(at("kind"), "does not match the subcommand " + kind);
    }
    cell["kind"] = kind;
    if (!preset.empty()) {
        if (cell.contains("preset") && cell["preset"] != preset) {
            throw oplab::ConfigInvalid(at("preset"), "does not match the preset argument " + preset);
        }
        cell["preset"] = preset;
    }
    if (seed) cell["seed"] = *seed;
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Deterministic operator-dynamics experiment runner", "oplab-lab"};
    app.set_version_flag("--version", std::string(oplab::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string configPath, outPath, format;
    std::optional<std::uint64_t> seed;
    bool timing = false;
    app.add_option("--config", configPath, "experiment config (JSON)");
    app.add_option("--out", outPath, "write results here instead of stdout");
    app.add_option("--seed", seed, "seed for randomized constructions (overrides the config)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--timing", timing, "record wall time in the output metadata");

    for (const char* kind : {"classify", "aluthge", "orbit", "shadow", "spectrum", "certificate"})
        app.add_subcommand(kind, std::string("run a ") + kind + " experiment from --config");
    auto* presetCmd = app.add_subcommand("preset", "run a named experiment preset");
    std::string presetName;
    presetCmd->add_option("name", presetName, "preset name")
        ->required()
        ->check(CLI::IsMember(oplab::experiment_presets()));
    app.add_subcommand("batch", "run a config holding {\"cells\": [...]}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    oplab::BatchConfig batch;
    try {
        oplab::Json doc = oplab::Json::object();
        if (!configPath.empty()) {
            doc = load_config(configPath);
        } else if (sub != "preset") {
            throw oplab::ConfigInvalid("--config", "required for " + sub);
        }
        if (sub == "batch") {
            if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
                throw oplab::ConfigInvalid("cells", "batch needs a config with a cells array");
            }
            if (seed)
                for (auto& cell : doc["cells"]) cell["seed"] = *seed;
        } else {
            if (doc.is_object() && doc.contains("cells")) {
                throw oplab::ConfigInvalid("cells", "use the batch subcommand for multi-cell configs");
            }
            apply_command_line(doc, sub, presetName, seed, "");
        }
        batch = oplab::parse_config(doc);
    } catch (const oplab::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    const bool asJson = format.empty() ? batch.format == oplab::OutputFormat::Json : format == "json";
    const std::string target = outPath.empty() ? batch.output : outPath;

    std::vector<oplab::ResultTable> tables;
    try {
        spdlog::info("running {} cell(s)", batch.cells.size());
        tables = oplab::run_batch(batch, {.timing = timing});
    } catch (const oplab::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const oplab::ExperimentError& e) {
        std::cerr << (e.contract_violation() ? "contract check failed: " : "operation failed: ") << e.what() << '\n';
        return e.contract_violation() ? kCheckFailed : kOperationError;
    } catch (const std::exception& e) {
        std::cerr << "operation failed: " << e.what() << '\n';
        return kOperationError;
    }

    std::ostringstream body;
    if (asJson) {
        if (batch.batch) {
            oplab::Json cells = oplab::Json::array();
            for (const auto& t : tables) cells.push_back(oplab::to_json(t));
            body << oplab::Json{{"cells", std::move(cells)}}.dump(2) << '\n';
        } else {
            body << oplab::to_json(tables.front()).dump(2) << '\n';
        }
    } else {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (batch.batch) body << "# cell " << i << '\n';
            oplab::write_csv(body, tables[i]);
        }
    }

    if (target.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(target, std::ios::binary);
        if (!out) {
            std::cerr << "operation failed: cannot write " << target << '\n';
            return kOperationError;
        }
        out << body.str();
    }

    bool ok = true;
    for (const auto& t : tables)
        for (const auto& c : t.checks)
            if (!c.passed) {
                ok = false;
                spdlog::warn("check {} failed {}", c.name, c.detail);
            }
    return ok ? kOk : kCheckFailed;
}
