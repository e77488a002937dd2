#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jot/cli/commands.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) values.push_back(std::stoi(item));
    }
    return values;
}

std::vector<bool> parse_onoff_list(const std::string& text) {
    std::vector<bool> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item == "on") {
            values.push_back(true);
        } else if (item == "off") {
            values.push_back(false);
        } else if (!item.empty()) {
            throw CLI::ValidationError("--feedback", "expected a comma list of on/off");
        }
    }
    return values;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial lawyer/prosecutor/judge prompting harness"};
    app.require_subcommand(1);

    std::string config_path;
    jot::cli::RunOptions options;
    int workers = 0;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_flag("--dry-run", options.dry_run, "print the plan without provider calls");
        cmd->add_flag("--trace", options.trace, "log provider request/response bodies");
        cmd->add_flag("--resume,!--no-resume", options.resume,
                      "skip (run, task) pairs already on disk (default on)");
        cmd->add_option("--workers", workers, "worker thread count override");
    };

    CLI::App* run = app.add_subcommand("run", "execute one experiment");
    add_run_flags(run);

    CLI::App* ablate = app.add_subcommand("ablate", "role/rounds/feedback ablation sweep");
    add_run_flags(ablate);
    std::string rounds_list = "1,3,5";
    std::string feedback_list = "on,off";
    ablate->add_option("--rounds", rounds_list, "comma list of round counts (default 1,3,5)");
    ablate->add_option("--feedback", feedback_list, "comma list of on/off (default on,off)");

    CLI::App* report = app.add_subcommand("report", "recompute reports for an experiment dir");
    std::string report_dir;
    report->add_option("dir", report_dir, "experiment directory")->required();

    CLI::App* replay = app.add_subcommand("replay", "validate a stored transcript");
    std::string transcript_path;
    bool strict = false;
    replay->add_option("transcript", transcript_path, "transcript JSON path")->required();
    replay->add_flag("--strict", strict, "require the exact canonical ruling format");

    CLI::App* datasets_cmd = app.add_subcommand("datasets", "dataset utilities");
    datasets_cmd->require_subcommand(1);
    CLI::App* validate = datasets_cmd->add_subcommand("validate", "schema/label diagnostics");
    std::string dataset_name;
    std::string dataset_path;
    validate->add_option("name", dataset_name, "dataset name (e.g. boolean_expressions)")
        ->required();
    validate->add_option("path", dataset_path, "dataset file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed() || ablate->parsed()) {
            if (workers > 0) options.workers = workers;
            const auto config = jot::cli::load_experiment_config(config_path);
            if (run->parsed()) {
                return jot::cli::cmd_run(config, options, std::cout, std::cerr);
            }
            jot::cli::SweepSpec sweep;
            sweep.rounds = parse_int_list(rounds_list);
            sweep.feedback = parse_onoff_list(feedback_list);
            return jot::cli::cmd_ablate(config, sweep, options, std::cout, std::cerr);
        }
        if (report->parsed()) {
            return jot::cli::cmd_report(report_dir, std::cout, std::cerr);
        }
        if (replay->parsed()) {
            return jot::cli::cmd_replay(transcript_path, strict, std::cout, std::cerr);
        }
        if (validate->parsed()) {
            jot::datasets::DatasetSpec spec;
            spec.name = jot::datasets::dataset_from_string(dataset_name);
            spec.path = dataset_path;
            return jot::cli::cmd_datasets_validate(spec, std::cout, std::cerr);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
