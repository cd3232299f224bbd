#include "meanfield/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mfl::ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_with(const std::string& path, mfl::ExperimentKind* expected) {
    try {
        const std::string text = slurp(path);
        mfl::ExperimentConfig cfg = mfl::parse_config(text);
        if (expected && cfg.experiment != *expected) {
            std::cerr << "error: config selects experiment '"
                      << mfl::to_string(cfg.experiment) << "', expected '"
                      << mfl::to_string(*expected) << "'\n";
            return 2;
        }
        const auto files = mfl::run_experiment(cfg, text);
        for (const auto& f : files)
            std::cout << cfg.output_dir << "/" << f << "\n";
        return 0;
    } catch (const mfl::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const mfl::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-field simulation laboratory"};
    app.require_subcommand(1);

    std::string run_path, validate_path, rate_path, sweep_path;
    auto* run = app.add_subcommand("run", "execute the experiment in a config file");
    run->add_option("config", run_path, "config file")->required();
    auto* val = app.add_subcommand("validate", "parse and validate a config file");
    val->add_option("config", validate_path, "config file")->required();
    auto* rate = app.add_subcommand("rate-study", "run a mean-field rate study");
    rate->add_option("config", rate_path, "config file")->required();
    auto* sweep = app.add_subcommand("eps-sweep", "sweep the pressure coefficient");
    sweep->add_option("config", sweep_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_with(run_path, nullptr);
    if (val->parsed()) {
        try {
            mfl::parse_config(slurp(validate_path));
            std::cout << "ok\n";
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "validation error: " << e.what() << "\n";
            return 2;
        }
    }
    if (rate->parsed()) {
        mfl::ExperimentKind k = mfl::ExperimentKind::RateStudy;
        return run_with(rate_path, &k);
    }
    mfl::ExperimentKind k = mfl::ExperimentKind::EpsSweep;
    return run_with(sweep_path, &k);
}
