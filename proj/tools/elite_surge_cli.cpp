#include "elite_surge/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"elite-surge: surrogate-assisted evolutionary optimization harness"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "execute the configured experiment grid");
    run->add_option("--config", run_config, "path to an elite-surge-config v1 file")->required();

    std::string report_dir;
    std::string report_format = "text";
    auto* report = app.add_subcommand("report", "summarize a results directory");
    report->add_option("--dir", report_dir, "results directory written by 'run'")->required();
    report->add_option("--format", report_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    std::string list_config;
    auto* list = app.add_subcommand("list", "print the generated problem suite");
    list->add_option("--config", list_config, "path to an elite-surge-config v1 file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed())
        return elite_surge::cmd_run(run_config, std::cerr);
    if (report->parsed())
        return elite_surge::cmd_report(report_dir, report_format, std::cout, std::cerr);
    if (list->parsed())
        return elite_surge::cmd_list(list_config, std::cout, std::cerr);
    return 2;
}
