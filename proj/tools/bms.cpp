#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bmscrew/io.hpp"
#include "bmscrew/version.hpp"

namespace fs = std::filesystem;
using bmscrew::io::RunResult;
using bmscrew::io::Scenario;

namespace {

fs::path default_out_dir() {
    if (const char* env = std::getenv("BMS_OUT_DIR")) return fs::path(env);
    return fs::current_path();
}

int write_outputs(const RunResult& rr, const Scenario& sc, const fs::path& out_dir,
                  bool want_csv, bool quiet) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << out_dir << ": " << ec.message()
                  << "\n";
        return 2;
    }

    fs::path report_path = out_dir / (sc.name + ".report.json");
    std::ofstream report(report_path, std::ios::binary);
    if (!report) {
        std::cerr << "error: cannot write " << report_path << "\n";
        return 2;
    }
    report << bmscrew::io::canonical_dump(rr.report);
    report.close();

    if (want_csv) {
        for (const auto& f : rr.csv_files) {
            fs::path p = out_dir / f.name;
            std::ofstream csv(p, std::ios::binary);
            if (!csv) {
                std::cerr << "error: cannot write " << p << "\n";
                return 2;
            }
            csv << f.content;
        }
    }

    if (!quiet) {
        std::cout << sc.name << ": " << rr.report.at("overall_verdict").get<std::string>()
                  << " (report " << report_path.string() << ")\n";
    }
    return rr.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bendable medical screw planning and verification tool"};
    app.require_subcommand(1);

    std::string run_file, sweep_file, validate_file;
    std::string run_out = default_out_dir().string();
    std::string sweep_out = run_out;
    bool run_csv = false, run_quiet = false;
    int sweep_jobs = 1;

    auto* run = app.add_subcommand("run", "Run the analyses declared in a scenario file");
    run->add_option("file", run_file, "scenario JSON file")->required();
    run->add_option("--out", run_out, "output directory");
    run->add_flag("--csv", run_csv, "also write per-analysis CSV station tables");
    run->add_flag("--quiet", run_quiet, "suppress the summary line");

    auto* sweep = app.add_subcommand("sweep", "Run the scenario's parameter sweep");
    sweep->add_option("file", sweep_file, "scenario JSON file")->required();
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--jobs", sweep_jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("file", validate_file, "scenario JSON file")->required();

    auto* version = app.add_subcommand("version", "Print tool and schema versions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (version->parsed()) {
            std::cout << "bms " << bmscrew::kVersion << " (schema " << bmscrew::kSchemaVersion
                      << ")\n";
            return 0;
        }
        if (validate->parsed()) {
            Scenario sc = bmscrew::io::load_scenario(validate_file);
            std::cout << sc.name << ": valid (" << sc.analyses.size() << " analyses, "
                      << sc.sweep_axes.size() << " sweep axes)\n";
            return 0;
        }
        if (run->parsed()) {
            Scenario sc = bmscrew::io::load_scenario(run_file);
            RunResult rr = bmscrew::io::run_scenario(sc);
            return write_outputs(rr, sc, run_out, run_csv, run_quiet);
        }
        if (sweep->parsed()) {
            Scenario sc = bmscrew::io::load_scenario(sweep_file);
            RunResult rr = bmscrew::io::run_sweep(sc, sweep_jobs);
            return write_outputs(rr, sc, sweep_out, false, false);
        }
    } catch (const bmscrew::io::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
