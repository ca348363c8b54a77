#include <cstdlib>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ckn/acceptance.hpp"
#include "ckn/errors.hpp"
#include "ckn/orchestrate.hpp"
#include "ckn/parallel.hpp"

namespace {

std::vector<int> parse_id_list(const std::string& csv) {
    std::vector<int> ids;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        ids.push_back(std::stoi(item));
    }
    return ids;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for localized regularity diagnostics of "
                 "periodic incompressible flows"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "worker thread count (0 = hardware default)")
        ->envname("CKN_THREADS");

    std::string config_path;
    std::string out_dir = "out";
    std::string format = "all";

    auto* run = app.add_subcommand("run", "integrate a configured field and write snapshots");
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_option("--out", out_dir, "output directory")->envname("CKN_OUT_DIR");

    auto* analyze =
        app.add_subcommand("analyze", "evaluate regularity verdicts over a stored run");
    analyze->add_option("--config", config_path, "config file (JSON)")->required();
    analyze->add_option("--out", out_dir, "trajectory/report directory")
        ->envname("CKN_OUT_DIR");
    analyze->add_option("--format", format, "report family: json, csv, or all")
        ->check(CLI::IsMember({"json", "csv", "all"}));

    bool inject_m_defect = false;
    std::string only_csv;
    auto* verify = app.add_subcommand("verify", "run the release-gate criteria suite");
    verify->add_flag("--inject-m-defect", inject_m_defect,
                     "flip the pressure-term exponent sign (mutation canary; the "
                     "scale-invariance criterion must fail)")
        ->envname("CKN_INJECT_M_DEFECT");
    verify->add_option("--only", only_csv, "comma-separated criterion ids to execute");

    auto* plotdata =
        app.add_subcommand("plotdata", "export plot-ready CSV bundles from a report");
    plotdata->add_option("--out", out_dir, "directory holding map.json / psi_tables.csv")
        ->envname("CKN_OUT_DIR");

    auto* calibrate = app.add_subcommand(
        "calibrate", "sweep verdict thresholds against a smooth run and record "
                     "the widest passing values");
    calibrate->add_option("--config", config_path, "config file (JSON)")->required();
    calibrate->add_option("--out", out_dir, "output directory")->envname("CKN_OUT_DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) ckn::set_thread_count(threads);
        if (run->parsed()) return ckn::cmd_run(config_path, out_dir);
        if (analyze->parsed()) return ckn::cmd_analyze(config_path, out_dir, format);
        if (verify->parsed()) {
            ckn::SuiteOptions opt;
            opt.inject_m_defect = inject_m_defect;
            opt.only = parse_id_list(only_csv);
            const ckn::SuiteReport rep = ckn::run_criteria(opt, std::cout);
            return rep.all_pass ? 0 : 1;
        }
        if (plotdata->parsed()) return ckn::cmd_plotdata(out_dir);
        if (calibrate->parsed()) return ckn::cmd_calibrate(config_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ckn::exit_code_for(e);
    }
    return 1;
}
