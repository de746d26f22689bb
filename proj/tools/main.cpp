#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "sobconst/cli.hpp"
#include "sobconst/error.hpp"

namespace {

struct Flags {
    std::optional<double> p, q, alpha;
    std::optional<int> d;
    std::string config;
    std::string out = "out";
    std::string format = "csv";
    std::string golden;
    bool bless = false;
    int jobs = 1;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--p", f.p, "exponent p > 1");
    cmd->add_option("--q", f.q, "target exponent q");
    cmd->add_option("--d", f.d, "local dimension");
    cmd->add_option("--alpha", f.alpha, "smoothness alpha");
    cmd->add_option("--config", f.config, "key = value config file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--golden", f.golden, "golden snapshot directory");
    cmd->add_flag("--bless", f.bless, "rewrite golden snapshots from this run");
    cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sobolev embedding constants: sweeps, checks and golden snapshots"};
    app.require_subcommand(1);
    Flags flags;
    const std::map<std::string, std::string> help{
        {"constants", "closed-form constants over the parameter grid"},
        {"interp", "Marcinkiewicz assembly and weak-type factors"},
        {"kernel", "Green kernel envelopes and kernel norms"},
        {"embed", "torus spectral proxy for the embedding ratio"},
        {"mt", "exponential-integrability series"},
        {"verify-all", "run every subcommand and compare against goldens"},
    };
    for (const auto& name : sobconst::subcommands()) add_flags(app.add_subcommand(name, help.at(name)), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    sobconst::RunConfig config;
    try {
        if (!flags.config.empty()) {
            std::ifstream in(flags.config);
            if (!in) throw sobconst::ConfigError("cannot read config " + flags.config);
            std::stringstream text;
            text << in.rdbuf();
            config = sobconst::parse_run_config(text.str());
        }
        config.p = flags.p;
        config.q = flags.q;
        config.alpha = flags.alpha;
        config.d = flags.d;
        config.output_dir = flags.out;
        config.format = sobconst::parse_table_format(flags.format);
        config.golden_dir = flags.golden;
        config.bless = flags.bless;
        config.jobs = flags.jobs;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    return sobconst::run(subcommand, config, std::cout, std::cerr);
}
