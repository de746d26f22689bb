#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sobconst/params.hpp"
#include "sobconst/table.hpp"

namespace sobconst {

struct RunConfig {
    GroupGeometry geometry;
    ParameterGrid grid = default_grid();
    std::optional<double> tau_override;
    std::map<std::string, double> tolerances = default_tolerances();
    std::filesystem::path output_dir = "out";
    TableFormat format = TableFormat::csv;
    std::filesystem::path golden_dir;  ///< empty: the repository's golden/ directory
    bool bless = false;
    int jobs = 1;

    // Single-point mode for `constants`.
    std::optional<double> p, q, alpha;
    std::optional<int> d;

    static std::map<std::string, double> default_tolerances();
    double tolerance(const std::string& name) const;
    double spectral_tau() const;
    void validate() const;
};

/// Applies a key = value config (grid keys, geometry keys, tau, tol.<name>) on top of `base`.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});

const std::vector<std::string>& subcommands();

/// Tables and failing-check descriptions produced by one subcommand, before any file output.
struct RunOutcome {
    std::vector<ResultTable> tables;
    std::vector<ResultTable> fitted;  ///< key/value tables compared against golden snapshots
    std::vector<std::string> failures;
};

RunOutcome execute(const std::string& subcommand, const RunConfig& config);

/// Hash of everything that determines the sweep inputs.
std::string run_hash(const RunConfig& config);

/// Runs, writes tables, compares or blesses goldens. Returns 0, 1 (check failure) or 2 (usage/config error).
int run(const std::string& subcommand, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sobconst
