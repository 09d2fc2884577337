#pragma once

// Batch studies behind the gdstudy front end: verification suites,
// convergence tables, rate fits and kernel dumps, with reproducible output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gd/analysis.hpp"
#include "gd/operators.hpp"

namespace gd {

enum class OutputFormat { csv, json };

/// Exit codes: 0 all checks pass, 1 verification failure, 2 usage or config error.
enum ExitCode : int { exit_ok = 0, exit_verification_failure = 1, exit_usage = 2 };

/// Invalid study configuration (maps to exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StudyConfig {
    std::vector<int> n_values{1, 2, 4, 8, 16, 32, 64};
    std::vector<std::string> functions = battery_labels();
    std::vector<OperatorKind> operators{OperatorKind::grunwald, OperatorKind::durrmeyer};
    std::vector<Norm> norms{Norm::sup(), Norm::lp(1.0), Norm::lp(2.0)};
    int panels_per_n = 4;
    int points_per_panel = default_points_per_panel;
    std::size_t grid_points = 2001;
    OutputFormat output_format = OutputFormat::csv;
    std::string out;  // empty: standard output
    bool force_resolution = false;
    std::uint64_t seed = 20240607;
    /// rates: empty selects the default model per norm.
    std::string model;
    /// rates: converge CSV to fit; empty computes the table inline.
    std::string input;
    /// converge: fill wall_ms; off keeps reruns byte-identical.
    bool timing = false;

    Resolution resolution() const;
};

/// Throws UsageError on any violated invariant (sorted nonempty n_values,
/// known function labels, panels_per_n >= 4 unless forced, ...).
void validate(const StudyConfig& config);

/// Applies one key=value setting; keys match the long flag names without
/// dashes, e.g. "panels-per-n" or "functions".
void apply_setting(StudyConfig& config, const std::string& key, const std::string& value);

/// Reads a flat key=value file ('#' starts a comment) on top of `base`.
[[nodiscard]] StudyConfig load_config_file(const std::string& path, StudyConfig base = {});

/// Canonical one-line rendering, and its 64-bit FNV-1a hash.
[[nodiscard]] std::string canonical_config(const StudyConfig& config);
[[nodiscard]] std::uint64_t config_hash(const StudyConfig& config);
[[nodiscard]] std::string config_hash_hex(const StudyConfig& config);

/// Shortest round-trip decimal ("nan", "inf" for non-finite values).
[[nodiscard]] std::string format_number(double value);

/// One row of a study table; all commands serialize through this type.
struct Row {
    std::vector<std::pair<std::string, std::string>> fields;  // formatted cells
    std::vector<bool> numeric;                                // per field: emit as JSON number
    void add(std::string name, std::string value) {
        fields.emplace_back(std::move(name), std::move(value));
        numeric.push_back(false);
    }
    void add(std::string name, double value) {
        fields.emplace_back(std::move(name), format_number(value));
        numeric.push_back(true);
    }
    void add(std::string name, long long value) {
        fields.emplace_back(std::move(name), std::to_string(value));
        numeric.push_back(true);
    }
};

/// CSV (with a "# ..." header comment carrying the config hash) or a JSON array.
void write_table(std::ostream& os, const std::vector<Row>& rows, OutputFormat format, const std::string& comment);

struct VerifyCheck {
    std::string check;
    int n = 0;
    double value = 0.0;      // measured quantity (mass, sum, ...)
    double deviation = 0.0;  // distance from the identity
    double tolerance = 0.0;
    bool pass() const { return deviation < tolerance; }
};

[[nodiscard]] std::vector<VerifyCheck> run_verification(const StudyConfig& config);
[[nodiscard]] std::vector<ConvergenceRecord> run_convergence(const StudyConfig& config,
                                                             std::vector<double>* wall_ms = nullptr);

struct RateFitRow {
    std::string function_label;
    OperatorKind op = OperatorKind::durrmeyer;
    Norm norm;
    std::string model;
    std::optional<FitReport> fit;  // empty: fewer than 4 usable points
};
[[nodiscard]] std::vector<RateFitRow> fit_rates(const std::vector<ConvergenceRecord>& records,
                                                const std::optional<RateModel>& model);

/// Parses a converge CSV (comment lines skipped).
[[nodiscard]] std::vector<ConvergenceRecord> read_convergence_csv(std::istream& is);

// Commands: write the artifact to config.out (or `out` when empty), a summary to `log`,
// and return an ExitCode.
int cmd_verify(const StudyConfig& config, std::ostream& out, std::ostream& log);
int cmd_converge(const StudyConfig& config, std::ostream& out, std::ostream& log);
int cmd_rates(const StudyConfig& config, std::ostream& out, std::ostream& log);
int cmd_kernels(const StudyConfig& config, std::ostream& out, std::ostream& log);

}  // namespace gd
