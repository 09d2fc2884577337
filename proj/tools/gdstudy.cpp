// gdstudy: verification, convergence and rate studies for the Grunwald and
// Grunwald-Durrmeyer operators on [0, pi].

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "gd/errors.hpp"
#include "gd/study.hpp"

namespace {

struct Flags {
    std::map<std::string, std::string> values;
    bool force = false;
    bool timing = false;
    std::string config;
};

void add_common(CLI::App* cmd, Flags& flags) {
    static const std::pair<const char*, const char*> options[] = {
        {"n", "comma-separated degrees, strictly increasing"},
        {"functions", "battery labels (one,theta,theta2,sin,cos,abs,sqrt_abs,step,spike)"},
        {"operators", "grunwald,durrmeyer"},
        {"norms", "sup, L<p> with p >= 1"},
        {"panels-per-n", "quadrature panels per unit of n (panels = max(64, value * n))"},
        {"points-per-panel", "Gauss-Legendre points per panel"},
        {"grid", "points of the uniform sup-norm grid"},
        {"format", "csv or json"},
        {"out", "output file (default: standard output)"},
        {"seed", "seed for randomized spot checks"},
    };
    for (const auto& [name, help] : options) {
        const std::string key = name;
        cmd->add_option_function<std::string>(
            "--" + key, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
    }
    cmd->add_option("--config", flags.config, "key=value configuration file");
    cmd->add_flag("--force-resolution", flags.force, "allow panels-per-n below 4");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grunwald-Durrmeyer operator studies"};
    app.require_subcommand(1);
    Flags flags;

    auto* verify = app.add_subcommand("verify", "check kernel identities for each n");
    auto* converge = app.add_subcommand("converge", "error table over n, functions, operators and norms");
    auto* rates = app.add_subcommand("rates", "log-log fits of converge errors against rate models");
    auto* kernels = app.add_subcommand("kernels", "tabulate S_{k,n} on a grid for one n");
    for (auto* cmd : {verify, converge, rates, kernels}) add_common(cmd, flags);
    converge->add_flag("--timing", flags.timing, "record wall_ms per row");
    rates->add_option_function<std::string>("--model", [&flags](const std::string& v) { flags.values["model"] = v; },
                                            "log_over_n, inv_n_pow(a) or m_n(p)");
    rates->add_option_function<std::string>("--input", [&flags](const std::string& v) { flags.values["input"] = v; },
                                            "converge CSV to fit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return gd::exit_usage;
    }

    try {
        gd::StudyConfig config;
        if (kernels->parsed()) {
            config.n_values = {8};
            config.grid_points = 401;
        }
        if (!flags.config.empty()) config = gd::load_config_file(flags.config, config);
        for (const auto& [key, value] : flags.values) gd::apply_setting(config, key, value);
        if (flags.force) config.force_resolution = true;
        if (flags.timing) config.timing = true;

        if (verify->parsed()) return gd::cmd_verify(config, std::cout, std::cerr);
        if (converge->parsed()) return gd::cmd_converge(config, std::cout, std::cerr);
        if (rates->parsed()) return gd::cmd_rates(config, std::cout, std::cerr);
        return gd::cmd_kernels(config, std::cout, std::cerr);
    } catch (const gd::UsageError& e) {
        std::cerr << "gdstudy: " << e.what() << '\n';
        return gd::exit_usage;
    } catch (const gd::ConfigurationError& e) {
        std::cerr << "gdstudy: " << e.what() << '\n';
        return gd::exit_usage;
    } catch (const gd::DomainError& e) {
        std::cerr << "gdstudy: " << e.what() << '\n';
        return gd::exit_usage;
    }
}
