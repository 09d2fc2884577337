#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gd/study.hpp"
#include "json.hpp"

using namespace gd;

namespace {

StudyConfig small_config() {
    StudyConfig c;
    c.n_values = {4, 8, 16, 32};
    c.functions = {"one", "abs", "step"};
    c.grid_points = 401;
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(validate(StudyConfig{}));
    StudyConfig c;
    c.n_values = {};
    CHECK_THROWS_AS(validate(c), UsageError);
    c.n_values = {4, 2};
    CHECK_THROWS_AS(validate(c), UsageError);
    c.n_values = {0, 2};
    CHECK_THROWS_AS(validate(c), UsageError);
    c = StudyConfig{};
    c.functions = {"gaussian"};
    CHECK_THROWS_AS(validate(c), UsageError);
    c = StudyConfig{};
    c.panels_per_n = 1;
    CHECK_THROWS_AS(validate(c), UsageError);
    c.force_resolution = true;
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("apply_setting and config files") {
    StudyConfig c;
    apply_setting(c, "n", "2, 4,8");
    CHECK(c.n_values == std::vector<int>{2, 4, 8});
    apply_setting(c, "norms", "sup,L4");
    CHECK(c.norms == std::vector<Norm>{Norm::sup(), Norm::lp(4.0)});
    apply_setting(c, "panels_per_n", "6");
    CHECK(c.panels_per_n == 6);
    apply_setting(c, "format", "json");
    CHECK(c.output_format == OutputFormat::json);
    CHECK_THROWS_AS(apply_setting(c, "format", "xml"), UsageError);
    CHECK_THROWS_AS(apply_setting(c, "colour", "red"), UsageError);
    CHECK_THROWS_AS(apply_setting(c, "n", "4x"), UsageError);
    CHECK_THROWS_AS(apply_setting(c, "operators", "bernstein"), UsageError);

    const std::string path = "gd_study_config_test.cfg";
    {
        std::ofstream f(path);
        f << "# study\nn = 1,2,4,8\nfunctions=sin , cos  # trailing\n\nseed=5\n";
    }
    const auto loaded = load_config_file(path);
    CHECK(loaded.n_values == std::vector<int>{1, 2, 4, 8});
    CHECK(loaded.functions == std::vector<std::string>{"sin", "cos"});
    CHECK(loaded.seed == 5);
    {
        std::ofstream f(path);
        f << "n 1,2\n";
    }
    CHECK_THROWS_AS((void)load_config_file(path), UsageError);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)load_config_file("does/not/exist.cfg"), UsageError);
}

TEST_CASE("config hash") {
    StudyConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash_hex(a).size() == 16);
    b.seed = 1;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.out = "elsewhere.csv";
    b.timing = true;
    CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(M_PI)) == M_PI);
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("verification suite") {
    StudyConfig c;
    const auto checks = run_verification(c);
    CHECK(checks.size() == 6 * c.n_values.size());
    for (const auto& chk : checks) {
        CHECK_MESSAGE(chk.pass(), chk.check << " n=" << chk.n);
        CHECK(chk.deviation < 1e-8);
    }
    c.n_values = {1};
    const auto one = run_verification(c);
    CHECK(one.front().check == "kernel_mass");
    CHECK(one.front().value == doctest::Approx(M_PI).epsilon(1e-15));
    std::ostringstream out, log;
    CHECK(cmd_verify(c, out, log) == exit_ok);
    CHECK(out.str().rfind("# gdstudy verify config_hash=", 0) == 0);
}

TEST_CASE("converge rows are sorted and deterministic") {
    const auto c = small_config();
    std::ostringstream a, b, log;
    CHECK(cmd_converge(c, a, log) == exit_ok);
    CHECK(cmd_converge(c, b, log) == exit_ok);
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    const auto recs = read_convergence_csv(in);
    CHECK(recs.size() == 4 * 3 * 2 * 3);
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i - 1].n <= recs[i].n);
    for (const auto& r : recs) {
        if (r.function_label == "one") CHECK(r.error < 1e-9);
        if (r.function_label == "step" && r.norm == Norm::sup()) CHECK(r.error > 0.3);
    }
    CHECK(a.str().find("n,function,operator,norm,error,model_value,wall_ms\n") != std::string::npos);
}

TEST_CASE("json output mirrors csv fields") {
    auto c = small_config();
    c.n_values = {8};
    c.output_format = OutputFormat::json;
    std::ostringstream out, log;
    CHECK(cmd_converge(c, out, log) == exit_ok);
    const auto j = nlohmann::json::parse(out.str());
    REQUIRE(j.is_array());
    CHECK(j.size() == 3 * 2 * 3);
    for (const char* key : {"n", "function", "operator", "norm", "error", "model_value", "wall_ms"})
        CHECK(j[0].contains(key));
    CHECK(j[0]["n"] == 8);
}

TEST_CASE("rates") {
    std::ostringstream csv, log;
    std::ostringstream synthetic;
    synthetic << "# fixture\nn,function,operator,norm,error,model_value,wall_ms\n";
    for (int n : {8, 16, 32, 64}) {
        const double m = RateModel::log_over_n().value(n);
        synthetic << n << ",theta,durrmeyer,sup," << format_number(2 * m) << "," << format_number(m) << ",0\n";
        synthetic << n << ",sin,durrmeyer,sup," << format_number(m * m) << "," << format_number(m) << ",0\n";
    }
    std::istringstream in(synthetic.str());
    const auto fits = fit_rates(read_convergence_csv(in), std::nullopt);
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].function_label == "sin");
    CHECK(fits[0].fit->slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fits[1].fit->slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fits[1].fit->max_ratio == doctest::Approx(2.0).epsilon(1e-12));

    auto c = small_config();
    c.functions = {"abs"};
    c.norms = {Norm::sup()};
    c.n_values = {8, 16, 32, 64};
    CHECK(cmd_rates(c, csv, log) == exit_ok);
    CHECK(log.str().find("log_over_n") != std::string::npos);
    c.n_values = {8, 16, 32};
    CHECK_THROWS_AS((void)cmd_rates(c, csv, log), UsageError);
}

TEST_CASE("kernels table") {
    StudyConfig c;
    c.n_values = {1};
    c.grid_points = 11;
    std::ostringstream out, log;
    CHECK(cmd_kernels(c, out, log) == exit_ok);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line[0] == '#');
    std::getline(in, line);
    CHECK(line == "t,S_1,sum,lebesgue_sum");
    while (std::getline(in, line)) CHECK(line.substr(line.find(',')) == ",1,1,1");

    c.n_values = {6};
    c.grid_points = 201;
    std::ostringstream out6;
    CHECK(cmd_kernels(c, out6, log) == exit_ok);
    std::istringstream in6(out6.str());
    std::getline(in6, line);
    std::getline(in6, line);
    CHECK(line == "t,S_1,S_2,S_3,S_4,S_5,S_6,sum,lebesgue_sum");
    while (std::getline(in6, line)) {
        const auto last = line.rfind(',');
        const auto prev = line.rfind(',', last - 1);
        CHECK(std::abs(std::stod(line.substr(prev + 1, last - prev - 1)) - 1.0) < 1e-9);
    }
    c.n_values = {2, 4};
    CHECK_THROWS_AS((void)cmd_kernels(c, out, log), UsageError);
}
