// qheis: command-line front end.  Exit status 0 pass, 1 check failure, 2 usage/config error.

#include "qheis/expression.hpp"
#include "qheis/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace qheis;

struct Common {
    std::string format = "json";
    std::optional<std::int64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--seed", c.seed, "seed for randomized checks (overrides the config)");
}

Format format_of(const Common& c) { return c.format == "text" ? Format::text : Format::json; }

json with_seed(json j, const Common& c) {
    if (c.seed) j["seed"] = *c.seed;
    return j;
}

RunConfig config_from_file(const std::string& path, std::optional<Task> task, const Common& c) {
    const std::filesystem::path p(path);
    return parse_config(with_seed(read_json_file(p), c), p.parent_path(), task);
}

int emit(const Report& rep, const Common& c) {
    std::cout << emit_report(rep, format_of(c));
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-deformed Heisenberg algebra toolkit"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    Common common;

    std::string expr_text;
    auto* nf = app.add_subcommand("normal-form", "reduce an expression to normal form");
    nf->add_option("expr", expr_text, "expression, e.g. \"p*x - s^2*x*p\"")->required();
    std::string nf_format = "text";
    nf->add_option("--format", nf_format, "output format")->check(CLI::IsMember({"json", "text"}));

    std::string config;
    std::map<Task, CLI::App*> model_cmds;
    for (Task t : {Task::verify, Task::spectrum, Task::classify}) {
        auto* cmd = app.add_subcommand(task_name(t), std::string("run the ") + task_name(t) + " task on a config");
        cmd->add_option("--config", config, "config file")->required();
        add_common(cmd, common);
        model_cmds[t] = cmd;
    }

    std::string run_path;
    auto* run = app.add_subcommand("run", "run the task named in a config");
    run->add_option("--config", run_path, "config file")->required();
    add_common(run, common);

    std::string config_a, config_b;
    auto* eq = app.add_subcommand("equiv", "decide unitary equivalence of two configs");
    eq->add_option("--config-a", config_a, "first config")->required();
    eq->add_option("--config-b", config_b, "second config")->required();
    add_common(eq, common);

    int kind = 0;
    std::string out_path = "-", example_task = "verify";
    ExampleParams prm;
    auto* ex = app.add_subcommand("example", "write the config of a standard example");
    ex->add_option("--kind", kind, "example 1..5")->required()->check(CLI::Range(1, 5));
    ex->add_option("--out", out_path, "output file, - for stdout");
    ex->add_option("--task", example_task, "task recorded in the config")
        ->check(CLI::IsMember({"verify", "spectrum", "classify"}));
    ex->add_option("--q", prm.q, "deformation parameter");
    ex->add_option("--phi", prm.phi, "V' phase (example 2)");
    ex->add_option("--psi", prm.psi, "W' phase (example 2)");
    ex->add_option("--multiplicity", prm.multiplicity, "atom multiplicity (example 4)");
    ex->add_option("--seed", prm.seed, "seed for generic unitaries (example 4)");

    double sq = 0.5;
    int samples = 50;
    auto* sch = app.add_subcommand("schrodinger", "verify the Gaussian span model");
    sch->add_option("--q", sq, "deformation parameter in (0, 1)");
    sch->add_option("--samples", samples, "random elements per check");
    add_common(sch, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (nf->parsed()) {
            const std::string result = normal_form(expr_text);
            if (nf_format == "json") {
                json out{{"tool", "qheis"}, {"version", tool_version}, {"expression", expr_text}, {"normal_form", result}};
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << result << "\n";
            }
            return 0;
        }
        for (const auto& [task, cmd] : model_cmds)
            if (cmd->parsed()) return emit(run_config(config_from_file(config, task, common)), common);
        if (run->parsed()) return emit(run_config(config_from_file(run_path, std::nullopt, common)), common);
        if (eq->parsed()) {
            const RunConfig a = config_from_file(config_a, Task::classify, common);
            const RunConfig b = config_from_file(config_b, Task::classify, common);
            return emit(run_config(equiv_config(a, b)), common);
        }
        if (ex->parsed()) {
            const std::string text = example_config(kind, prm, *task_from(example_task)).dump(2) + "\n";
            if (out_path == "-") {
                std::cout << text;
            } else {
                std::ofstream out(out_path);
                if (!(out << text)) throw IoError("cannot write " + out_path);
            }
            return 0;
        }
        if (sch->parsed()) {
            json j{{"task", "schrodinger"}, {"schrodinger", {{"q", sq}, {"samples", samples}}}};
            return emit(run_config(parse_config(with_seed(j, common))), common);
        }
    } catch (const ParseError& e) {
        std::cerr << "qheis: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "qheis: config error at " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "qheis: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qheis: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "qheis: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
