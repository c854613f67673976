#include "regcalc/config.hpp"
#include "regcalc/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <set>

namespace {

// process.kind -> --process, grid.n -> --steps, est.eps_ladder -> --eps-ladder, ...
std::string flag_for(const std::string& key) {
    static const std::map<std::string, std::string> special = {
        {"process.kind", "process"}, {"grid.T", "horizon"}, {"grid.n", "steps"}};
    if (const auto it = special.find(key); it != special.end()) return "--" + it->second;
    std::string name = key.substr(key.find('.') + 1);
    for (auto& ch : name)
        if (ch == '_') ch = '-';
    return "--" + name;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic calculus via regularization: estimators, window processes, replication and Kolmogorov MC"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::string seed, threads, out;
    app.add_option("--config", config_path, "key=value config file (e.g. a previous manifest.ini)");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--out", out, "output directory");
    std::vector<std::string> sets;
    app.add_option("--set", sets, "extra section.key=value entries")->take_all();

    std::map<std::string, std::map<std::string, std::string>> per_command;
    for (const auto& cmd : regcalc::known_commands()) {
        auto* sub = app.add_subcommand(cmd);
        std::set<std::string> used;
        for (const auto& spec : regcalc::command_keys(cmd)) {
            if (spec.key.rfind("run.", 0) == 0) continue;
            const std::string flag = flag_for(spec.key);
            if (!used.insert(flag).second) {
                std::cerr << "internal error: duplicate flag " << flag << " for " << cmd << '\n';
                return 1;
            }
            std::string help = spec.help;
            if (!spec.default_value.empty()) help += " [default: " + spec.default_value + "]";
            sub->add_option(flag, per_command[cmd][spec.key], help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : regcalc::kExitValidation;
    }

    regcalc::Config cfg;
    try {
        if (!config_path.empty()) cfg = regcalc::Config::load(config_path);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw regcalc::ConfigError("--set expects section.key=value, got '" + s + "'");
            cfg.set(s.substr(0, eq), s.substr(eq + 1));
        }
        for (auto* sub : app.get_subcommands()) {
            cfg.set("run.command", sub->get_name());
            for (const auto& [key, value] : per_command[sub->get_name()])
                if (sub->count(flag_for(key)) > 0) cfg.set(key, value);
        }
        if (!seed.empty()) cfg.set("run.seed", seed);
        if (!threads.empty()) cfg.set("run.threads", threads);
        if (!out.empty()) cfg.set("run.out", out);
    } catch (const regcalc::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return regcalc::kExitValidation;
    }
    return regcalc::run(cfg, std::cerr);
}
