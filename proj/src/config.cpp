#include "regcalc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace regcalc {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    return out;
}

const std::vector<KeySpec>& shared_keys() {
    static const std::vector<KeySpec> keys = {
        {"run.command", "", "subcommand to run"},
        {"run.seed", "1", "master seed"},
        {"run.threads", "0", "worker threads (0 = hardware)"},
        {"run.out", "out", "output directory"},
    };
    return keys;
}

const std::vector<KeySpec>& process_keys() {
    static const std::vector<KeySpec> keys = {
        {"process.kind", "bm", "bm|fbm|bifbm|bifbm-unit|dirichlet|identity|monotone|det:<id>"},
        {"process.sigma", "1", "Brownian scale"},
        {"process.hurst", "0.75", "Hurst index for fbm/bifbm"},
        {"process.k", "0.8", "bifractional K"},
        {"process.scale", "0.5", "scale of the zero-QV part for dirichlet"},
        {"grid.T", "1", "horizon"},
        {"grid.n", "1024", "number of steps"},
    };
    return keys;
}

const std::vector<KeySpec>& estimator_keys() {
    static const std::vector<KeySpec> keys = {
        {"est.eps_ladder", "64,32,16,8,4,2", "eps multiples of dt, decreasing"},
        {"est.t", "1", "evaluation time"},
        {"est.paths", "100", "ensemble size"},
    };
    return keys;
}

}  // namespace

double parse_real(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(what + ": expected a number, got '" + text + "'");
    return v;
}

std::int64_t parse_integer(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(what + ": expected an integer, got '" + text + "'");
    return v;
}

Config Config::parse(std::string_view text, const std::string& origin) {
    Config c;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty() || key.find('.') == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key must look like section.key");
        c.entries_[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c = {"simulate",  "qv",        "forward", "window-qv",
                                               "ito-check", "replicate", "kolmo",   "selftest"};
    return c;
}

std::vector<KeySpec> command_keys(const std::string& command) {
    std::vector<KeySpec> k = shared_keys();
    auto add = [&k](const std::vector<KeySpec>& more) { k.insert(k.end(), more.begin(), more.end()); };
    if (command == "simulate") {
        add(process_keys());
        add({{"sim.paths", "1", "number of paths"}});
    } else if (command == "qv") {
        add(process_keys());
        add(estimator_keys());
    } else if (command == "forward") {
        add(process_keys());
        add(estimator_keys());
        add({{"forward.integrand", "path", "one|time|path (Y = X)"}});
    } else if (command == "window-qv") {
        add(process_keys());
        add(estimator_keys());
        add({{"window.tau", "", "window width (default: horizon)"},
             {"measure.atom", "1", "weight of delta0 x delta0 (empty = none)"},
             {"measure.diag", "", "diagonal density const:c (empty = none)"},
             {"measure.l2", "", "L2 density const:c (empty = none)"}});
    } else if (command == "ito-check") {
        add(process_keys());
        add(estimator_keys());
        add({{"ito.functional", "point", "point|sqmean|sqnorm (window) or x2|tx|sin (scalar)"}});
    } else if (command == "replicate") {
        add({{"grid.T", "1", "horizon"},
             {"grid.n", "4096", "number of steps"},
             {"est.eps_ladder", "64,32,16,8,4,2", "eps multiples of dt, decreasing"},
             {"replicate.payoff", "square", "linear|square|call:K"},
             {"replicate.sigma", "1", "volatility"},
             {"replicate.models", "bm,dirichlet,bifbm", "comma-separated model list"},
             {"replicate.paths", "200", "paths per model"},
             {"replicate.dirichlet_scale", "0.5", "scale of the fBm(0.75) part"},
             {"replicate.hurst", "0.625", "bifbm H (K = 1/(2H))"},
             {"replicate.order", "64", "Gauss-Hermite order"}});
    } else if (command == "kolmo") {
        add({{"kolmo.dim", "16", "Galerkin dimension"},
             {"kolmo.a", "heat", "heat or table:a1;a2;..."},
             {"kolmo.q", "power:2", "power:p or table:q1;q2;..."},
             {"kolmo.coeffs", "ou", "ou (b = 0, sigma = I) or drift (b_i = 1/i)"},
             {"kolmo.g", "quad", "quad (energy norm) or linear (c_i = 1/i)"},
             {"kolmo.s", "0.5", "horizon s"},
             {"kolmo.steps", "16", "time steps of the Monte Carlo scheme"},
             {"kolmo.paths", "1000,10000,100000", "path counts"},
             {"kolmo.dt_ladder", "256,512,1024,2048,4096", "step counts for the decomposition check"},
             {"kolmo.decomp_paths", "500", "paths per decomposition level"}});
    } else if (command == "selftest") {
        // shared keys only
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return k;
}

ResolvedConfig resolve(const Config& config) {
    const auto cmd = config.get("run.command");
    if (!cmd || cmd->empty()) throw ConfigError("missing required key 'run.command'");
    const auto& cmds = known_commands();
    if (std::find(cmds.begin(), cmds.end(), *cmd) == cmds.end()) throw ConfigError("unknown command '" + *cmd + "'");

    const auto keys = command_keys(*cmd);
    ResolvedConfig r;
    r.command_ = *cmd;
    for (const auto& [key, value] : config.entries()) {
        const bool known = std::any_of(keys.begin(), keys.end(), [&](const KeySpec& s) { return s.key == key; });
        if (!known) throw ConfigError("unknown key '" + key + "' for command '" + *cmd + "'");
    }
    for (const auto& spec : keys) {
        const auto v = config.get(spec.key);
        r.values_[spec.key] = v ? *v : spec.default_value;
    }
    // Early format checks for the shared keys.
    r.seed();
    if (r.integer("run.threads") < 0) throw ConfigError("run.threads must be >= 0");
    if (r.str("run.out").empty()) throw ConfigError("run.out must not be empty");
    return r;
}

const std::string& ResolvedConfig::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("key '" + key + "' is not defined for command '" + command_ + "'");
    return it->second;
}

double ResolvedConfig::real(const std::string& key) const { return parse_real(str(key), key); }

std::int64_t ResolvedConfig::integer(const std::string& key) const { return parse_integer(str(key), key); }

std::size_t ResolvedConfig::count(const std::string& key) const {
    const auto v = integer(key);
    if (v < 1) throw ConfigError(key + " must be >= 1");
    return static_cast<std::size_t>(v);
}

std::uint64_t ResolvedConfig::seed() const {
    const std::string t = trim(str("run.seed"));
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("run.seed: expected a non-negative integer, got '" + t + "'");
    return v;
}

std::vector<std::size_t> ResolvedConfig::counts(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& part : split_commas(str(key))) {
        const auto v = parse_integer(part, key);
        if (v < 1) throw ConfigError(key + ": entries must be >= 1");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::vector<double> ResolvedConfig::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& part : split_commas(str(key))) out.push_back(parse_real(part, key));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::string ResolvedConfig::manifest() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) out << k << '=' << v << '\n';
    return out.str();
}

}  // namespace regcalc
