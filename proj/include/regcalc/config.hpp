#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regcalc {

/// Validation failure in an experiment config (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Flat `section.key=value` text. Blank lines and lines starting with `#`
/// are ignored; a repeated key keeps the last value.
class Config {
public:
    static Config parse(std::string_view text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

struct KeySpec {
    std::string key;
    std::string default_value;
    std::string help;
};

const std::vector<std::string>& known_commands();
/// Keys accepted by a command, including the shared `run.*` keys.
std::vector<KeySpec> command_keys(const std::string& command);

/// Config with the command checked, unknown keys rejected and defaults filled.
class ResolvedConfig {
public:
    const std::string& command() const { return command_; }
    const std::map<std::string, std::string>& values() const { return values_; }

    const std::string& str(const std::string& key) const;
    double real(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::size_t count(const std::string& key) const;  // integer >= 1
    std::uint64_t seed() const;
    std::vector<std::size_t> counts(const std::string& key) const;  // comma-separated
    std::vector<double> reals(const std::string& key) const;

    /// Sorted `key=value` lines; loading it reproduces the run.
    std::string manifest() const;

private:
    friend ResolvedConfig resolve(const Config&);
    std::string command_;
    std::map<std::string, std::string> values_;
};

ResolvedConfig resolve(const Config& config);

double parse_real(const std::string& text, const std::string& what);
std::int64_t parse_integer(const std::string& text, const std::string& what);

}  // namespace regcalc
