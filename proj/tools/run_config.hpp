/**
 * @file run_config.hpp
 * @brief Flat key=value run configuration with typed access
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clab::cli {

enum class KeyKind { Real, Integer, Text, RealList };

struct KeySpec {
    std::string name;
    KeyKind kind;
    std::optional<std::string> fallback;  ///< default, none means "unset"
    std::string help;
};

/// Every accepted key; anything else is rejected.
const std::vector<KeySpec>& key_specs();
const KeySpec* find_key(const std::string& name);

class RunConfig {
public:
    /// Sets a key after validating its name and value syntax. Throws DomainError.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    double real(const std::string& key) const;
    std::optional<double> maybe_real(const std::string& key) const;
    int integer(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;

    /// Sorted key=value lines of every key that is set or has a default.
    std::string echo() const;
    /// Stable 16-hex-digit hash of echo(), minus outdir.
    std::string run_id() const;
    const std::map<std::string, std::string>& explicit_values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::optional<std::string> raw(const std::string& key) const;
};

/// Parses "key = value" lines; '#' starts a comment. Later lines win.
void load_config_text(RunConfig& cfg, const std::string& text);
void load_config_file(RunConfig& cfg, const std::string& path);

double parse_real(const std::string& key, const std::string& s);
int parse_integer(const std::string& key, const std::string& s);

}  // namespace clab::cli
