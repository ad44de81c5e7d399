/**
 * @file run_config.cpp
 * @brief Key table, parsing and hashing of run configurations
 */

#include "run_config.hpp"

#include "clab/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace clab::cli {

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = {
        {"a", KeyKind::Real, "1", "cathode half-width"},
        {"b", KeyKind::Real, "1", "anode extent"},
        {"A", KeyKind::Real, std::nullopt, "current amplitude (default: searched)"},
        {"beta", KeyKind::Real, "0.25", "singularity exponent of j"},
        {"V0", KeyKind::Real, "1", "potential scale of the 1D eigenproblem"},
        {"R", KeyKind::Real, "1.5707963267948966", "half-length of the 1D interval"},
        {"q", KeyKind::Real, std::nullopt, "power-law exponent, j = lambda y^q"},
        {"lambda", KeyKind::Real, std::nullopt, "power-law amplitude"},
        {"j", KeyKind::Real, "0.44444444444444442", "constant 1D current"},
        {"lambda_min", KeyKind::Real, std::nullopt, "bifurcation grid start (default lambda1/2)"},
        {"lambda_max", KeyKind::Real, std::nullopt, "bifurcation grid end (default 2 lambda*)"},
        {"n_lambda", KeyKind::Integer, "101", "bifurcation grid size"},
        {"points", KeyKind::Integer, "1001", "1D profile samples"},
        {"Nx", KeyKind::Integer, "256", "intervals in x"},
        {"Ny", KeyKind::Integer, "128", "intervals in y"},
        {"tol", KeyKind::Real, "1e-8", "monotone iteration tolerance"},
        {"max_iter", KeyKind::Integer, "2000", "monotone iteration cap"},
        {"betas", KeyKind::RealList, "0,0.25", "wings beta list"},
        {"levels", KeyKind::Integer, "3", "wings refinement levels"},
        {"dt", KeyKind::Real, std::nullopt, "time step (default: safe bound)"},
        {"T", KeyKind::Real, std::nullopt, "final time (default: 10^4 steps)"},
        {"nu", KeyKind::Real, "1.3333333333333333", "nondegeneracy exponent of the decay weight"},
        {"t_min", KeyKind::Real, "0.10000000000000001", "start of the decay fit window"},
        {"outdir", KeyKind::Text, "runs", "output root"},
    };
    return specs;
}

const KeySpec* find_key(const std::string& name) {
    for (const auto& k : key_specs())
        if (k.name == name) return &k;
    return nullptr;
}

double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
        throw DomainError("key '" + key + "': not a finite number: '" + s + "'");
    return v;
}

int parse_integer(const std::string& key, const std::string& s) {
    int v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end)
        throw DomainError("key '" + key + "': not an integer: '" + s + "'");
    return v;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const KeySpec* k = find_key(key);
    if (!k) throw DomainError("unknown key '" + key + "'");
    const std::string v = trim(value);
    switch (k->kind) {
    case KeyKind::Real: parse_real(key, v); break;
    case KeyKind::Integer: parse_integer(key, v); break;
    case KeyKind::RealList:
        if (v.empty()) throw DomainError("key '" + key + "': empty list");
        for (const auto& item : split_list(v)) parse_real(key, item);
        break;
    case KeyKind::Text:
        if (v.empty()) throw DomainError("key '" + key + "': empty value");
        break;
    }
    values_[key] = v;
}

std::optional<std::string> RunConfig::raw(const std::string& key) const {
    const KeySpec* k = find_key(key);
    if (!k) throw DomainError("unknown key '" + key + "'");
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    return k->fallback;
}

bool RunConfig::has(const std::string& key) const { return raw(key).has_value(); }

double RunConfig::real(const std::string& key) const {
    auto r = raw(key);
    if (!r) throw DomainError("key '" + key + "' is required");
    return parse_real(key, *r);
}

std::optional<double> RunConfig::maybe_real(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    return parse_real(key, *r);
}

int RunConfig::integer(const std::string& key) const {
    auto r = raw(key);
    if (!r) throw DomainError("key '" + key + "' is required");
    return parse_integer(key, *r);
}

std::string RunConfig::text(const std::string& key) const {
    auto r = raw(key);
    if (!r) throw DomainError("key '" + key + "' is required");
    return *r;
}

std::vector<double> RunConfig::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(text(key))) out.push_back(parse_real(key, item));
    return out;
}

std::string RunConfig::echo() const {
    std::vector<std::string> names;
    for (const auto& k : key_specs()) names.push_back(k.name);
    std::sort(names.begin(), names.end());
    std::ostringstream os;
    for (const auto& n : names)
        if (auto r = raw(n)) os << n << "=" << *r << "\n";
    return os.str();
}

std::string RunConfig::run_id() const {
    // FNV-1a over the echo without the output root
    std::uint64_t h = 1469598103934665603ull;
    std::istringstream is(echo());
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("outdir=", 0) == 0) continue;
        for (unsigned char c : line + "\n") {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void load_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
        cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    load_config_text(cfg, ss.str());
}

}  // namespace clab::cli
