#pragma once

// Sectioned key = value configuration checked against a per-command schema.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eulervac/numerics.hpp"
#include "eulervac/report.hpp"

namespace eulervac::cli {

/// A schema violation; `field` is "section.key".
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& msg) : Error("config field '" + field + "': " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Kind { real, integer, text, real_list };

struct FieldSpec {
    std::string key;
    Kind kind = Kind::real;
    std::optional<std::string> fallback;  ///< nullopt: required; "": optional without default
    std::vector<std::string> choices;     ///< text fields only
    double lo = -kInf;
    bool lo_open = false;
    double hi = kInf;
};

using Schema = std::vector<FieldSpec>;

inline FieldSpec spec(std::string key, Kind kind, std::optional<std::string> fallback)
{
    FieldSpec f;
    f.key = std::move(key);
    f.kind = kind;
    f.fallback = std::move(fallback);
    return f;
}

inline FieldSpec real(std::string key, std::optional<std::string> fallback = std::nullopt) { return spec(std::move(key), Kind::real, std::move(fallback)); }

inline FieldSpec positive(std::string key, std::optional<std::string> fallback = std::nullopt)
{
    FieldSpec f = real(std::move(key), std::move(fallback));
    f.lo = 0.0;
    f.lo_open = true;
    return f;
}

inline FieldSpec count(std::string key, std::optional<std::string> fallback, double min)
{
    FieldSpec f = spec(std::move(key), Kind::integer, std::move(fallback));
    f.lo = min;
    return f;
}

inline FieldSpec choice(std::string key, std::vector<std::string> options, std::optional<std::string> fallback = std::nullopt)
{
    FieldSpec f = spec(std::move(key), Kind::text, std::move(fallback));
    f.choices = std::move(options);
    return f;
}

inline FieldSpec positive_list(std::string key, std::optional<std::string> fallback = std::nullopt)
{
    FieldSpec f = spec(std::move(key), Kind::real_list, std::move(fallback));
    f.lo = 0.0;
    f.lo_open = true;
    return f;
}

inline Schema operator+(Schema a, const Schema& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

namespace detail {

inline double parse_real(const std::string& field, const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || std::isnan(v)) throw ConfigError(field, "expected a number, got '" + s + "'");
    return v;
}

inline void check_bounds(const FieldSpec& f, double v)
{
    if (v < f.lo || (f.lo_open && v == f.lo)) throw ConfigError(f.key, "value " + fmt_full(v) + " must be " + (f.lo_open ? "> " : ">= ") + fmt_full(f.lo));
    if (v > f.hi) throw ConfigError(f.key, "value " + fmt_full(v) + " must be <= " + fmt_full(f.hi));
}

} // namespace detail

/// Parsed, schema-checked values. Keys with a default always have a value.
class Config {
public:
    Config() = default;

    static Config load(const std::filesystem::path& path, const Schema& schema)
    {
        if (!std::filesystem::is_regular_file(path)) throw ConfigError("--config", "file '" + path.string() + "' not found");
        std::ifstream in(path, std::ios::binary);
        std::ostringstream raw;
        raw << in.rdbuf();
        Config c;
        c.raw_ = raw.str();
        std::istringstream text(c.raw_);
        std::vector<CLI::ConfigItem> items;
        try {
            items = CLI::ConfigINI().from_config(text);
        } catch (const CLI::Error& e) {
            throw ConfigError("--config", std::string("unreadable INI: ") + e.what());
        }
        for (const CLI::ConfigItem& it : items) {
            if (it.name == "++" || it.name == "--") continue;
            std::string key;
            for (const std::string& p : it.parents) key += p + ".";
            key += it.name;
            if (find(schema, key) == nullptr) throw ConfigError(key, "unknown key for this command");
            if (c.values_.count(key)) throw ConfigError(key, "given twice");
            c.values_[key] = it.inputs;
        }
        c.apply(schema);
        return c;
    }

    /// Defaults only; used by commands whose config file is optional.
    static Config defaults(const Schema& schema)
    {
        Config c;
        c.apply(schema);
        return c;
    }

    double real(const std::string& key) const { return reals_.at(need(key)); }
    int integer(const std::string& key) const { return static_cast<int>(reals_.at(need(key))); }
    const std::string& text(const std::string& key) const { return texts_.at(need(key)); }
    const std::vector<double>& list(const std::string& key) const { return lists_.at(need(key)); }
    bool has(const std::string& key) const { return reals_.count(key) || texts_.count(key) || lists_.count(key); }
    const std::string& raw() const { return raw_; }

private:
    static const FieldSpec* find(const Schema& s, const std::string& key)
    {
        for (const FieldSpec& f : s)
            if (f.key == key) return &f;
        return nullptr;
    }

    const std::string& need(const std::string& key) const
    {
        if (!known_.count(key)) throw Error("internal: key '" + key + "' is not in the command schema");
        return key;
    }

    void apply(const Schema& schema)
    {
        for (const FieldSpec& f : schema) {
            known_.insert({f.key, true});
            std::vector<std::string> in;
            if (auto it = values_.find(f.key); it != values_.end()) {
                in = it->second;
            } else if (f.fallback) {
                if (f.fallback->empty()) continue;  // optional, no default
                std::istringstream s(*f.fallback);
                for (std::string w; s >> w;) in.push_back(w);
            } else {
                throw ConfigError(f.key, "required but missing");
            }
            if (in.empty()) throw ConfigError(f.key, "empty value");
            if (f.kind != Kind::real_list && in.size() != 1) throw ConfigError(f.key, "expected a single value");
            switch (f.kind) {
            case Kind::real: {
                const double v = detail::parse_real(f.key, in[0]);
                detail::check_bounds(f, v);
                reals_[f.key] = v;
                break;
            }
            case Kind::integer: {
                const double v = detail::parse_real(f.key, in[0]);
                if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(f.key, "expected an integer, got '" + in[0] + "'");
                detail::check_bounds(f, v);
                reals_[f.key] = v;
                break;
            }
            case Kind::text:
                if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), in[0]) == f.choices.end()) {
                    std::string opts;
                    for (const std::string& o : f.choices) opts += (opts.empty() ? "" : "|") + o;
                    throw ConfigError(f.key, "'" + in[0] + "' is not one of " + opts);
                }
                texts_[f.key] = in[0];
                break;
            case Kind::real_list: {
                std::vector<double> v;
                for (const std::string& s : in) {
                    v.push_back(detail::parse_real(f.key, s));
                    detail::check_bounds(f, v.back());
                }
                lists_[f.key] = v;
                break;
            }
            }
        }
    }

    std::string raw_;
    std::map<std::string, std::vector<std::string>> values_;
    std::map<std::string, bool> known_;
    std::map<std::string, double> reals_;
    std::map<std::string, std::string> texts_;
    std::map<std::string, std::vector<double>> lists_;
};

} // namespace eulervac::cli
