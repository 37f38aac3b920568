#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace noisyopt {

// Plain key-value experiment configuration: one `key = value` per line,
// '#' starts a comment, keys are unique.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in) {
        KeyValueConfig cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty())
                continue;
            const std::size_t eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
            if (!cfg.values_.emplace(key, value).second)
                throw std::runtime_error("config: duplicate key '" + key + "'");
        }
        return cfg;
    }

    static KeyValueConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("config: cannot open " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return values_.contains(key); }

    std::string get_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw std::runtime_error("config: missing key '" + key + "'");
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::uint64_t get_u64(const std::string& key) const { return to_u64(key, get_string(key)); }
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? get_u64(key) : fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::vector<std::string> get_list(const std::string& key) const {
        std::vector<std::string> out;
        std::stringstream ss(get_string(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty())
                out.push_back(item);
        }
        if (out.empty())
            throw std::runtime_error("config: empty list for key '" + key + "'");
        return out;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : get_list(key))
            out.push_back(to_double(key, item));
        return out;
    }

    std::vector<std::size_t> get_size_list(const std::string& key) const {
        std::vector<std::size_t> out;
        for (const auto& item : get_list(key))
            out.push_back(static_cast<std::size_t>(to_u64(key, item)));
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos)
            return {};
        const auto end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }

    static std::uint64_t to_u64(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const std::uint64_t out = std::stoull(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "' is not an integer: " + v);
        }
    }

    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double out = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "' is not a number: " + v);
        }
    }

    std::map<std::string, std::string> values_;
};

} // namespace noisyopt
