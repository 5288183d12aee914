#pragma once

// Line-oriented `key = value` files with bracket lists. Used for schedule
// files and run configs; round-trip stable, errors carry line/column.

#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantorft {

struct ConfigError : std::runtime_error {
    ConfigError(std::size_t line, std::size_t col, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what),
          line(line), col(col) {}
    std::size_t line, col;
};

struct KvFile {
    // insertion-ordered keys; values are raw strings or bracket lists
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const {
        for (auto& [k, v] : entries)
            if (k == key) return true;
        return false;
    }
    const std::string& get(const std::string& key) const {
        for (auto& [k, v] : entries)
            if (k == key) return v;
        throw std::out_of_range("missing key: " + key);
    }
    std::string get_or(const std::string& key, const std::string& dflt) const {
        return has(key) ? get(key) : dflt;
    }
    void set(const std::string& key, const std::string& value) {
        for (auto& [k, v] : entries)
            if (k == key) { v = value; return; }
        entries.emplace_back(key, value);
    }

    std::int64_t get_int(const std::string& key) const {
        return std::stoll(get(key));
    }
    double get_double(const std::string& key) const {
        return std::stod(get(key));
    }
    std::vector<std::string> get_list(const std::string& key) const {
        const std::string& v = get(key);
        if (v.size() < 2 || v.front() != '[' || v.back() != ']')
            throw std::invalid_argument("key '" + key + "' is not a list: " + v);
        std::vector<std::string> out;
        std::string item;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            if (v[i] == ',') {
                out.push_back(item);
                item.clear();
            } else {
                item += v[i];
            }
        }
        if (!item.empty() || !out.empty()) out.push_back(item);
        for (auto& s : out) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        }
        return out;
    }

    std::string emit() const {
        std::ostringstream os;
        for (auto& [k, v] : entries) os << k << " = " << v << "\n";
        return os.str();
    }

    static KvFile parse(const std::string& text) {
        KvFile f;
        std::size_t line_no = 1;
        std::size_t i = 0;
        while (i <= text.size()) {
            std::size_t end = text.find('\n', i);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(i, end - i);
            std::size_t h = line.find('#');
            if (h != std::string::npos) line = line.substr(0, h);
            bool blank = true;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
            if (!blank) {
                std::size_t eq = line.find('=');
                if (eq == std::string::npos)
                    throw ConfigError(line_no, line.size(), "expected 'key = value'");
                auto trim = [](std::string s) {
                    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
                    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
                    return s;
                };
                std::string key = trim(line.substr(0, eq));
                std::string val = trim(line.substr(eq + 1));
                if (key.empty()) throw ConfigError(line_no, 1, "empty key");
                for (char c : key)
                    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
                        throw ConfigError(line_no, key.find(c) + 1, std::string("bad character in key: '") + c + "'");
                if (f.has(key)) throw ConfigError(line_no, 1, "duplicate key: " + key);
                f.entries.emplace_back(key, val);
            }
            if (end == text.size()) break;
            i = end + 1;
            ++line_no;
        }
        return f;
    }
};

}  // namespace cantorft
