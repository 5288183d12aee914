#pragma once

// Report emission: JSON (stable key order, numerics tagged exact or carrying
// an error bound) and RFC-style CSV. Every report embeds the resolved run
// configuration so runs are reproducible from the artifact alone.

#include "cantorft/config.hpp"
#include "cantorft/dyadic.hpp"
#include "cantorft/schedule.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cantorft {

using Json = nlohmann::json;  // object keys sort lexicographically: stable output

inline Json jnum(double value, double abs_error) {
    return Json{{"value", value}, {"abs_error", abs_error}};
}

inline Json jexact(const Dyadic& v) {
    return Json{{"exact", v.to_string()}, {"approx", v.to_double()}};
}

inline Json jexact(std::int64_t v) { return Json{{"exact", v}}; }

inline Json jinterval(const DInterval& iv) {
    return Json{{"lo", iv.lo.to_string()},
                {"hi", iv.hi.to_string()},
                {"approx", iv.mid_double()},
                {"abs_error", iv.width().mul_pow2(-1).to_double()}};
}

inline Json jschedule(const ScheduleSpec& spec) {
    return Json{{"name", spec.name}, {"k_cap", spec.k_cap}, {"seed", spec.seed}};
}

// ---- CSV ------------------------------------------------------------------

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(cells[i]);
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

    void write(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << out_.str();
    }

private:
    static std::string quote(const std::string& s) {
        bool need = s.find_first_of(",\"\n") != std::string::npos;
        if (!need) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        return q + "\"";
    }
    std::ostringstream out_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace cantorft
