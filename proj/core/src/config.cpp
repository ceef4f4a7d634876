#include "biwave/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace biwave {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int to_int(const std::string& v, const char* key) {
    try {
        std::size_t pos = 0;
        const int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config: bad integer for ") + key + ": " + v);
    }
}

double to_double(const std::string& v, const char* key) {
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config: bad number for ") + key + ": " + v);
    }
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: missing '=' on line " + std::to_string(lineno));
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        if (kv.count(key)) throw std::invalid_argument("config: duplicate key: " + key);
        kv[key] = value;
    }
    return kv;
}

std::string format_key_values(const KeyValues& kv) {
    std::ostringstream os;
    for (const auto& [key, value] : kv) os << key << " = " << value << '\n';
    return os.str();
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (key == "family") {
            cfg.family = value;
        } else if (key == "n") {
            cfg.n = to_int(value, "n");
            if (*cfg.n < 2) throw std::invalid_argument("config: n must be >= 2");
        } else if (key == "bits") {
            cfg.bits = value == "unlimited" ? 0 : to_int(value, "bits");
            if (*cfg.bits < 0 || *cfg.bits > 16)
                throw std::invalid_argument("config: bits must be 1..16 or unlimited");
        } else if (key == "noise_sigma") {
            cfg.noise_sigma = to_double(value, "noise_sigma");
            if (*cfg.noise_sigma < 0.0) throw std::invalid_argument("config: noise_sigma must be >= 0");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "tau") {
            cfg.tau = to_double(value, "tau");
            if (*cfg.tau < 0.0) throw std::invalid_argument("config: tau must be >= 0");
        } else if (key == "eps") {
            cfg.eps = to_double(value, "eps");
            if (*cfg.eps < 0.0) throw std::invalid_argument("config: eps must be >= 0");
        } else if (key == "scene") {
            cfg.scene_path = value;
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "log") {
            cfg.log_path = value;
        } else {
            throw std::invalid_argument("config: unknown key: " + key);
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_run_config(os.str());
}

}  // namespace biwave
