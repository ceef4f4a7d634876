#include "biwave/logio.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "biwave/config.hpp"

namespace biwave {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string log_to_csv(const AcquisitionLog& log) {
    std::ostringstream os;
    os << "j,i1,i2,b,skipped\n";
    std::size_t ri = 0, si = 0;
    const std::size_t total = log.records.size() + log.skipped.size();
    char buf[160];
    for (std::size_t i = 0; i < total; ++i) {
        const bool take_skipped =
            si < log.skipped.size() && (ri >= log.records.size() || log.skipped[si] < log.records[ri].j);
        if (take_skipped) {
            std::snprintf(buf, sizeof buf, "%zu,0,0,0,1\n", log.skipped[si++]);
            os << buf;
        } else {
            const BucketRecord& r = log.records[ri++];
            os << r.j << ',' << fmt_double(r.i1) << ',' << fmt_double(r.i2) << ',' << fmt_double(r.b)
               << ",0\n";
        }
    }
    return os.str();
}

std::string log_metadata(const AcquisitionLog& log) {
    KeyValues kv;
    kv["family"] = family_name(log.family);
    kv["n"] = std::to_string(log.n);
    kv["bits"] = log.detector.bits == DetectorModel::kUnlimited ? "unlimited" : std::to_string(log.detector.bits);
    kv["full_scale"] = fmt_double(log.detector.full_scale);
    kv["noise_sigma"] = fmt_double(log.detector.noise_sigma);
    kv["seed"] = std::to_string(log.detector.rng_seed);
    kv["basis_seed"] = std::to_string(log.basis_seed);
    return format_key_values(kv);
}

void write_log(const std::string& path, const AcquisitionLog& log) {
    {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("log: cannot open " + path + " for writing");
        const std::string csv = log_to_csv(log);
        f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
        if (!f) throw std::runtime_error("log: write failed for " + path);
    }
    std::ofstream m(path + ".meta", std::ios::binary);
    if (!m) throw std::runtime_error("log: cannot open " + path + ".meta for writing");
    const std::string meta = log_metadata(log);
    m.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    if (!m) throw std::runtime_error("log: write failed for " + path + ".meta");
}

AcquisitionLog read_log(const std::string& path) {
    std::ifstream mf(path + ".meta");
    if (!mf) throw std::runtime_error("log: cannot open " + path + ".meta");
    std::ostringstream mos;
    mos << mf.rdbuf();
    const KeyValues kv = parse_key_values(mos.str());

    AcquisitionLog log;
    auto require = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error(std::string("log: metadata missing ") + key);
        return it->second;
    };
    log.family = family_from_name(require("family"));
    log.n = std::stoi(require("n"));
    const std::string& bits = require("bits");
    log.detector.bits = bits == "unlimited" ? DetectorModel::kUnlimited : std::stoi(bits);
    log.detector.full_scale = std::stod(require("full_scale"));
    log.detector.noise_sigma = std::stod(require("noise_sigma"));
    log.detector.rng_seed = std::stoull(require("seed"));
    log.basis_seed = std::stoull(require("basis_seed"));

    std::ifstream f(path);
    if (!f) throw std::runtime_error("log: cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line != "j,i1,i2,b,skipped")
        throw std::runtime_error("log: bad CSV header in " + path);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::size_t j;
        double i1, i2, b;
        int skipped;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%d", &j, &i1, &i2, &b, &skipped) != 5)
            throw std::runtime_error("log: malformed CSV row in " + path + ": " + line);
        if (skipped)
            log.skipped.push_back(j);
        else
            log.records.push_back({j, i1, i2, b});
    }
    return log;
}

}  // namespace biwave
