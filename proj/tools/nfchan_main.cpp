// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: parses an INI config with named presets, applies
// flag overrides, and dispatches to the experiment/library code. Exit codes:
// 0 success, 1 configuration or validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nfchan/correlation.hpp"
#include "nfchan/io.hpp"
#include "nfchan/sim.hpp"
#include "nfchan/subspace.hpp"
#include "nfchan/validation.hpp"

namespace {

using KeyValues = std::map<std::string, std::string>;

const std::set<std::string> kKnownKeys = {
    "m_h",   "m_v",    "spacing", "wavelength", "phi1",   "phi2",          "theta1",
    "theta2", "d1",    "d2",      "alt_d1",     "alt_d2", "clusters",      "snr_db",
    "beta",  "trials", "blocks",  "seed",       "flavor", "rank_fraction",
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

// Angles are written as rational multiples of pi ("-pi/6", "pi/9", "2pi/3")
// or as plain decimals; the symbolic form avoids decimal drift.
double parse_angle(const std::string& text) {
    const std::string t = trim(text);
    const std::size_t pi_pos = t.find("pi");
    if (pi_pos == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (trim(t.substr(used)) != "") {
            throw std::invalid_argument("malformed angle: " + text);
        }
        return v;
    }
    double sign = 1.0;
    std::string head = trim(t.substr(0, pi_pos));
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
        sign = head[0] == '-' ? -1.0 : 1.0;
        head = trim(head.substr(1));
    }
    const double numerator = head.empty() ? 1.0 : std::stod(head);
    std::string tail = trim(t.substr(pi_pos + 2));
    double denominator = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/') {
            throw std::invalid_argument("malformed angle: " + text);
        }
        denominator = std::stod(trim(tail.substr(1)));
        if (denominator == 0.0) {
            throw std::invalid_argument("zero denominator in angle: " + text);
        }
    }
    return sign * numerator * std::numbers::pi / denominator;
}

std::map<std::string, KeyValues> parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    std::map<std::string, KeyValues> sections;
    std::string line;
    std::string current;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line.substr(0, line.find_first_of("#;")));
        if (t.empty()) {
            continue;
        }
        if (t.front() == '[' && t.back() == ']') {
            current = trim(t.substr(1, t.size() - 2));
            sections[current];
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos || current.empty()) {
            throw std::invalid_argument("config parse error at line " +
                                        std::to_string(line_no));
        }
        const std::string key = trim(t.substr(0, eq));
        if (kKnownKeys.count(key) == 0) {
            throw std::invalid_argument("unknown config key: " + key);
        }
        sections[current][key] = trim(t.substr(eq + 1));
    }
    return sections;
}

class Settings {
  public:
    explicit Settings(KeyValues values) : values_(std::move(values)) {}

    double number(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed number for " + key + ": " + it->second);
        }
    }

    double angle(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : parse_angle(it->second);
    }

    long long integer(const std::string& key, long long fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        try {
            return std::stoll(it->second);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed integer for " + key + ": " + it->second);
        }
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

  private:
    KeyValues values_;
};

nfchan::ExperimentConfig build_config(const Settings& s) {
    const double wavelength = s.number("wavelength", 0.1);
    const nfchan::ArrayGeometry geometry(
        static_cast<int>(s.integer("m_h", 32)), static_cast<int>(s.integer("m_v", 32)),
        s.number("spacing", wavelength / 2.0), wavelength);
    const nfchan::ScatteringRegion region(
        s.angle("phi1", -std::numbers::pi / 6), s.angle("phi2", std::numbers::pi / 6),
        s.angle("theta1", -std::numbers::pi / 9), s.angle("theta2", 0.0),
        s.number("d1", 10.0), s.number("d2", 20.0));
    nfchan::ExperimentConfig cfg(geometry, region);
    cfg.cluster_count = static_cast<int>(s.integer("clusters", 10));
    cfg.snr_db = s.number("snr_db", 0.0);
    cfg.beta = s.number("beta", 1.0);
    cfg.trials = static_cast<int>(s.integer("trials", 2000));
    cfg.max_blocks = static_cast<int>(s.integer("blocks", 10));
    cfg.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    const std::string flavor = s.text("flavor", "fresnel");
    if (flavor == "exact") {
        cfg.flavor = nfchan::ResponseFlavor::exact;
    } else if (flavor == "fresnel") {
        cfg.flavor = nfchan::ResponseFlavor::fresnel;
    } else {
        throw std::invalid_argument("flavor must be exact or fresnel");
    }
    cfg.rank_fraction = s.number("rank_fraction", nfchan::kDefaultRankFraction);
    return cfg;
}

std::filesystem::path make_output_dir(const std::string& root, const std::string& subcommand,
                                      const std::string& preset, bool fixed) {
    std::string leaf = "fixed";
    if (!fixed) {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::localtime(&t));
        leaf = buf;
    }
    const std::filesystem::path dir =
        std::filesystem::path(root) / subcommand / preset / leaf;
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

int run_eigenspectrum(const Settings& s, const std::filesystem::path& dir) {
    const nfchan::ExperimentConfig cfg = build_config(s);
    struct Entry {
        std::string label;
        nfchan::CorrelationMatrix matrix;
    };
    std::vector<Entry> entries;
    entries.push_back({"nf", nfchan::representative_correlation(cfg.geometry, cfg.region,
                                                                cfg.beta)});
    if (s.has("alt_d1") && s.has("alt_d2")) {
        const nfchan::ScatteringRegion alt(cfg.region.phi1, cfg.region.phi2, cfg.region.theta1,
                                           cfg.region.theta2, s.number("alt_d1", 0.0),
                                           s.number("alt_d2", 0.0));
        entries.push_back(
            {"nf_alt", nfchan::representative_correlation(cfg.geometry, alt, cfg.beta)});
    }
    entries.push_back({"ff", nfchan::far_field_representative_correlation(
                                 cfg.geometry, cfg.region, cfg.beta)});

    for (const Entry& e : entries) {
        const nfchan::EigenSpectrum spectrum = nfchan::eigendecompose(e.matrix);
        std::ostringstream csv;
        nfchan::write_eigenspectrum_csv(csv, spectrum, e.label);
        write_file(dir / (e.label + ".csv"), csv.str());
        std::printf("%s: effective rank %d of %d (fraction %.7g)\n", e.label.c_str(),
                    nfchan::effective_rank(spectrum, cfg.rank_fraction),
                    cfg.geometry.size(), cfg.rank_fraction);
    }
    std::printf("wrote %zu spectra to %s\n", entries.size(), dir.string().c_str());
    return 0;
}

int run_nmse(const Settings& s, const std::filesystem::path& dir,
             const std::string& cache_dir) {
    const nfchan::ExperimentConfig cfg = build_config(s);
    const nfchan::NmseCurve curve = nfchan::run_nmse_experiment(cfg, cache_dir);
    std::ostringstream csv;
    nfchan::write_nmse_csv(csv, cfg, curve);
    write_file(dir / "nmse.csv", csv.str());
    std::printf("wrote %s\n", (dir / "nmse.csv").string().c_str());
    return 0;
}

int run_dump_correlation(const Settings& s, const std::filesystem::path& dir, bool with_csv) {
    const nfchan::ExperimentConfig cfg = build_config(s);
    const nfchan::CorrelationMatrix r =
        nfchan::representative_correlation(cfg.geometry, cfg.region, cfg.beta);
    std::ostringstream bin(std::ios::binary);
    nfchan::write_correlation_binary(bin, r);
    write_file(dir / "correlation.bin", bin.str(), std::ios::binary);
    if (with_csv) {
        std::ostringstream csv;
        nfchan::write_correlation_csv(csv, r);
        write_file(dir / "correlation.csv", csv.str());
    }
    std::printf("wrote correlation dump (M=%d) to %s\n", cfg.geometry.size(),
                dir.string().c_str());
    return 0;
}

int run_validate(const Settings& s) {
    const std::uint64_t seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    const std::vector<nfchan::CheckResult> checks = nfchan::run_validation(seed);
    bool all_passed = true;
    for (const nfchan::CheckResult& c : checks) {
        std::printf("%-40s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                    c.detail.c_str());
        all_passed = all_passed && c.passed;
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field channel modeling and estimation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path = "configs/presets.ini";
    std::string preset = "smoke";
    std::string out_root = "out";
    std::string cache_dir;
    std::vector<std::string> overrides;
    bool fixed_output = false;
    bool dump_csv = false;

    app.add_option("--config", config_path, "INI config file with preset sections");
    app.add_option("--preset", preset, "preset section name");
    app.add_option("--out", out_root, "output root directory");
    app.add_option("--cache", cache_dir, "subspace cache directory");
    app.add_option("--set", overrides, "key=value config overrides");
    app.add_flag("--fixed-output", fixed_output,
                 "write into a fixed subdirectory instead of a timestamped one");

    CLI::App* sub_eigen = app.add_subcommand("eigenspectrum", "dump sorted eigenvalue CSVs");
    CLI::App* sub_nmse = app.add_subcommand("nmse", "run the estimator comparison");
    CLI::App* sub_dump =
        app.add_subcommand("dump-correlation", "write the correlation matrix to disk");
    sub_dump->add_flag("--csv", dump_csv, "also write a CSV rendering");
    CLI::App* sub_validate = app.add_subcommand("validate", "run the on-demand check suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        const std::map<std::string, KeyValues> sections = parse_ini(config_path);
        const auto section = sections.find(preset);
        if (section == sections.end()) {
            throw std::invalid_argument("preset not found in config: " + preset);
        }
        KeyValues values = section->second;
        for (const std::string& kv : overrides) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("override must be key=value: " + kv);
            }
            const std::string key = trim(kv.substr(0, eq));
            if (kKnownKeys.count(key) == 0) {
                throw std::invalid_argument("unknown config key: " + key);
            }
            values[key] = trim(kv.substr(eq + 1));
        }
        const Settings settings(std::move(values));

        if (sub_validate->parsed()) {
            return run_validate(settings);
        }
        const std::string name = sub_eigen->parsed()    ? "eigenspectrum"
                                 : sub_nmse->parsed()   ? "nmse"
                                                        : "dump-correlation";
        const std::filesystem::path dir =
            make_output_dir(out_root, name, preset, fixed_output);
        if (sub_eigen->parsed()) {
            return run_eigenspectrum(settings, dir);
        }
        if (sub_nmse->parsed()) {
            return run_nmse(settings, dir, cache_dir);
        }
        return run_dump_correlation(settings, dir, dump_csv);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
