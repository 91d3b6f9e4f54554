#include "camwave/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

namespace camwave {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key, int line) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError(std::string(key) + ": cannot parse '" + std::string(text) + "' as a number", line);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError(std::string(key) + ": value must be finite", line);
    }
    return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key, int line) {
    std::vector<T> out;
    for (auto item : split(text, ',')) out.push_back(parse_number<T>(item, key, line));
    return out;
}

using Handler = std::function<void(RunConfig&, std::string_view, int)>;

struct InterfererLists {
    std::vector<double> angles_deg;
    std::vector<double> powers_db;
    bool angles_set = false;
    bool powers_set = false;
};

std::map<std::string, Handler, std::less<>> make_handlers(InterfererLists& interf) {
    std::map<std::string, Handler, std::less<>> h;
    h["mode"] = [](RunConfig& c, std::string_view v, int line) {
        try {
            c.mode = parse_mode(v);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), line);
        }
    };
    h["scenario.n_tx"] = [](RunConfig& c, std::string_view v, int l) { c.scenario.n_tx = parse_number<int>(v, "scenario.n_tx", l); };
    h["scenario.n_rx"] = [](RunConfig& c, std::string_view v, int l) { c.scenario.n_rx = parse_number<int>(v, "scenario.n_rx", l); };
    h["scenario.n_samples"] = [](RunConfig& c, std::string_view v, int l) {
        c.scenario.n_samples = parse_number<int>(v, "scenario.n_samples", l);
    };
    h["scenario.target_angle_deg"] = [](RunConfig& c, std::string_view v, int l) {
        c.scenario.target_angle_rad = deg_to_rad(parse_number<double>(v, "scenario.target_angle_deg", l));
    };
    h["scenario.target_power_db"] = [](RunConfig& c, std::string_view v, int l) {
        c.scenario.target_power_db = parse_number<double>(v, "scenario.target_power_db", l);
    };
    h["scenario.noise_power_db"] = [](RunConfig& c, std::string_view v, int l) {
        c.scenario.noise_power_db = parse_number<double>(v, "scenario.noise_power_db", l);
    };
    h["scenario.interferer_angles_deg"] = [&interf](RunConfig&, std::string_view v, int l) {
        interf.angles_deg = parse_list<double>(v, "scenario.interferer_angles_deg", l);
        interf.angles_set = true;
    };
    h["scenario.interferer_powers_db"] = [&interf](RunConfig&, std::string_view v, int l) {
        interf.powers_db = parse_list<double>(v, "scenario.interferer_powers_db", l);
        interf.powers_set = true;
    };
    h["constellation.omega"] = [](RunConfig& c, std::string_view v, int l) { c.omega = parse_number<int>(v, "constellation.omega", l); };
    h["constellation.eta"] = [](RunConfig& c, std::string_view v, int l) { c.eta = parse_number<int>(v, "constellation.eta", l); };
    h["solver.max_outer_iters"] = [](RunConfig& c, std::string_view v, int l) {
        c.solver.max_outer_iters = parse_number<int>(v, "solver.max_outer_iters", l);
    };
    h["solver.outer_tol"] = [](RunConfig& c, std::string_view v, int l) {
        c.solver.outer_tol = parse_number<double>(v, "solver.outer_tol", l);
    };
    h["solver.inner_max_iters"] = [](RunConfig& c, std::string_view v, int l) {
        c.solver.inner_max_iters = parse_number<int>(v, "solver.inner_max_iters", l);
    };
    h["solver.inner_tol"] = [](RunConfig& c, std::string_view v, int l) {
        c.solver.inner_tol = parse_number<double>(v, "solver.inner_tol", l);
    };
    h["solver.step_rule"] = [](RunConfig& c, std::string_view v, int l) {
        if (v == "fixed") {
            c.solver.step_rule = StepRule::Fixed;
        } else if (v == "backtracking") {
            c.solver.step_rule = StepRule::Backtracking;
        } else {
            throw ConfigError("solver.step_rule: expected fixed or backtracking", l);
        }
    };
    h["solver.seed"] = [](RunConfig& c, std::string_view v, int l) {
        c.solver.seed = parse_number<std::uint64_t>(v, "solver.seed", l);
    };
    h["solver.restarts"] = [](RunConfig& c, std::string_view v, int l) {
        c.solver.restarts = parse_number<int>(v, "solver.restarts", l);
    };
    h["outputs.directory"] = [](RunConfig& c, std::string_view v, int l) {
        if (v.empty()) throw ConfigError("outputs.directory must not be empty", l);
        c.outputs.directory = std::string(v);
    };
    h["outputs.formats"] = [](RunConfig& c, std::string_view v, int l) {
        c.outputs.csv = false;
        c.outputs.json = false;
        for (auto f : split(v, ',')) {
            if (f == "csv") {
                c.outputs.csv = true;
            } else if (f == "json") {
                c.outputs.json = true;
            } else {
                throw ConfigError("outputs.formats: unknown format '" + std::string(f) + "'", l);
            }
        }
    };
    h["sweep.n_samples"] = [](RunConfig& c, std::string_view v, int l) {
        c.sweep.n_samples = parse_list<int>(v, "sweep.n_samples", l);
    };
    h["sweep.pairs"] = [](RunConfig& c, std::string_view v, int l) {
        c.sweep.pairs.clear();
        for (auto item : split(v, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) throw ConfigError("sweep.pairs: expected omega:eta entries", l);
            c.sweep.pairs.emplace_back(parse_number<int>(parts[0], "sweep.pairs", l),
                                       parse_number<int>(parts[1], "sweep.pairs", l));
        }
    };
    h["sweep.jobs"] = [](RunConfig& c, std::string_view v, int l) { c.sweep.jobs = parse_number<int>(v, "sweep.jobs", l); };
    h["oracle.trials"] = [](RunConfig& c, std::string_view v, int l) { c.oracle.trials = parse_number<int>(v, "oracle.trials", l); };
    h["oracle.budget"] = [](RunConfig& c, std::string_view v, int l) {
        c.oracle.budget = parse_number<std::uint64_t>(v, "oracle.budget", l);
    };
    h["beampattern.grid_size"] = [](RunConfig& c, std::string_view v, int l) {
        c.beampattern_grid = parse_number<int>(v, "beampattern.grid_size", l);
    };
    return h;
}

void validate_pair(int omega, int eta, const std::string& where) {
    if (omega < 3) throw ConfigError(where + ": omega must be >= 3");
    if (eta % 2 != 0) throw ConfigError(where + ": eta must be even");
    if (eta < 2) throw ConfigError(where + ": eta must be >= 2");
    if (eta > omega) throw ConfigError(where + ": eta exceeds omega");
}

}  // namespace

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::Cam: return "cam";
        case Mode::Baseline: return "baseline";
        case Mode::Oracle: return "oracle";
        case Mode::Sweep: return "sweep";
        case Mode::Beampattern: return "beampattern";
    }
    return "cam";
}

Mode parse_mode(std::string_view name) {
    if (name == "cam" || name == "solve") return Mode::Cam;
    if (name == "baseline") return Mode::Baseline;
    if (name == "oracle") return Mode::Oracle;
    if (name == "sweep") return Mode::Sweep;
    if (name == "beampattern") return Mode::Beampattern;
    throw ConfigError("mode: unknown mode '" + std::string(name) + "'");
}

RunConfig default_config() {
    RunConfig c;
    c.scenario.n_tx = 4;
    c.scenario.n_rx = 8;
    c.scenario.n_samples = 8;
    c.scenario.target_angle_rad = deg_to_rad(15.0);
    c.scenario.target_power_db = 10.0;
    c.scenario.noise_power_db = 0.0;
    c.scenario.interferers = {{deg_to_rad(-50.0), 30.0}, {deg_to_rad(-10.0), 30.0}, {deg_to_rad(40.0), 30.0}};
    return c;
}

void RunConfig::validate() const {
    try {
        scenario.validate();
        solver.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    validate_pair(omega, eta, "constellation");
    if (!outputs.csv && !outputs.json) throw ConfigError("outputs.formats must list csv and/or json");
    if (beampattern_grid < 2) throw ConfigError("beampattern.grid_size must be >= 2");
    if (oracle.trials < 1) throw ConfigError("oracle.trials must be >= 1");
    if (oracle.budget < 1) throw ConfigError("oracle.budget must be >= 1");
    if (sweep.jobs < 1) throw ConfigError("sweep.jobs must be >= 1");
    if (mode == Mode::Sweep) {
        if (sweep.n_samples.empty()) throw ConfigError("sweep.n_samples must not be empty");
        if (sweep.pairs.empty()) throw ConfigError("sweep.pairs must not be empty");
    }
    for (int n : sweep.n_samples) {
        if (n < 1) throw ConfigError("sweep.n_samples entries must be >= 1");
    }
    for (const auto& [o, e] : sweep.pairs) validate_pair(o, e, "sweep.pairs");
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg = default_config();
    InterfererLists interf;
    const auto handlers = make_handlers(interf);
    std::set<std::string, std::less<>> seen;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        const auto it = handlers.find(key);
        if (it == handlers.end()) throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
        if (!seen.insert(std::string(key)).second) {
            throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
        }
        it->second(cfg, value, line_no);
    }

    if (interf.angles_set || interf.powers_set) {
        if (!interf.angles_set || !interf.powers_set) {
            throw ConfigError("scenario.interferer_angles_deg and scenario.interferer_powers_db must be given together");
        }
        if (interf.angles_deg.size() != interf.powers_db.size()) {
            throw ConfigError("scenario.interferer_angles_deg and scenario.interferer_powers_db differ in length");
        }
        cfg.scenario.interferers.clear();
        for (std::size_t m = 0; m < interf.angles_deg.size(); ++m) {
            cfg.scenario.interferers.push_back({deg_to_rad(interf.angles_deg[m]), interf.powers_db[m]});
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace camwave
