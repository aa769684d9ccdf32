#include <diffagg/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <diffagg/analysis.hpp>
#include <diffagg/csv.hpp>
#include <diffagg/errors.hpp>
#include <diffagg/kernel.hpp>
#include <diffagg/macro_solver.hpp>
#include <diffagg/particle.hpp>

namespace diffagg {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::particle: return "particle";
        case Mode::macro: return "macro";
        case Mode::compare: return "compare";
        case Mode::eoc: return "eoc";
        case Mode::bound: return "bound";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "particle") return Mode::particle;
    if (s == "macro") return Mode::macro;
    if (s == "compare") return Mode::compare;
    if (s == "eoc") return Mode::eoc;
    if (s == "bound") return Mode::bound;
    throw config_error("unknown mode '" + s +
                       "' (expected particle, macro, compare, eoc or bound)");
}

InitialDensity preset_initial(const std::string& name) {
    const double r = barenblatt_support_radius(2.0);
    InitialDensity d;
    if (name == "initial1") {
        d.components = {{2.0, -2.0 * r, 1.0, 0.25},
                        {2.0, 0.0, 1.0, 0.5},
                        {2.0, 2.0 * r, 1.0, 0.25}};
    } else if (name == "initial2") {
        d.components = {{2.0, -1.5 * r, 2.0, 0.25},
                        {2.0, 0.0, 1.0, 0.5},
                        {2.0, 1.5 * r, 2.0, 0.25}};
    } else {
        throw config_error("unknown initial preset '" + name +
                           "' (expected initial1 or initial2)");
    }
    return d;
}

double Scenario::derived_a() const { return 2.0 * b * initial.sup_norm() * eta; }

Grid Scenario::grid() const {
    const double span = x_max - x_min;
    if (!(span > 0.0)) throw config_error("scenario: x_max must exceed x_min");
    if (!(dx > 0.0)) throw config_error("scenario: dx must be > 0");
    const double cells_d = span / dx;
    const auto cells = static_cast<std::size_t>(std::llround(cells_d));
    if (cells < 3 || std::abs(cells_d - static_cast<double>(cells)) > 1e-9 * cells_d)
        throw config_error("scenario: (x_max - x_min) / dx must be an integer >= 3");
    return Grid{x_min, dx, cells};
}

void Scenario::validate() const {
    if (!(eta >= 0.0)) throw config_error("scenario: eta must be >= 0");
    if (!(b >= 0.0)) throw config_error("scenario: b must be >= 0");
    if (!(epsilon > 0.0)) throw config_error("scenario: epsilon must be > 0");
    if (dim < 1) throw config_error("scenario: dim must be >= 1");
    if (!(horizon > 0.0)) throw config_error("scenario: horizon must be > 0");
    if (!(safety > 0.0 && safety <= 1.0))
        throw config_error("scenario: safety must lie in (0, 1]");
    if (particles < 1) throw config_error("scenario: particles must be >= 1");
    if (replicas < 1) throw config_error("scenario: replicas must be >= 1");
    if (!(dt > 0.0)) throw config_error("scenario: dt must be > 0");
    if (!(threshold > 0.0)) throw config_error("scenario: threshold must be > 0");
    if (!(time >= 0.0)) throw config_error("scenario: time must be >= 0");
    if (workers < 1) throw config_error("scenario: workers must be >= 1");
    initial.validate();

    if (mode != Mode::bound) {
        (void)grid();
        const double slack = 1.0 + 1e-12;
        for (std::size_t k = 0; k < output_times.size(); ++k) {
            if (!(output_times[k] >= 0.0 && output_times[k] <= horizon * slack))
                throw config_error("scenario: output time outside [0, horizon]");
            if (k > 0 && !(output_times[k] > output_times[k - 1]))
                throw config_error("scenario: output times must be strictly increasing");
        }
    }
    if (mode == Mode::eoc) {
        if (levels.empty()) throw config_error("scenario: eoc needs at least one level");
        for (std::size_t k = 0; k < levels.size(); ++k) {
            if (levels[k] < 0 || levels[k] > 30)
                throw config_error("scenario: levels must lie in [0, 30]");
            if (k > 0 && levels[k] <= levels[k - 1])
                throw config_error("scenario: levels must be strictly increasing");
        }
        if (reference_level <= levels.back() || reference_level > 30)
            throw config_error("scenario: reference_level must exceed the finest level");
        const double span = x_max - x_min;
        for (int l : levels) {
            const double cells = span * std::ldexp(1.0, l);
            if (std::abs(cells - std::round(cells)) > 1e-9 * cells)
                throw config_error("scenario: domain does not align with level " +
                                   std::to_string(l));
        }
    }
    if (mode == Mode::compare) {
        if (particle_counts.empty())
            throw config_error("scenario: compare needs particle_counts");
        for (std::size_t k = 0; k < particle_counts.size(); ++k) {
            if (particle_counts[k] < 1)
                throw config_error("scenario: particle counts must be >= 1");
            if (k > 0 && particle_counts[k] <= particle_counts[k - 1])
                throw config_error("scenario: particle counts must be strictly increasing");
        }
    }
}

// ---------------------------------------------------------------------------
// config file parsing

namespace {

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(line, "expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& v, int line) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') fail(line, "expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& v, int line) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || (!v.empty() && v[0] == '-'))
        fail(line, "expected an unsigned integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

} // namespace

Scenario parse_scenario_text(std::string_view text, const std::string& name) {
    Scenario s;
    s.name = name;
    s.output_times.clear();

    bool have_preset = false;
    bool in_component = false;
    std::vector<bool> comp_has_alpha;
    std::vector<std::string> seen; // global keys already set

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        std::string l = raw;
        if (const auto hash = l.find('#'); hash != std::string::npos) l.erase(hash);
        l = trim(l);
        if (l.empty()) continue;

        if (l == "[component]") {
            if (have_preset)
                fail(line, "cannot mix 'initial = <preset>' with [component] blocks");
            if (!in_component) s.initial.components.clear();
            in_component = true;
            s.initial.components.push_back(BarenblattComponent{});
            comp_has_alpha.push_back(false);
            continue;
        }
        if (l.front() == '[') fail(line, "unknown section '" + l + "'");

        const auto eq = l.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(l.substr(0, eq));
        const std::string value = trim(l.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");

        if (in_component) {
            auto& c = s.initial.components.back();
            if (key == "T") c.T = to_double(value, line);
            else if (key == "x0") c.x0 = to_double(value, line);
            else if (key == "beta") c.beta = to_double(value, line);
            else if (key == "alpha") { c.alpha = to_double(value, line); comp_has_alpha.back() = true; }
            else fail(line, "unknown component key '" + key + "' (T, x0, beta, alpha)");
            continue;
        }

        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            fail(line, "duplicate key '" + key + "'");
        seen.push_back(key);

        if (key == "mode") {
            try { s.mode = mode_from_string(value); }
            catch (const config_error& e) { fail(line, e.what()); }
        }
        else if (key == "name") s.name = value;
        else if (key == "initial") {
            try { s.initial = preset_initial(value); }
            catch (const config_error& e) { fail(line, e.what()); }
            s.initial_preset = value;
            have_preset = true;
        }
        else if (key == "eta") s.eta = to_double(value, line);
        else if (key == "b") s.b = to_double(value, line);
        else if (key == "epsilon") s.epsilon = to_double(value, line);
        else if (key == "dim") s.dim = static_cast<int>(to_int(value, line));
        else if (key == "horizon") s.horizon = to_double(value, line);
        else if (key == "x_min") s.x_min = to_double(value, line);
        else if (key == "x_max") s.x_max = to_double(value, line);
        else if (key == "dx") s.dx = to_double(value, line);
        else if (key == "safety") s.safety = to_double(value, line);
        else if (key == "particles") s.particles = static_cast<std::size_t>(to_u64(value, line));
        else if (key == "replicas") s.replicas = static_cast<std::size_t>(to_u64(value, line));
        else if (key == "dt") s.dt = to_double(value, line);
        else if (key == "output_times") {
            s.output_times.clear();
            for (const auto& p : split_list(value)) s.output_times.push_back(to_double(p, line));
        }
        else if (key == "levels") {
            s.levels.clear();
            for (const auto& p : split_list(value)) s.levels.push_back(static_cast<int>(to_int(p, line)));
        }
        else if (key == "reference_level") s.reference_level = static_cast<int>(to_int(value, line));
        else if (key == "particle_counts") {
            s.particle_counts.clear();
            for (const auto& p : split_list(value))
                s.particle_counts.push_back(static_cast<std::size_t>(to_u64(p, line)));
        }
        else if (key == "time") s.time = to_double(value, line);
        else if (key == "threshold") s.threshold = to_double(value, line);
        else if (key == "reference_count") s.reference_count = static_cast<std::size_t>(to_u64(value, line));
        else if (key == "seed") s.seed = to_u64(value, line);
        else if (key == "workers") s.workers = static_cast<unsigned>(to_u64(value, line));
        else if (key == "export_trajectory") s.export_trajectory = to_bool(value, line);
        else if (key == "output_dir") s.output_dir = value;
        else fail(line, "unknown key '" + key + "'");
    }

    if (!have_preset && s.initial.components.empty())
        throw config_error("config: no initial data (set 'initial = initial1|initial2' "
                           "or add [component] blocks)");
    for (std::size_t i = 0; i < comp_has_alpha.size(); ++i)
        if (!comp_has_alpha[i])
            throw config_error("config: component " + std::to_string(i) +
                               " is missing its mixture weight alpha");

    if (s.output_times.empty() && s.mode != Mode::bound) {
        const int k = s.mode == Mode::particle ? 4 : 8;
        for (int j = 0; j <= k; ++j)
            s.output_times.push_back(s.horizon * static_cast<double>(j) /
                                     static_cast<double>(k));
    }
    return s;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string stem = std::filesystem::path(path).stem().string();
    return parse_scenario_text(buf.str(), stem.empty() ? "scenario" : stem);
}

// ---------------------------------------------------------------------------
// running

namespace {

namespace fs = std::filesystem;

using Derived = std::vector<std::pair<std::string, std::string>>;

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

template <class T>
std::string join_ints(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

void write_manifest(const std::string& path, const Scenario& s, const Derived& derived) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# diffagg manifest v1\n";
    out << "# resolved scenario; rerunning this file reproduces the outputs\n";
    if (!s.initial_preset.empty()) out << "# preset: " << s.initial_preset << "\n";
    out << "mode = " << to_string(s.mode) << "\n";
    out << "name = " << s.name << "\n";
    out << "eta = " << format_double(s.eta) << "\n";
    out << "b = " << format_double(s.b) << "\n";
    out << "epsilon = " << format_double(s.epsilon) << "\n";
    out << "dim = " << s.dim << "\n";
    out << "horizon = " << format_double(s.horizon) << "\n";
    out << "x_min = " << format_double(s.x_min) << "\n";
    out << "x_max = " << format_double(s.x_max) << "\n";
    out << "dx = " << format_double(s.dx) << "\n";
    out << "safety = " << format_double(s.safety) << "\n";
    out << "particles = " << s.particles << "\n";
    out << "replicas = " << s.replicas << "\n";
    out << "dt = " << format_double(s.dt) << "\n";
    out << "output_times = " << join_doubles(s.output_times) << "\n";
    out << "levels = " << join_ints(s.levels) << "\n";
    out << "reference_level = " << s.reference_level << "\n";
    out << "particle_counts = " << join_ints(s.particle_counts) << "\n";
    out << "time = " << format_double(s.time) << "\n";
    out << "threshold = " << format_double(s.threshold) << "\n";
    out << "reference_count = " << s.reference_count << "\n";
    out << "seed = " << s.seed << "\n";
    out << "export_trajectory = " << (s.export_trajectory ? "true" : "false") << "\n";
    for (const auto& c : s.initial.components) {
        out << "[component]\n";
        out << "T = " << format_double(c.T) << "\n";
        out << "x0 = " << format_double(c.x0) << "\n";
        out << "beta = " << format_double(c.beta) << "\n";
        out << "alpha = " << format_double(c.alpha) << "\n";
    }
    for (const auto& [k, v] : derived) out << "# derived: " << k << " = " << v << "\n";
}

GridDensity initial_on_grid(const Scenario& s) {
    const Grid g = s.grid();
    GridDensity u{g, std::vector<double>(g.n_cells), 0.0};
    for (std::size_t i = 0; i < g.n_cells; ++i) u.values[i] = s.initial.pdf(g.center(i));
    return u;
}

void note_padding(const Scenario& s, double a, Derived& derived) {
    const auto [lo, hi] = s.initial.support();
    const double pad = 6.0 * std::sqrt(2.0 * a * s.horizon);
    const bool ok = s.x_min <= lo - pad && s.x_max >= hi + pad;
    derived.emplace_back("padding_ok", ok ? "1" : "0");
    if (!ok)
        std::cerr << "warning: domain [" << s.x_min << ", " << s.x_max
                  << "] leaves less than 6 sqrt(2 a T) of room around the initial "
                     "support; boundary leakage may be visible\n";
}

MacroConfig macro_config(const Scenario& s, double a) {
    return MacroConfig{a, s.b, s.horizon, s.safety, s.output_times};
}

ParticleConfig particle_config(const Scenario& s, double a, std::size_t count) {
    ParticleConfig pc;
    pc.count = count;
    pc.a = a;
    pc.kernel = KernelSpec{s.b, s.epsilon, s.dim};
    pc.horizon = s.horizon;
    pc.dt = s.dt;
    pc.seed = s.seed;
    pc.replicas = s.replicas;
    pc.output_times = s.output_times;
    return pc;
}

std::vector<GridDensity> estimate_frames(const std::vector<HistogramResult>& est,
                                         std::size_t& dropped) {
    std::vector<GridDensity> frames;
    frames.reserve(est.size());
    dropped = 0;
    for (const auto& h : est) {
        dropped += h.dropped;
        frames.push_back(h.density);
    }
    return frames;
}

void warn_dropped(std::size_t dropped) {
    if (dropped > 0)
        std::cerr << "warning: " << dropped
                  << " samples fell outside the estimation grid and were excluded\n";
}

RunOutcome run_macro_mode(const Scenario& s, const std::string& dir, Derived& derived) {
    const double a = s.derived_a();
    note_padding(s, a, derived);
    const MacroRun run = solve(initial_on_grid(s), macro_config(s, a));

    RunOutcome out;
    write_density_csv(dir + "/density.csv", run.snapshots);
    out.files.push_back(dir + "/density.csv");
    write_running_sup_csv(dir + "/running_sup.csv", run.sup_times, run.running_sup);
    out.files.push_back(dir + "/running_sup.csv");

    derived.emplace_back("mass_initial", format_double(run.mass_initial));
    derived.emplace_back("mass_final", format_double(run.mass_final));
    derived.emplace_back("leaked_mass", format_double(run.mass_initial - run.mass_final));
    derived.emplace_back("total_steps", std::to_string(run.total_steps));
    derived.emplace_back("blew_up", run.blew_up ? "1" : "0");
    if (run.blew_up) {
        derived.emplace_back("blow_up_time", format_double(run.blow_up_time));
        out.exit_code = 3;
        out.blew_up = true;
        out.blow_up_time = run.blow_up_time;
        std::cerr << "aggregation blow-up detected at t = " << run.blow_up_time
                  << "; partial outputs written\n";
    }
    return out;
}

RunOutcome run_particle_mode(const Scenario& s, const std::string& dir, Derived& derived) {
    const double a = s.derived_a();
    note_padding(s, a, derived);
    const ParticleTrajectory traj =
        simulate(particle_config(s, a, s.particles), s.initial, s.workers);
    const auto est = estimate_series(traj, s.grid());
    std::size_t dropped = 0;
    const auto frames = estimate_frames(est, dropped);
    warn_dropped(dropped);

    RunOutcome out;
    write_density_csv(dir + "/density.csv", frames);
    out.files.push_back(dir + "/density.csv");
    const auto sup = running_supremum(frames);
    write_running_sup_csv(dir + "/running_sup.csv", traj.times, sup);
    out.files.push_back(dir + "/running_sup.csv");
    if (s.export_trajectory) {
        write_trajectory_csv(dir + "/trajectory.csv", traj);
        out.files.push_back(dir + "/trajectory.csv");
    }
    derived.emplace_back("dropped_samples", std::to_string(dropped));
    derived.emplace_back("terminal_running_sup", format_double(sup.back()));
    return out;
}

RunOutcome run_compare_mode(const Scenario& s, const std::string& dir, Derived& derived) {
    const double a = s.derived_a();
    note_padding(s, a, derived);

    const MacroRun macro = solve(initial_on_grid(s), macro_config(s, a));
    RunOutcome out;
    write_density_csv(dir + "/density_macro.csv", macro.snapshots);
    out.files.push_back(dir + "/density_macro.csv");
    if (macro.blew_up) {
        derived.emplace_back("blew_up", "1");
        derived.emplace_back("blow_up_time", format_double(macro.blow_up_time));
        out.exit_code = 3;
        out.blew_up = true;
        out.blow_up_time = macro.blow_up_time;
        std::cerr << "macro reference blew up at t = " << macro.blow_up_time
                  << "; comparison aborted\n";
        return out;
    }

    const double inf = std::numeric_limits<double>::infinity();
    ErrorReport report;
    std::size_t dropped_total = 0;
    for (const std::size_t n : s.particle_counts) {
        const ParticleTrajectory traj =
            simulate(particle_config(s, a, n), s.initial, s.workers);
        const auto est = estimate_series(traj, s.grid());
        std::size_t dropped = 0;
        const auto frames = estimate_frames(est, dropped);
        dropped_total += dropped;
        const std::string path = dir + "/density_particle_N" + std::to_string(n) + ".csv";
        write_density_csv(path, frames);
        out.files.push_back(path);

        report.levels.push_back(static_cast<double>(n));
        report.err_inf.push_back(error_norm(frames, macro.snapshots, inf));
        report.err_l1.push_back(error_norm(frames, macro.snapshots, 1.0));
        report.err_l2.push_back(error_norm(frames, macro.snapshots, 2.0));
    }
    warn_dropped(dropped_total);
    if (report.levels.size() >= 2) {
        report.eoc_inf = eoc(report.err_inf);
        report.eoc_l1 = eoc(report.err_l1);
        report.eoc_l2 = eoc(report.err_l2);
    }
    write_errors_csv(dir + "/errors.csv", report);
    out.files.push_back(dir + "/errors.csv");
    derived.emplace_back("dropped_samples", std::to_string(dropped_total));

    std::cout << "N        err_inf      eoc     err_l1       eoc     err_l2       eoc\n";
    for (std::size_t r = 0; r < report.levels.size(); ++r) {
        char buf[160];
        auto cell = [&](const std::vector<double>& v) {
            return r == 0 ? std::string("   -  ") : [&] {
                char b[32];
                std::snprintf(b, sizeof b, "%6.3f", v[r - 1]);
                return std::string(b);
            }();
        };
        std::snprintf(buf, sizeof buf, "%-8.0f %.5e %s  %.5e %s  %.5e %s\n",
                      report.levels[r], report.err_inf[r], cell(report.eoc_inf).c_str(),
                      report.err_l1[r], cell(report.eoc_l1).c_str(), report.err_l2[r],
                      cell(report.eoc_l2).c_str());
        std::cout << buf;
    }
    return out;
}

RunOutcome run_eoc_mode(const Scenario& s, const std::string& dir, Derived& derived) {
    const double a = s.derived_a();
    note_padding(s, a, derived);

    RunOutcome out;
    Scenario ref = s;
    ref.dx = std::ldexp(1.0, -s.reference_level);
    const MacroRun ref_run = solve(initial_on_grid(ref), macro_config(ref, a));
    write_density_csv(dir + "/density_reference.csv", ref_run.snapshots);
    out.files.push_back(dir + "/density_reference.csv");
    if (ref_run.blew_up) {
        derived.emplace_back("blew_up", "1");
        out.exit_code = 3;
        out.blew_up = true;
        out.blow_up_time = ref_run.blow_up_time;
        std::cerr << "reference run blew up at t = " << ref_run.blow_up_time
                  << "; refinement study aborted\n";
        return out;
    }

    const double inf = std::numeric_limits<double>::infinity();
    ErrorReport report;
    for (const int l : s.levels) {
        Scenario lvl = s;
        lvl.dx = std::ldexp(1.0, -l);
        const Grid g = lvl.grid();
        const MacroRun run = solve(initial_on_grid(lvl), macro_config(lvl, a));
        if (run.blew_up) {
            derived.emplace_back("blew_up", "1");
            out.exit_code = 3;
            out.blew_up = true;
            out.blow_up_time = run.blow_up_time;
            std::cerr << "level " << l << " run blew up; refinement study aborted\n";
            return out;
        }
        std::vector<GridDensity> ref_restricted;
        ref_restricted.reserve(ref_run.snapshots.size());
        for (const auto& snap : ref_run.snapshots)
            ref_restricted.push_back(restrict_to(snap, g));
        report.levels.push_back(lvl.dx);
        report.err_inf.push_back(error_norm(run.snapshots, ref_restricted, inf));
        report.err_l1.push_back(error_norm(run.snapshots, ref_restricted, 1.0));
        report.err_l2.push_back(error_norm(run.snapshots, ref_restricted, 2.0));
    }
    if (report.levels.size() >= 2) {
        report.eoc_inf = eoc(report.err_inf);
        report.eoc_l1 = eoc(report.err_l1);
        report.eoc_l2 = eoc(report.err_l2);
    }
    write_errors_csv(dir + "/errors.csv", report);
    out.files.push_back(dir + "/errors.csv");

    std::cout << "dx           err_inf      eoc     err_l1       eoc     err_l2       eoc\n";
    for (std::size_t r = 0; r < report.levels.size(); ++r) {
        char buf[160];
        auto cell = [&](const std::vector<double>& v) {
            return r == 0 ? std::string("   -  ") : [&] {
                char b[32];
                std::snprintf(b, sizeof b, "%6.3f", v[r - 1]);
                return std::string(b);
            }();
        };
        std::snprintf(buf, sizeof buf, "%-12.6g %.5e %s  %.5e %s  %.5e %s\n",
                      report.levels[r], report.err_inf[r], cell(report.eoc_inf).c_str(),
                      report.err_l1[r], cell(report.eoc_l1).c_str(), report.err_l2[r],
                      cell(report.eoc_l2).c_str());
        std::cout << buf;
    }
    return out;
}

RunOutcome run_bound_mode(const Scenario& s, const std::string&, Derived& derived) {
    const KernelSpec kernel{s.b, s.epsilon, s.dim};
    const std::size_t n_min = min_particle_count(s.epsilon, s.time, kernel, s.threshold);
    const double at_min = mean_field_bound(s.epsilon, s.time, kernel, n_min);
    derived.emplace_back("min_particle_count", std::to_string(n_min));
    derived.emplace_back("bound_at_min", format_double(at_min));
    derived.emplace_back("bound_at_one", format_double(
        mean_field_bound(s.epsilon, s.time, kernel, 1)));
    if (s.reference_count > 0) {
        derived.emplace_back("reference_count", std::to_string(s.reference_count));
        derived.emplace_back("bound_at_reference", format_double(
            mean_field_bound(s.epsilon, s.time, kernel, s.reference_count)));
    }
    std::cout << "minimal particle count for threshold " << format_double(s.threshold)
              << ": " << n_min;
    if (s.reference_count > 0) std::cout << " (recorded reference: " << s.reference_count << ")";
    std::cout << "\n";
    return RunOutcome{};
}

} // namespace

RunOutcome run_scenario(const Scenario& input) {
    Scenario s = input;
    if (s.output_times.empty() && s.mode != Mode::bound) {
        const int k = s.mode == Mode::particle ? 4 : 8;
        for (int j = 0; j <= k; ++j)
            s.output_times.push_back(s.horizon * static_cast<double>(j) /
                                     static_cast<double>(k));
    }
    s.validate();

    const std::string dir = s.output_dir.empty() ? "." : s.output_dir;
    fs::create_directories(dir);

    Derived derived;
    if (s.mode != Mode::bound) {
        derived.emplace_back("sup_norm", format_double(s.initial.sup_norm()));
        derived.emplace_back("a", format_double(s.derived_a()));
    }

    RunOutcome out;
    switch (s.mode) {
        case Mode::macro: out = run_macro_mode(s, dir, derived); break;
        case Mode::particle: out = run_particle_mode(s, dir, derived); break;
        case Mode::compare: out = run_compare_mode(s, dir, derived); break;
        case Mode::eoc: out = run_eoc_mode(s, dir, derived); break;
        case Mode::bound: out = run_bound_mode(s, dir, derived); break;
    }

    write_manifest(dir + "/manifest.cfg", s, derived);
    out.files.push_back(dir + "/manifest.cfg");
    return out;
}

} // namespace diffagg
