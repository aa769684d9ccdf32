#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <diffagg/grid.hpp>
#include <diffagg/sampling.hpp>

namespace diffagg {

// A fully resolved run description.  Parsed from a small key = value file
// (see docs/config.md); the manifest written next to the outputs is itself a
// parseable scenario with every default materialized.
enum class Mode { particle, macro, compare, eoc, bound };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s); // throws config_error

struct Scenario {
    Mode mode = Mode::macro;
    std::string name = "scenario";

    // physics; the diffusion coefficient is always derived: a = 2 b sup|u0| eta
    InitialDensity initial;
    std::string initial_preset;     // "initial1" / "initial2" / "" (custom components)
    double eta = 1.0;               // >= 0; > 1 diffusion-dominant, < 1 aggregation
    double b = 1.0;
    double epsilon = 1.5;           // particle kernel width
    int dim = 1;
    double horizon = 7.0;

    // grid (macro solve and histogram estimation)
    double x_min = -27.0;
    double x_max = 27.0;
    double dx = 0.015625;           // 2^-6
    double safety = 0.9;

    // particle system
    std::size_t particles = 100;    // N per replica
    std::size_t replicas = 1;       // M
    double dt = 0.01;

    std::vector<double> output_times; // empty in a file -> mode default

    // eoc mode: grid levels dx = 2^-level, compared against the reference level
    std::vector<int> levels = {1, 2, 3, 4, 5};
    int reference_level = 6;

    // compare mode: particle counts per column of the error table
    std::vector<std::size_t> particle_counts = {50, 100, 200, 400};

    // bound mode
    double time = 7.0;              // evaluation time of the estimate
    double threshold = 0.3;
    std::size_t reference_count = 0; // externally reported N recorded alongside, 0 = none

    // execution (not part of the manifest)
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool export_trajectory = false;
    std::string output_dir = "out";

    void validate() const;
    double derived_a() const;       // 2 b sup_norm(initial) eta
    Grid grid() const;
};

InitialDensity preset_initial(const std::string& name);

Scenario parse_scenario_text(std::string_view text, const std::string& name);
Scenario parse_scenario_file(const std::string& path);

struct RunOutcome {
    int exit_code = 0;              // 0 done, 3 aggregation blow-up (partial outputs)
    bool blew_up = false;
    double blow_up_time = 0.0;
    std::vector<std::string> files; // outputs written (paths)
};

// Execute the scenario and write CSV outputs plus manifest.cfg into
// s.output_dir (created if missing).  Throws config_error for invalid
// scenarios; other exceptions indicate runtime failures.
RunOutcome run_scenario(const Scenario& s);

} // namespace diffagg
