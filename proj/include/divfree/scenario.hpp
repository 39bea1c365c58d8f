#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "divfree/pipeline.hpp"

namespace divfree {

/// A named driver with a resolved JSON config. Identical (config, seed) pairs
/// produce byte-identical report files.
struct Scenario {
    std::string name;
    nlohmann::json config;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

/// Runs the scenario, writing report.json (and convergence.csv where the
/// scenario produces a table). Returns 0 on pass, 1 when an acceptance
/// assertion inside the scenario fails. Config problems throw
/// std::invalid_argument (the CLI maps those to exit 2).
int run_scenario(const Scenario& sc);

/// Dry-run compatibility checks (eps vs 8h, nu_max vs 4h, stencil margins).
/// Problems are report entries, never exceptions.
std::vector<std::string> validate_scenario(const Scenario& sc);

const std::vector<std::string>& scenario_names();

// shared fixture builders (also used by the acceptance suite)
struct DiskFixture {
    Grid grid;
    CompactSet K;
    ScalarField psi;       // plateau potential, locally constant near each disk
    VectorField2 u;        // perp_gradient(psi)
    std::vector<double> constants;
};

/// Disks with smooth plateau potentials: psi = sum_i c_i * plateau(dist to disk i),
/// identically c_i near disk i, supported inside the grid.
DiskFixture disk_fixture(const Grid& grid, const std::vector<Disk>& disks,
                         const std::vector<double>& constants, double inner_pad,
                         double outer_pad);

/// Seeded random disk set: count in [1, max_disks], radii and centers chosen so
/// that the plateau pads fit pairwise and inside the grid.
std::vector<Disk> random_disks(std::uint64_t seed, int max_disks, double rmin, double rmax,
                               double center_box, double min_gap);

Grid grid_from_config(const nlohmann::json& cfg);
std::vector<Shape> shapes_from_config(const nlohmann::json& cfg);
Schedule schedule_from_config(const nlohmann::json& cfg, const char* key, Schedule fallback);

}  // namespace divfree
