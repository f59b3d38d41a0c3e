#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bifluid/coupler.hpp"

namespace bifluid {

inline constexpr const char* trace_version = "# bifluid trace v1";
inline constexpr const char* summary_format = "bifluid-summary/1";

/// %.17g
std::string format_double(double v);

void write_trace(std::ostream& out, const Trajectory& traj);
void write_snapshots(std::ostream& out, const std::vector<NodalSnapshot>& snaps);
std::vector<NodalSnapshot> read_snapshots(std::istream& in);

/// Extremes of the coarse-graining proxies over all snapshots, for every k in {2, 4, 8}
/// (plus `extra_k` when positive) dividing the cell count.
nlohmann::json defect_summary(const std::vector<NodalSnapshot>& snaps, const EosParams& eos, int extra_k = 0);

nlohmann::json summary_json(const Trajectory& traj);

/// trace.csv, summary.json, snapshots.csv and config.txt in `dir`.
void write_run_outputs(const Trajectory& traj, const std::filesystem::path& dir);

/// Relative energy of the coarse run against the restricted fine run at common snapshot
/// times, the Gronwall fit and the fine-run defect proxies.
nlohmann::json compare_runs(const std::filesystem::path& coarse_dir, const std::filesystem::path& fine_dir);

} // namespace bifluid
