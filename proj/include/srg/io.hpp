#pragma once

#include <string>

#include "srg/flow.hpp"

namespace srg {

// Versioned JSON checkpoint: constants, grid spec, row-major kernel arrays.
void save_checkpoint(const KernelFamily& f, const std::string& path);
KernelFamily load_checkpoint(const std::string& path);

std::string trajectory_csv_header();
std::string trajectory_csv_row(const TrajectoryRow& r);
void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, const std::string& path);

} // namespace srg
