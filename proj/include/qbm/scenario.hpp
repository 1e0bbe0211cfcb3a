#pragma once

#include <string>
#include <vector>

#include "qbm/config.hpp"
#include "qbm/table.hpp"

namespace qbm {

/// One table per requested product (verify excluded), one row per sweep value x grid point.
/// Sweep points run concurrently into indexed slots; threads = 0 picks the hardware count.
std::vector<ResultTable> run_scenario(const ScenarioConfig& cfg, unsigned threads = 0);

/// Plot layout used for a product table.
PlotSpec default_plot(const ResultTable& table);

}  // namespace qbm
