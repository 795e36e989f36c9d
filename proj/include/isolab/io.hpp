#pragma once

#include <string>
#include <vector>

#include "isolab/cmc.hpp"
#include "isolab/expansion.hpp"
#include "isolab/geodesic_balls.hpp"
#include "isolab/hawking.hpp"
#include "isolab/metric.hpp"

namespace isolab {

// %.17g: full round-trip precision, locale independent, byte-deterministic.
std::string fmt_full(double v);

std::string profile_csv(const ProfileTable& table);
std::string hawking_csv(const HawkingTable& table);
std::string ledger_csv(const InequalityLedger& ledger);
std::string curve_csv(const CMCSolution& solution);
std::string curvature_csv(const WarpedMetric& metric, int grid_size);
std::string fit_samples_csv(const std::vector<FitSample>& samples);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace isolab
