#include "isolab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace isolab {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string profile_csv(const ProfileTable& table) {
  std::string out = "V,I,Iprime,Isecond,pole,r\n";
  for (const ProfileEntry& e : table.entries) {
    out += fmt_full(e.volume) + "," + fmt_full(e.area) + "," +
           fmt_full(e.area_prime) + "," + fmt_full(e.area_second) + "," +
           realizer_name(e.pole) + "," + fmt_full(e.radius) + "\n";
  }
  return out;
}

std::string hawking_csv(const HawkingTable& table) {
  std::string out = "V,mH,dmH\n";
  for (const HawkingEntry& e : table.entries) {
    out += fmt_full(e.volume) + "," + fmt_full(e.mass) + "," +
           fmt_full(e.mass_prime) + "\n";
  }
  return out;
}

std::string ledger_csv(const InequalityLedger& ledger) {
  std::string out = "r,basicLHS,refinedBound,cySlack\n";
  for (const InequalityRow& row : ledger.rows) {
    out += fmt_full(row.r) + "," + fmt_full(row.basic_lhs) + "," +
           fmt_full(row.refined_bound) + "," + fmt_full(row.cy_slack) + "\n";
  }
  return out;
}

std::string curve_csv(const CMCSolution& solution) {
  std::string out = "s,r,theta,cumArea,cumVol\n";
  for (const CurveSample& c : solution.curve) {
    out += fmt_full(c.s) + "," + fmt_full(c.r) + "," + fmt_full(c.theta) +
           "," + fmt_full(c.cum_area) + "," + fmt_full(c.cum_volume) + "\n";
  }
  return out;
}

std::string curvature_csv(const WarpedMetric& metric, int grid_size) {
  std::string out = "r,scalar,ricRadial,ricTangential\n";
  for (int i = 0; i <= grid_size; ++i) {
    const double r = metric.length() * double(i) / double(grid_size);
    const CurvatureData c = metric.curvature(r);
    out += fmt_full(c.r) + "," + fmt_full(c.scalar) + "," +
           fmt_full(c.ric_radial) + "," + fmt_full(c.ric_tangential) + "\n";
  }
  return out;
}

std::string fit_samples_csv(const std::vector<FitSample>& samples) {
  std::string out = "r,V,y,weight\n";
  for (const FitSample& s : samples) {
    out += fmt_full(s.r) + "," + fmt_full(s.volume) + "," + fmt_full(s.y) +
           "," + fmt_full(s.weight) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out)
    throw Error(errc::numerical_failure, "cannot open output file " + path);
  out << content;
}

}  // namespace isolab
