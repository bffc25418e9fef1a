#include "vlcsec/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vlcsec/errors.hpp"

namespace vlcsec::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

const char* strategy_token(topology::Strategy s) {
  switch (s) {
    case topology::Strategy::broadcasting:
      return "broadcasting";
    case topology::Strategy::simple_linking:
      return "simple_linking";
    case topology::Strategy::smart_linking:
      return "smart_linking";
  }
  return "?";
}

const char* allocation_token(sim::AllocationScheme s) {
  return s == sim::AllocationScheme::fixed ? "fixed" : "optimized";
}

// Common row prefix: strategy, allocation, power, eavesdropper node. The
// node columns stay empty unless the eavesdropper sat at one position.
std::string row_prefix(const sim::CampaignConfig& cfg, const sim::CampaignStats& row) {
  std::ostringstream out;
  out << strategy_token(cfg.strategy) << ',' << allocation_token(cfg.scheme) << ','
      << format_double(row.power_dbm) << ',';
  if (row.eve_fixed) {
    out << format_double(row.eve_x) << ',' << format_double(row.eve_y);
  } else {
    out << ',';
  }
  return out.str();
}

}  // namespace

std::string summary_csv(const sim::CampaignConfig& cfg,
                        const std::vector<sim::CampaignStats>& rows) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) {
    out << row_prefix(cfg, row) << ',' << format_double(row.mean_sum_rate) << ','
        << format_double(row.se_sum_rate) << ',' << format_double(row.mean_sum_secrecy)
        << ',' << format_double(row.se_sum_secrecy) << ',' << row.trials << ','
        << row.seed << '\n';
  }
  return out.str();
}

std::string per_user_csv(const sim::CampaignConfig& cfg,
                         const std::vector<sim::CampaignStats>& rows) {
  std::ostringstream out;
  out << kPerUserHeader << '\n';
  for (const auto& row : rows) {
    const std::string prefix = row_prefix(cfg, row);
    for (std::size_t k = 0; k < row.user_mean_rate.size(); ++k) {
      out << prefix << ',' << k << ',' << format_double(row.user_mean_rate[k]) << ','
          << format_double(row.user_mean_wiretap[k]) << ','
          << format_double(row.user_mean_secrecy[k]) << ',' << row.trials << ','
          << row.seed << '\n';
    }
  }
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

RunOutput write_run(const cfg::Resolved& resolved,
                    const std::vector<sim::CampaignStats>& rows,
                    const std::string& out_dir, const std::string& started_utc,
                    const std::string& finished_utc) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);

  RunOutput paths;
  paths.summary_path = (fs::path(out_dir) / "summary.csv").string();
  paths.per_user_path = (fs::path(out_dir) / "per_user.csv").string();
  paths.manifest_path = (fs::path(out_dir) / "run_manifest.json").string();

  write_file(paths.summary_path, summary_csv(resolved.campaign, rows));
  write_file(paths.per_user_path, per_user_csv(resolved.campaign, rows));

  nlohmann::json manifest;
  manifest["tool"] = cfg::kToolName;
  manifest["version"] = cfg::kToolVersion;
  manifest["seed"] = resolved.campaign.master_seed;
  manifest["started_utc"] = started_utc;
  manifest["finished_utc"] = finished_utc;
  manifest["outputs"] = {paths.summary_path, paths.per_user_path};
  manifest["config"] = nlohmann::json::parse(cfg::config_echo_json(resolved));
  write_file(paths.manifest_path, manifest.dump(2) + "\n");
  return paths;
}

}  // namespace vlcsec::io
