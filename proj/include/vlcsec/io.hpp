#pragma once

#include <string>
#include <vector>

#include "vlcsec/config.hpp"
#include "vlcsec/sim.hpp"

namespace vlcsec::io {

/// Stable CSV headers; column order is part of the output contract.
inline constexpr const char* kSummaryHeader =
    "strategy,allocation,P_s_dBm,x_E,y_E,mean_RD,se_RD,mean_RS,se_RS,trials,seed";
inline constexpr const char* kPerUserHeader =
    "strategy,allocation,P_s_dBm,x_E,y_E,user,mean_R,mean_RE,mean_secrecy,trials,seed";

/// Shortest text that round-trips the double (17 significant digits).
std::string format_double(double v);

std::string summary_csv(const sim::CampaignConfig& cfg,
                        const std::vector<sim::CampaignStats>& rows);
std::string per_user_csv(const sim::CampaignConfig& cfg,
                         const std::vector<sim::CampaignStats>& rows);

struct RunOutput {
  std::string summary_path;
  std::string per_user_path;
  std::string manifest_path;
};

/// Writes summary.csv, per_user.csv, and run_manifest.json under out_dir
/// (created if missing). The manifest embeds the resolved configuration, so
/// feeding it back as --config reproduces the CSV bytes.
RunOutput write_run(const cfg::Resolved& resolved,
                    const std::vector<sim::CampaignStats>& rows,
                    const std::string& out_dir, const std::string& started_utc,
                    const std::string& finished_utc);

std::string utc_timestamp();

}  // namespace vlcsec::io
