#pragma once
// occult/serialize.hpp - JSON / CSV formats for CLI and campaign output

#include "occult/campaign.hpp"
#include "occult/detect.hpp"
#include "occult/sensor.hpp"

#include <string>

namespace occult {

/// {"detected":..,"loss":..,"inliers":..,"anomalies":..,"line":{"px":..,
/// "py":..,"dx":..,"dy":..}}; "line" is null when no model survived.
std::string detection_to_json(const DetectionResult& result);

/// Ground truth for a generated sequence: trajectory endpoints, occluder
/// radius, frame count, seed.
std::string truth_to_json(const TrajectorySpec& trajectory,
                          std::uint64_t seed);

/// Header trial,detected,loss,inliers,traj_err,coverage,frame_time; one row
/// per trial, traj_err empty when absent.
std::string campaign_to_csv(const CampaignReport& report);

/// Campaign summary block: config echo plus aggregate statistics.
std::string campaign_summary_to_json(const CampaignReport& report);

} // namespace occult
