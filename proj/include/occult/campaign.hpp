#pragma once
// occult/campaign.hpp - Monte Carlo detection campaign
//
// A trial renders one catalog realization plus one straight transit, runs
// the detection pipeline, and scores the fitted line against the true
// object track. Campaigns run many trials with per-trial-index seed
// derivation, so results are independent of worker count and execution
// order. A bisection utility sizes the catalog for a target fraction of
// transit positions that actually cover a star.

#include "occult/detect.hpp"
#include "occult/sensor.hpp"
#include "occult/starfield.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace occult {

// -----------------------------------------------------------------------
// Configuration
// -----------------------------------------------------------------------
struct TrialConfig {
    int width = 2000;
    int height = 1000;
    int star_count = 31250;
    double magnitude_min = 1.82;
    double magnitude_max = 2.40;
    double noise_sigma = 0.5;
    int frame_offset = 1;     ///< k
    int buffer_depth = 30;    ///< j
    int total_frames = 30;
    double occluder_radius = 3.0;
    RansacParams ransac{100, 3.0, 7, 2.6, 0};
    std::uint64_t master_seed = 2026;
};

struct TrialRecord {
    int trial_index = 0;
    bool detected = false;
    double loss = 0.0;
    int inliers = 0;
    std::optional<double> trajectory_error; ///< px, present only when detected
    double occlusion_coverage = 0.0;        ///< fraction of frames covering a star
    double per_frame_time = 0.0;            ///< seconds of pipeline work per frame
};

struct CampaignReport {
    TrialConfig config;
    std::vector<TrialRecord> trials;
    int n_trials = 0;
    int detections = 0;
    double detection_rate = 0.0;
    double mean_trajectory_error = 0.0; ///< over detected trials; 0 when none
    double std_trajectory_error = 0.0;  ///< population std over detected trials
    double mean_coverage = 0.0;
    double mean_frame_time = 0.0;       ///< seconds
};

// -----------------------------------------------------------------------
// Scoring
// -----------------------------------------------------------------------

/// RMS perpendicular distance from the true object position in each frame
/// to the fitted line.
double trajectory_error(const TrajectorySpec& trajectory,
                        const LineModel& model);

/// Fraction of frames in which the occluder disc covers at least one
/// catalog star.
double occlusion_coverage(const TrajectorySpec& trajectory,
                          const StarCatalog& catalog);

// -----------------------------------------------------------------------
// Execution
// -----------------------------------------------------------------------

/// Run one trial. All randomness derives from config.master_seed and
/// trial_index; the same pair always reproduces the same record.
TrialRecord run_trial(const TrialConfig& config, int trial_index);

/// The trajectory a given trial draws (for truth output and scoring).
TrajectorySpec trial_trajectory(const TrialConfig& config, int trial_index);

/// The catalog a campaign under this config renders against (shared across
/// trials; only noise and trajectory vary per trial).
StarCatalog campaign_catalog(const TrialConfig& config);

/// Run `trial_count` trials across `workers` threads. Records come back
/// ordered by trial index and are bitwise independent of worker count.
CampaignReport run_campaign(const TrialConfig& config, int trial_count,
                            int workers = 1);

/// Bisect star_count in [1, 10^6] until mean occlusion coverage over 50
/// geometry-only trials lands within 0.05 of `target_coverage`. Throws
/// CalibrationFailureError if the bracket cannot reach the target.
int calibrate_density(double target_coverage, const TrialConfig& config);

} // namespace occult
