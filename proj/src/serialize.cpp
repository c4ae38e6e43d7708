// serialize.cpp - JSON and CSV renderings of pipeline results

#include "occult/serialize.hpp"

#include <json.hpp>

#include <cstdio>

namespace occult {

using ordered_json = nlohmann::ordered_json;

std::string detection_to_json(const DetectionResult& result) {
    ordered_json j;
    j["detected"] = result.detected;
    j["loss"] = result.loss;
    j["inliers"] = result.inlier_count;
    j["anomalies"] = result.anomaly_count;
    if (result.model) {
        j["line"] = ordered_json{{"px", result.model->point.x},
                                 {"py", result.model->point.y},
                                 {"dx", result.model->direction.x},
                                 {"dy", result.model->direction.y}};
    } else {
        j["line"] = nullptr;
    }
    return j.dump();
}

std::string truth_to_json(const TrajectorySpec& trajectory,
                          std::uint64_t seed) {
    ordered_json j;
    j["trajectory"] = ordered_json{
        {"start", ordered_json{{"x", trajectory.start.x},
                               {"y", trajectory.start.y}}},
        {"end", ordered_json{{"x", trajectory.end.x},
                             {"y", trajectory.end.y}}}};
    j["occluder_radius"] = trajectory.occluder_radius;
    j["total_frames"] = trajectory.total_frames;
    j["seed"] = seed;
    return j.dump();
}

std::string campaign_to_csv(const CampaignReport& report) {
    std::string out = "trial,detected,loss,inliers,traj_err,coverage,frame_time\n";
    char row[256];
    for (const TrialRecord& rec : report.trials) {
        char err[64] = "";
        if (rec.trajectory_error) {
            std::snprintf(err, sizeof(err), "%.9g", *rec.trajectory_error);
        }
        std::snprintf(row, sizeof(row), "%d,%d,%.9g,%d,%s,%.9g,%.9g\n",
                      rec.trial_index, rec.detected ? 1 : 0, rec.loss,
                      rec.inliers, err, rec.occlusion_coverage,
                      rec.per_frame_time);
        out += row;
    }
    return out;
}

std::string campaign_summary_to_json(const CampaignReport& report) {
    const TrialConfig& c = report.config;
    ordered_json j;
    j["config"] = ordered_json{
        {"width", c.width},
        {"height", c.height},
        {"stars", c.star_count},
        {"mag_min", c.magnitude_min},
        {"mag_max", c.magnitude_max},
        {"sigma", c.noise_sigma},
        {"k", c.frame_offset},
        {"j", c.buffer_depth},
        {"frames", c.total_frames},
        {"radius", c.occluder_radius},
        {"ransac", ordered_json{{"iterations", c.ransac.max_iterations},
                                {"inlier_tolerance", c.ransac.inlier_tolerance},
                                {"min_inliers", c.ransac.min_inliers},
                                {"loss_threshold", c.ransac.loss_threshold}}},
        {"master_seed", c.master_seed}};
    j["n_trials"] = report.n_trials;
    j["detections"] = report.detections;
    j["detection_rate"] = report.detection_rate;
    j["mean_trajectory_error"] = report.mean_trajectory_error;
    j["std_trajectory_error"] = report.std_trajectory_error;
    j["mean_coverage"] = report.mean_coverage;
    j["mean_frame_time"] = report.mean_frame_time;
    return j.dump(2);
}

} // namespace occult
