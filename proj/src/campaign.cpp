// campaign.cpp - Trial execution, scoring, and density calibration

#include "occult/campaign.hpp"

#include "occult/errors.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace occult {

double trajectory_error(const TrajectorySpec& trajectory,
                        const LineModel& model) {
    double sum_sq = 0.0;
    for (int i = 0; i < trajectory.total_frames; ++i) {
        const Vec2 p = object_position(trajectory, i);
        const double d = (p.x - model.point.x) * model.direction.y -
                         (p.y - model.point.y) * model.direction.x;
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / trajectory.total_frames);
}

double occlusion_coverage(const TrajectorySpec& trajectory,
                          const StarCatalog& catalog) {
    // Stars bucketed by integer-pixel x so each frame probes only the
    // columns the occluder disc can reach.
    constexpr int kBucketWidth = 8;
    const int bucket_count = catalog.width / kBucketWidth + 1;
    std::vector<std::vector<std::pair<int, int>>> buckets(
        static_cast<std::size_t>(bucket_count));
    for (const Star& star : catalog.stars) {
        const int px = static_cast<int>(round_pixel(star.x));
        const int py = static_cast<int>(round_pixel(star.y));
        buckets[static_cast<std::size_t>(px / kBucketWidth)].emplace_back(px,
                                                                          py);
    }
    const double radius = trajectory.occluder_radius;
    const double r2 = radius * radius;
    int covered = 0;
    for (int i = 0; i < trajectory.total_frames; ++i) {
        const Vec2 c = object_position(trajectory, i);
        const int b_lo = std::max(
            0, static_cast<int>(std::floor((c.x - radius) / kBucketWidth)));
        const int b_hi = std::min(
            bucket_count - 1,
            static_cast<int>(std::floor((c.x + radius) / kBucketWidth)));
        bool hit = false;
        for (int b = b_lo; b <= b_hi && !hit; ++b) {
            for (const auto& [px, py] : buckets[static_cast<std::size_t>(b)]) {
                const double dx = px - c.x;
                const double dy = py - c.y;
                if (dx * dx + dy * dy <= r2) {
                    hit = true;
                    break;
                }
            }
        }
        if (hit) ++covered;
    }
    return static_cast<double>(covered) / trajectory.total_frames;
}

TrajectorySpec trial_trajectory(const TrialConfig& config, int trial_index) {
    const std::uint64_t trial_seed = derive_seed(
        config.master_seed, streams::kDeriveTrial,
        static_cast<std::uint64_t>(trial_index));
    TrajectorySpec traj =
        generate_trajectory(trial_seed, config.width, config.height);
    traj.occluder_radius = config.occluder_radius;
    traj.total_frames = config.total_frames;
    return traj;
}

StarCatalog campaign_catalog(const TrialConfig& config) {
    return generate_catalog(
        derive_seed(config.master_seed, streams::kDeriveCatalog, 0),
        config.star_count, config.width, config.height, config.magnitude_min,
        config.magnitude_max);
}

namespace {

void validate_config(const TrialConfig& config) {
    if (config.buffer_depth <= config.frame_offset) {
        throw std::invalid_argument("campaign: buffer depth must exceed k");
    }
    if (config.total_frames < 2) {
        throw std::invalid_argument("campaign: total_frames < 2");
    }
}

TrialRecord run_trial_with_catalog(const TrialConfig& config, int trial_index,
                                   const StarCatalog& catalog) {
    const std::uint64_t trial_seed = derive_seed(
        config.master_seed, streams::kDeriveTrial,
        static_cast<std::uint64_t>(trial_index));
    const TrajectorySpec traj = trial_trajectory(config, trial_index);
    const NoiseParams noise{config.noise_sigma,
                            derive_seed(trial_seed, streams::kDeriveNoise, 0)};
    RansacParams ransac = config.ransac;
    ransac.seed = derive_seed(trial_seed, streams::kDeriveRansac, 0);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Frame> frames = render_sequence(catalog, traj, noise);
    const DetectionResult det = process_sequence(
        frames, config.frame_offset, config.buffer_depth, ransac);
    const auto t1 = std::chrono::steady_clock::now();

    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.detected = det.detected;
    rec.loss = det.loss;
    rec.inliers = det.inlier_count;
    if (det.detected && det.model) {
        rec.trajectory_error = trajectory_error(traj, *det.model);
    }
    rec.occlusion_coverage = occlusion_coverage(traj, catalog);
    rec.per_frame_time = std::chrono::duration<double>(t1 - t0).count() /
                         traj.total_frames;
    return rec;
}

} // namespace

TrialRecord run_trial(const TrialConfig& config, int trial_index) {
    validate_config(config);
    if (trial_index < 0) {
        throw std::invalid_argument("run_trial: negative trial index");
    }
    const StarCatalog catalog = campaign_catalog(config);
    return run_trial_with_catalog(config, trial_index, catalog);
}

CampaignReport run_campaign(const TrialConfig& config, int trial_count,
                            int workers) {
    validate_config(config);
    if (trial_count < 1) {
        throw std::invalid_argument("run_campaign: trial_count < 1");
    }
    if (workers < 1) {
        throw std::invalid_argument("run_campaign: workers < 1");
    }

    CampaignReport report;
    report.config = config;
    report.trials.resize(static_cast<std::size_t>(trial_count));
    const StarCatalog catalog = campaign_catalog(config);

    const int thread_count = std::min(workers, trial_count);
    if (thread_count <= 1) {
        for (int i = 0; i < trial_count; ++i) {
            report.trials[static_cast<std::size_t>(i)] =
                run_trial_with_catalog(config, i, catalog);
        }
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int w = 0; w < thread_count; ++w) {
            pool.emplace_back([&]() {
                try {
                    for (;;) {
                        const int i = next.fetch_add(1);
                        if (i >= trial_count) break;
                        report.trials[static_cast<std::size_t>(i)] =
                            run_trial_with_catalog(config, i, catalog);
                    }
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    report.n_trials = trial_count;
    double err_sum = 0.0, err_sq_sum = 0.0;
    int err_count = 0;
    double coverage_sum = 0.0, time_sum = 0.0;
    for (const TrialRecord& rec : report.trials) {
        if (rec.detected) ++report.detections;
        if (rec.trajectory_error) {
            err_sum += *rec.trajectory_error;
            err_sq_sum += *rec.trajectory_error * *rec.trajectory_error;
            ++err_count;
        }
        coverage_sum += rec.occlusion_coverage;
        time_sum += rec.per_frame_time;
    }
    report.detection_rate =
        static_cast<double>(report.detections) / trial_count;
    if (err_count > 0) {
        report.mean_trajectory_error = err_sum / err_count;
        const double variance =
            err_sq_sum / err_count -
            report.mean_trajectory_error * report.mean_trajectory_error;
        report.std_trajectory_error = std::sqrt(std::max(0.0, variance));
    }
    report.mean_coverage = coverage_sum / trial_count;
    report.mean_frame_time = time_sum / trial_count;
    return report;
}

int calibrate_density(double target_coverage, const TrialConfig& config) {
    if (!(target_coverage > 0.0) || !(target_coverage < 1.0)) {
        throw std::invalid_argument(
            "calibrate_density: target must lie in (0, 1)");
    }
    validate_config(config);
    constexpr double kTolerance = 0.05;
    constexpr int kTrials = 50;

    const auto mean_coverage = [&](int star_count) {
        TrialConfig probe = config;
        probe.star_count = star_count;
        const StarCatalog catalog = campaign_catalog(probe);
        double sum = 0.0;
        for (int t = 0; t < kTrials; ++t) {
            sum += occlusion_coverage(trial_trajectory(probe, t), catalog);
        }
        return sum / kTrials;
    };

    const std::size_t cells = static_cast<std::size_t>(config.width) *
                              static_cast<std::size_t>(config.height);
    int lo = 1;
    int hi = static_cast<int>(
        std::min<std::size_t>(cells, 1000000));
    const double cov_lo = mean_coverage(lo);
    if (std::fabs(cov_lo - target_coverage) <= kTolerance) return lo;
    const double cov_hi = mean_coverage(hi);
    if (std::fabs(cov_hi - target_coverage) <= kTolerance) return hi;
    if (cov_lo > target_coverage || cov_hi < target_coverage) {
        throw CalibrationFailureError(
            "calibrate_density: target coverage outside the reachable range");
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        const double cov = mean_coverage(mid);
        if (std::fabs(cov - target_coverage) <= kTolerance) return mid;
        if (cov < target_coverage) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw CalibrationFailureError(
        "calibrate_density: bisection exhausted without reaching the target");
}

} // namespace occult
