// occultscan.cpp - Command-line front end
//
// Subcommands: generate (render a synthetic transit sequence), detect (run
// the pipeline over a PGM sequence), campaign (Monte Carlo harness),
// triangulate (two-observer geometry from a planes JSON).
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error. All errors
// print a single "error: ..." line to stderr.

#include "occult/campaign.hpp"
#include "occult/detect.hpp"
#include "occult/errors.hpp"
#include "occult/pgm.hpp"
#include "occult/rng.hpp"
#include "occult/sensor.hpp"
#include "occult/serialize.hpp"
#include "occult/starfield.hpp"
#include "occult/triangulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr double kDegPerRad = 57.295779513082320876798154814105;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw occult::ParseError("cannot open for writing: " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw occult::ParseError("write failed: " + path.string());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw occult::ParseError("cannot open for reading: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw occult::ParseError("read failed: " + path.string());
    }
    return text;
}

std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%05d.pgm", index);
    return buf;
}

std::string anomalies_to_csv(const std::vector<occult::AnomalyRecord>& records) {
    std::string out = "x,y,frame\n";
    char row[64];
    for (const occult::AnomalyRecord& r : records) {
        std::snprintf(row, sizeof(row), "%d,%d,%d\n", r.x, r.y, r.frame_index);
        out += row;
    }
    return out;
}

std::vector<occult::Frame> render_trial_frames(const occult::TrialConfig& config,
                                               int trial_index,
                                               const occult::StarCatalog& catalog) {
    const std::uint64_t trial_seed =
        occult::derive_seed(config.master_seed, occult::streams::kDeriveTrial,
                            static_cast<std::uint64_t>(trial_index));
    const occult::NoiseParams noise{
        config.noise_sigma,
        occult::derive_seed(trial_seed, occult::streams::kDeriveNoise, 0)};
    return occult::render_sequence(
        catalog, occult::trial_trajectory(config, trial_index), noise);
}

int run_generate(const occult::TrialConfig& config, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const occult::StarCatalog catalog = occult::campaign_catalog(config);
    const occult::TrajectorySpec traj = occult::trial_trajectory(config, 0);
    const std::vector<occult::Frame> frames =
        render_trial_frames(config, 0, catalog);
    for (const occult::Frame& frame : frames) {
        occult::write_pgm(frame, (fs::path(out_dir) / frame_name(frame.index))
                                     .string());
    }
    write_text(fs::path(out_dir) / "catalog.csv",
               occult::catalog_to_csv(catalog));
    write_text(fs::path(out_dir) / "truth.json",
               occult::truth_to_json(traj, config.master_seed));
    std::printf("{\"frames\":%d,\"stars\":%zu,\"out\":\"%s\"}\n",
                traj.total_frames, catalog.stars.size(), out_dir.c_str());
    return 0;
}

int run_detect(const std::string& input_dir, int k, int j,
               const occult::RansacParams& params, const std::string& out_file,
               const std::string& anomalies_file) {
    std::vector<fs::path> paths;
    for (const fs::directory_entry& entry : fs::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("frame_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".pgm") {
            paths.push_back(entry.path());
        }
    }
    if (paths.empty()) {
        throw occult::ParseError("no frame_*.pgm files in " + input_dir);
    }
    std::sort(paths.begin(), paths.end());
    std::vector<occult::Frame> frames;
    frames.reserve(paths.size());
    for (const fs::path& path : paths) {
        occult::Frame frame = occult::read_pgm(path.string());
        frame.index = static_cast<int>(frames.size());
        frames.push_back(std::move(frame));
    }
    const occult::DetectionResult result =
        occult::process_sequence(frames, k, j, params);
    const std::string json = occult::detection_to_json(result);
    std::printf("%s\n", json.c_str());
    if (!out_file.empty()) {
        write_text(out_file, json + "\n");
    }
    if (!anomalies_file.empty()) {
        write_text(anomalies_file,
                   anomalies_to_csv(occult::collect_anomalies(frames, k, j)));
    }
    return 0;
}

int run_campaign_cmd(const occult::TrialConfig& config, int trials, int workers,
                     const std::string& out_dir, bool dump_frames,
                     bool dump_anomalies) {
    const occult::CampaignReport report =
        occult::run_campaign(config, trials, workers);
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "campaign.csv",
               occult::campaign_to_csv(report));
    const std::string summary = occult::campaign_summary_to_json(report);
    write_text(fs::path(out_dir) / "campaign.json", summary + "\n");
    if (dump_frames || dump_anomalies) {
        const occult::StarCatalog catalog = occult::campaign_catalog(config);
        for (int i = 0; i < trials; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "trial_%05d", i);
            const fs::path trial_dir = fs::path(out_dir) / name;
            fs::create_directories(trial_dir);
            const std::vector<occult::Frame> frames =
                render_trial_frames(config, i, catalog);
            if (dump_frames) {
                for (const occult::Frame& frame : frames) {
                    occult::write_pgm(frame,
                                      (trial_dir / frame_name(frame.index))
                                          .string());
                }
            }
            if (dump_anomalies) {
                write_text(trial_dir / "anomalies.csv",
                           anomalies_to_csv(occult::collect_anomalies(
                               frames, config.frame_offset,
                               config.buffer_depth)));
            }
        }
    }
    std::printf("%s\n", summary.c_str());
    return 0;
}

occult::Vec3 parse_vec3(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
        !j[1].is_number() || !j[2].is_number()) {
        throw occult::ParseError("triangulate: " + what +
                                 " must be an array of 3 numbers");
    }
    return occult::Vec3{j[0].get<double>(), j[1].get<double>(),
                        j[2].get<double>()};
}

occult::ViewingPlane parse_plane(const nlohmann::json& j,
                                 const std::string& what) {
    if (!j.is_object() || !j.contains("normal") || !j.contains("position")) {
        throw occult::ParseError("triangulate: " + what +
                                 " must have normal and position");
    }
    return occult::ViewingPlane{
        occult::normalize(parse_vec3(j["normal"], what + ".normal")),
        parse_vec3(j["position"], what + ".position")};
}

int run_triangulate(const std::string& input_file, const std::string& out_file) {
    const nlohmann::json input = nlohmann::json::parse(read_text(input_file));
    if (!input.is_object() || !input.contains("plane_a") ||
        !input.contains("plane_b")) {
        throw occult::ParseError(
            "triangulate: input must have plane_a and plane_b");
    }
    const occult::ViewingPlane plane_a =
        parse_plane(input["plane_a"], "plane_a");
    const occult::ViewingPlane plane_b =
        parse_plane(input["plane_b"], "plane_b");
    const occult::RadiantSolution sol =
        occult::radiant_direction(plane_a, plane_b);

    nlohmann::ordered_json out;
    out["radiant"] = {sol.direction.x, sol.direction.y, sol.direction.z};
    out["alpha_deg"] = sol.alpha * kDegPerRad;
    out["delta_deg"] = sol.delta * kDegPerRad;
    out["points"] = nlohmann::ordered_json::array();
    if (input.contains("lines_of_sight")) {
        const nlohmann::json& sights = input["lines_of_sight"];
        if (!sights.is_array()) {
            throw occult::ParseError(
                "triangulate: lines_of_sight must be an array");
        }
        for (std::size_t i = 0; i < sights.size(); ++i) {
            const occult::LineOfSight los{occult::normalize(parse_vec3(
                sights[i], "lines_of_sight[" + std::to_string(i) + "]"))};
            const occult::GeocentricPoint point =
                occult::geocentric_position(los, plane_a, plane_b);
            out["points"].push_back(
                {point.position.x, point.position.y, point.position.z});
        }
    }
    const std::string json = out.dump();
    std::printf("%s\n", json.c_str());
    if (!out_file.empty()) {
        write_text(out_file, json + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"occultscan - star-occultation transit detection toolkit"};
    app.require_subcommand(1);

    // generate ------------------------------------------------------------
    occult::TrialConfig gen_cfg;
    std::string gen_out = "out";
    CLI::App* gen = app.add_subcommand(
        "generate", "Render a synthetic transit sequence with ground truth");
    gen->add_option("--width", gen_cfg.width, "Field width in pixels")
        ->capture_default_str();
    gen->add_option("--height", gen_cfg.height, "Field height in pixels")
        ->capture_default_str();
    gen->add_option("--stars", gen_cfg.star_count, "Catalog star count")
        ->capture_default_str();
    gen->add_option("--mag-min", gen_cfg.magnitude_min, "Brightest magnitude")
        ->capture_default_str();
    gen->add_option("--mag-max", gen_cfg.magnitude_max, "Faintest magnitude")
        ->capture_default_str();
    gen->add_option("--sigma", gen_cfg.noise_sigma, "Readout noise sigma, DN")
        ->capture_default_str();
    gen->add_option("--frames", gen_cfg.total_frames, "Frames in the sequence")
        ->capture_default_str();
    gen->add_option("--radius", gen_cfg.occluder_radius,
                    "Occluder radius, pixels")
        ->capture_default_str();
    gen->add_option("--seed", gen_cfg.master_seed, "Master seed")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "Output directory")
        ->capture_default_str();

    // detect ---------------------------------------------------------------
    std::string det_dir;
    int det_k = 1;
    int det_j = 30;
    occult::RansacParams det_params;
    std::string det_out;
    std::string det_anomalies;
    CLI::App* det = app.add_subcommand(
        "detect", "Run the detection pipeline over a PGM frame sequence");
    det->add_option("input", det_dir, "Directory holding frame_*.pgm")
        ->required();
    det->add_option("--k", det_k, "Frame offset between reference and operating")
        ->capture_default_str();
    det->add_option("--j", det_j, "Anomaly buffer depth in frames")
        ->capture_default_str();
    det->add_option("--ransac-iters", det_params.max_iterations,
                    "RANSAC iteration cap")
        ->capture_default_str();
    det->add_option("--inlier-tol", det_params.inlier_tolerance,
                    "Inlier distance tolerance, pixels")
        ->capture_default_str();
    det->add_option("--min-inliers", det_params.min_inliers,
                    "Minimum inliers for a detection")
        ->capture_default_str();
    det->add_option("--loss-threshold", det_params.loss_threshold,
                    "Maximum model loss for a detection, pixels^2")
        ->capture_default_str();
    det->add_option("--seed", det_params.seed, "RANSAC sampling seed")
        ->capture_default_str();
    det->add_option("--out", det_out, "Also write the result JSON here");
    det->add_option("--dump-anomalies", det_anomalies,
                    "Write the anomaly records as CSV here");

    // campaign ---------------------------------------------------------------
    occult::TrialConfig camp_cfg;
    int camp_trials = 25;
    unsigned hardware = std::thread::hardware_concurrency();
    int camp_workers = hardware > 0 ? static_cast<int>(hardware) : 1;
    std::string camp_out = "out";
    bool camp_dump_frames = false;
    bool camp_dump_anomalies = false;
    CLI::App* camp = app.add_subcommand(
        "campaign", "Run a Monte Carlo detection campaign");
    camp->add_option("--trials", camp_trials, "Number of trials")
        ->capture_default_str();
    camp->add_option("--width", camp_cfg.width, "Field width in pixels")
        ->capture_default_str();
    camp->add_option("--height", camp_cfg.height, "Field height in pixels")
        ->capture_default_str();
    camp->add_option("--stars", camp_cfg.star_count, "Catalog star count")
        ->capture_default_str();
    camp->add_option("--mag-min", camp_cfg.magnitude_min, "Brightest magnitude")
        ->capture_default_str();
    camp->add_option("--mag-max", camp_cfg.magnitude_max, "Faintest magnitude")
        ->capture_default_str();
    camp->add_option("--sigma", camp_cfg.noise_sigma, "Readout noise sigma, DN")
        ->capture_default_str();
    camp->add_option("--frames", camp_cfg.total_frames,
                     "Frames per trial sequence")
        ->capture_default_str();
    camp->add_option("--k", camp_cfg.frame_offset,
                     "Frame offset between reference and operating")
        ->capture_default_str();
    camp->add_option("--j", camp_cfg.buffer_depth,
                     "Anomaly buffer depth in frames")
        ->capture_default_str();
    camp->add_option("--radius", camp_cfg.occluder_radius,
                     "Occluder radius, pixels")
        ->capture_default_str();
    camp->add_option("--ransac-iters", camp_cfg.ransac.max_iterations,
                     "RANSAC iteration cap")
        ->capture_default_str();
    camp->add_option("--inlier-tol", camp_cfg.ransac.inlier_tolerance,
                     "Inlier distance tolerance, pixels")
        ->capture_default_str();
    camp->add_option("--min-inliers", camp_cfg.ransac.min_inliers,
                     "Minimum inliers for a detection")
        ->capture_default_str();
    camp->add_option("--loss-threshold", camp_cfg.ransac.loss_threshold,
                     "Maximum model loss for a detection, pixels^2")
        ->capture_default_str();
    camp->add_option("--seed", camp_cfg.master_seed, "Master seed")
        ->capture_default_str();
    camp->add_option("--workers", camp_workers, "Concurrent trial workers")
        ->capture_default_str();
    camp->add_option("--out", camp_out, "Output directory")
        ->capture_default_str();
    camp->add_flag("--dump-frames", camp_dump_frames,
                   "Write each trial's frames as PGM");
    camp->add_flag("--dump-anomalies", camp_dump_anomalies,
                   "Write each trial's anomaly records as CSV");

    // triangulate ---------------------------------------------------------
    std::string tri_input;
    std::string tri_out;
    CLI::App* tri = app.add_subcommand(
        "triangulate", "Radiant and positions from a two-observer planes JSON");
    tri->add_option("input", tri_input, "Planes JSON file")->required();
    tri->add_option("--out", tri_out, "Also write the result JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (gen->parsed()) {
            return run_generate(gen_cfg, gen_out);
        }
        if (det->parsed()) {
            return run_detect(det_dir, det_k, det_j, det_params, det_out,
                              det_anomalies);
        }
        if (camp->parsed()) {
            return run_campaign_cmd(camp_cfg, camp_trials, camp_workers,
                                    camp_out, camp_dump_frames,
                                    camp_dump_anomalies);
        }
        if (tri->parsed()) {
            return run_triangulate(tri_input, tri_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
