#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathforge/contact_sim.hpp"
#include "pathforge/discretize.hpp"
#include "pathforge/fuzzy_control.hpp"
#include "pathforge/geometry.hpp"

namespace pathforge::io {

inline constexpr int kFormatVersion = 1;

/// Environment variable naming a default run configuration file.
inline constexpr const char* kConfigEnvVar = "PATHFORGE_CONFIG";

enum class PathKind { Linear, Circular, Nagata };

std::string_view to_string(PathKind kind);

struct CalibrationPoints {
    geometry::Vec3 a;
    geometry::Vec3 b;
    geometry::Vec3 c;
};

struct PathSpec {
    PathKind kind = PathKind::Linear;
    /// linear: start, end; circular: start, via, end; nagata: centre, start, via, end.
    std::vector<geometry::Vec3> waypoints;
    geometry::UnitQuaternion start_orientation;
    geometry::UnitQuaternion end_orientation;
    /// k for linear paths, l_0 otherwise (mm).
    double step = 0.0;
    std::optional<CalibrationPoints> frame;
};

/// Number of waypoints each path kind takes.
std::size_t waypoint_count(PathKind kind);

/**
 * Parses a JSON path document. When a calibration frame is present, waypoints
 * and orientations are re-expressed in that frame.
 *
 * Throws ParseError (with line and column) on malformed JSON or wrongly typed
 * fields and ValidationError when the content is inconsistent.
 */
PathSpec parse_path_spec(std::string_view text);

/// Re-expresses the spec's waypoints and orientations in the frame taught by `points`.
void apply_frame(PathSpec& spec, const CalibrationPoints& points);

/// Dispatches to the discretizer for the spec's kind and attaches Slerp orientations.
discretize::Trajectory discretize_path(const PathSpec& spec);

enum class RuleTableChoice { Published, Symmetrized };

struct RunConfig {
    fuzzy::FuzzyPIGains gains{0.02, 0.02, 0.5};
    double f_setpoint = 40.0;
    double f_max = 200.0;
    double k_s = 50.0;
    fuzzy::Selection selection{false, false, true, false, false, false};
    RuleTableChoice rule_table = RuleTableChoice::Published;
    /// Surface profile CSV; empty means a flat surface at height 0.
    std::filesystem::path surface_fixture;

    /// Throws ValidationError on non-positive gains, stiffness, or f_max <= f_setpoint.
    void validate() const;
    fuzzy::FuzzyPIState controller() const;
};

/// Relative fixture paths are resolved against `base_dir`.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads a "s,h" profile CSV.
sim::SurfaceModel load_surface(const std::filesystem::path& csv, double k_s, double f_max);
sim::SurfaceModel parse_surface_csv(std::string_view text, double k_s, double f_max);
sim::SurfaceModel surface_for(const RunConfig& config);

inline constexpr std::string_view kTrajectoryHeader = "index,x,y,z,qw,qx,qy,qz";

void write_trajectory_csv(std::ostream& out, const discretize::Trajectory& traj);
discretize::Trajectory parse_trajectory_csv(std::string_view text);

std::string frame_to_json(const CalibrationPoints& points, const geometry::FrameTransform& frame);
/// Reads the calibration points back from a frame document.
CalibrationPoints parse_frame_json(std::string_view text);

CalibrationPoints parse_calibration_points(std::string_view text);

/// One sample of the Nagata-versus-arc comparison.
struct NagataErrorRow {
    std::size_t section = 0;
    double eta = 0.0;
    /// Angular position of the generated point as a percentage of the section angle.
    double angle_pct = 0.0;
    /// (|P(eta) - centre| - r) / r, percent.
    double radial_error_pct = 0.0;
    /// |P(eta) - arc point at the same angle fraction eta| / r, percent.
    double parametric_error_pct = 0.0;
};

/// Splits an arc of `alpha_deg` on the unit circle into `sections` Nagata
/// sections and samples each at `samples` + 1 evenly spaced eta values.
std::vector<NagataErrorRow> nagata_error_table(double alpha_deg, std::size_t sections, std::size_t samples);

inline constexpr std::string_view kErrorTableHeader =
    "section,eta,angle_pct,radial_error_pct,parametric_error_pct";
void write_error_table_csv(std::ostream& out, const std::vector<NagataErrorRow>& rows);

/**
 * Entry point behind the `pathforge` executable. Subcommands: calibrate,
 * discretize, simulate, errors. Returns the process exit status; messages go
 * to `out` / `err`.
 */
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace pathforge::io
