#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "pathforge/discretize.hpp"
#include "pathforge/fuzzy_control.hpp"

namespace pathforge::sim {

/// Stiff contact with an irregular work-piece. The surface height is a
/// piecewise-linear function of arc length along the path; the surface
/// normal is +z and the tool presses down along -z.
class SurfaceModel {
public:
    /// `profile` holds (s, h) breakpoints with strictly increasing s. Heights are
    /// held constant beyond the first and last breakpoints.
    /// Throws InvalidArgument on an empty or unsorted profile, k_s <= 0 or f_max <= 0.
    SurfaceModel(std::vector<std::pair<double, double>> profile, double stiffness, double f_max);

    static SurfaceModel flat(double height, double stiffness, double f_max);

    double height(double s) const;
    double stiffness() const { return stiffness_; }
    double f_max() const { return f_max_; }
    const std::vector<std::pair<double, double>>& profile() const { return profile_; }

private:
    std::vector<std::pair<double, double>> profile_;
    double stiffness_;
    double f_max_;
};

/// Spring contact force k_s * max(0, h(s) - z_tool), N.
double contact_force(const SurfaceModel& surface, double s, double z_tool);

enum class StepStatus {
    Ok,
    /// Force reached f_max at this step; the run is stopped.
    ExcessiveForce,
    /// Still stopped: the tool is held off the surface until the nominal pose is safe again.
    Suspended,
};

std::string_view to_string(StepStatus status);

struct SimStep {
    std::size_t step = 0;
    double s = 0.0;
    geometry::Pose commanded;
    double z_cmd = 0.0;
    double z_actual = 0.0;
    double force = 0.0;
    double du = 0.0;
    bool contact = false;
    StepStatus status = StepStatus::Ok;
};

struct SimTrace {
    std::vector<SimStep> steps;
};

struct TraceSummary {
    double peak_force = 0.0;
    /// Steps where the tool was running (not stopped) and out of contact.
    std::size_t contact_loss_steps = 0;
    std::size_t aborts = 0;
    std::size_t suspended_steps = 0;
};

TraceSummary summarize(const SimTrace& trace);

/// Cumulative arc length at each trajectory sample, starting at 0.
std::vector<double> arc_lengths(const discretize::Trajectory& path);

/// Replays the nominal path with no correction.
SimTrace run_open_loop(const discretize::Trajectory& path, const SurfaceModel& surface);

/**
 * Replays the path with the force loop closed on the z axis. Each step measures
 * the contact force at the corrected tool height, runs one controller period
 * and applies the returned displacement before the next sample. Positive
 * displacement pushes the tool into the surface.
 *
 * Throws InvalidArgument unless the controller selects the z force axis.
 */
SimTrace run_force_controlled(const discretize::Trajectory& path, const SurfaceModel& surface,
                              const fuzzy::FuzzyPIState& controller, double f_setpoint);

/// CSV header row for traces.
inline constexpr std::string_view kTraceHeader = "step,s,z_cmd,z_actual,force,du,contact,status";

void write_trace_csv(std::ostream& out, const SimTrace& trace);

}  // namespace pathforge::sim
