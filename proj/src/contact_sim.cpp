#include "pathforge/contact_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pathforge/error.hpp"
#include "pathforge/number_format.hpp"

namespace pathforge::sim {

namespace {

constexpr std::size_t kNormalAxis = 2;

struct Measurement {
    double z_actual;
    double force;
};

// Shared stepping loop. `measure` returns the tool height and force at step i;
// `correct` consumes a measurement and returns the displacement to apply next.
template <typename Measure, typename Correct>
SimTrace run(const discretize::Trajectory& path, const SurfaceModel& surface, Measure&& measure,
             Correct&& correct) {
    const std::vector<double> s = arc_lengths(path);
    SimTrace trace;
    trace.steps.reserve(path.samples.size());
    bool stopped = false;
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        SimStep step;
        step.step = i;
        step.s = s[i];
        step.commanded = path.samples[i];
        step.z_cmd = path.samples[i].position.z();

        const Measurement m = measure(i, s[i], step.z_cmd);
        if (stopped && m.force >= surface.f_max()) {
            step.status = StepStatus::Suspended;
            step.z_actual = std::max(m.z_actual, surface.height(s[i]));
            step.force = 0.0;
        } else {
            stopped = false;
            step.z_actual = m.z_actual;
            step.force = m.force;
            if (m.force >= surface.f_max()) {
                step.status = StepStatus::ExcessiveForce;
                stopped = true;
            } else {
                step.du = correct(m);
            }
        }
        step.contact = step.force > 0.0;
        trace.steps.push_back(step);
    }
    return trace;
}

}  // namespace

SurfaceModel::SurfaceModel(std::vector<std::pair<double, double>> profile, double stiffness, double f_max)
    : profile_(std::move(profile)), stiffness_(stiffness), f_max_(f_max) {
    if (profile_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "surface profile is empty");
    }
    for (std::size_t i = 0; i < profile_.size(); ++i) {
        if (!std::isfinite(profile_[i].first) || !std::isfinite(profile_[i].second)) {
            throw Error(ErrorCode::InvalidArgument, "surface profile has non-finite values");
        }
        if (i > 0 && !(profile_[i].first > profile_[i - 1].first)) {
            throw Error(ErrorCode::InvalidArgument, "surface profile arc lengths must increase strictly");
        }
    }
    if (!(stiffness_ > 0.0) || !std::isfinite(stiffness_)) {
        throw Error(ErrorCode::InvalidArgument, "contact stiffness must be positive");
    }
    if (!(f_max_ > 0.0) || !std::isfinite(f_max_)) {
        throw Error(ErrorCode::InvalidArgument, "force limit must be positive");
    }
}

SurfaceModel SurfaceModel::flat(double height, double stiffness, double f_max) {
    return SurfaceModel({{0.0, height}}, stiffness, f_max);
}

double SurfaceModel::height(double s) const {
    if (s <= profile_.front().first) {
        return profile_.front().second;
    }
    if (s >= profile_.back().first) {
        return profile_.back().second;
    }
    const auto hi = std::upper_bound(profile_.begin(), profile_.end(), s,
                                     [](double v, const auto& bp) { return v < bp.first; });
    const auto lo = hi - 1;
    const double t = (s - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double contact_force(const SurfaceModel& surface, double s, double z_tool) {
    const double penetration = surface.height(s) - z_tool;
    return penetration > 0.0 ? surface.stiffness() * penetration : 0.0;
}

std::string_view to_string(StepStatus status) {
    switch (status) {
        case StepStatus::Ok: return "ok";
        case StepStatus::ExcessiveForce: return "excessive_force";
        case StepStatus::Suspended: return "suspended";
    }
    return "unknown";
}

TraceSummary summarize(const SimTrace& trace) {
    TraceSummary sum;
    for (const SimStep& st : trace.steps) {
        sum.peak_force = std::max(sum.peak_force, st.force);
        switch (st.status) {
            case StepStatus::Ok:
                if (!st.contact) {
                    ++sum.contact_loss_steps;
                }
                break;
            case StepStatus::ExcessiveForce: ++sum.aborts; break;
            case StepStatus::Suspended: ++sum.suspended_steps; break;
        }
    }
    return sum;
}

std::vector<double> arc_lengths(const discretize::Trajectory& path) {
    std::vector<double> s;
    s.reserve(path.samples.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        if (i > 0) {
            acc += (path.samples[i].position - path.samples[i - 1].position).norm();
        }
        s.push_back(acc);
    }
    return s;
}

SimTrace run_open_loop(const discretize::Trajectory& path, const SurfaceModel& surface) {
    return run(
        path, surface,
        [&](std::size_t, double s, double z_cmd) { return Measurement{z_cmd, contact_force(surface, s, z_cmd)}; },
        [](const Measurement&) { return 0.0; });
}

SimTrace run_force_controlled(const discretize::Trajectory& path, const SurfaceModel& surface,
                              const fuzzy::FuzzyPIState& controller, double f_setpoint) {
    const fuzzy::Selection& sel = controller.params.selection;
    if (!sel[kNormalAxis]) {
        throw Error(ErrorCode::InvalidArgument, "force control must be selected on the surface normal (z) axis");
    }
    controller.params.validate();

    fuzzy::FuzzyPIState state = controller;
    fuzzy::Wrench desired = fuzzy::Wrench::Zero();
    desired[kNormalAxis] = f_setpoint;

    return run(
        path, surface,
        [&](std::size_t, double s, double z_cmd) {
            const double z = z_cmd - state.accumulated[kNormalAxis];
            return Measurement{z, contact_force(surface, s, z)};
        },
        [&](const Measurement& m) {
            fuzzy::Wrench actual = fuzzy::Wrench::Zero();
            actual[kNormalAxis] = m.force;
            fuzzy::FuzzyPIStepResult r = fuzzy::fuzzy_pi_step(state, desired, actual);
            state = std::move(r.next);
            return r.delta[kNormalAxis];
        });
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
    out << "# format_version=1\n" << kTraceHeader << '\n';
    for (const SimStep& st : trace.steps) {
        out << st.step << ',' << format_number(st.s) << ',' << format_number(st.z_cmd) << ','
            << format_number(st.z_actual) << ',' << format_number(st.force) << ',' << format_number(st.du) << ','
            << (st.contact ? 1 : 0) << ',' << to_string(st.status) << '\n';
    }
}

}  // namespace pathforge::sim
