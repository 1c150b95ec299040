#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pathforge/cli_io.hpp"
#include "pathforge/error.hpp"

namespace pathforge::io {

namespace {

namespace fs = std::filesystem;

std::string trajectory_text(const discretize::Trajectory& traj) {
    std::ostringstream ss;
    write_trajectory_csv(ss, traj);
    return ss.str();
}

std::string trace_text(const sim::SimTrace& trace) {
    std::ostringstream ss;
    sim::write_trace_csv(ss, trace);
    return ss.str();
}

// --config wins, then $PATHFORGE_CONFIG, then built-in defaults.
RunConfig load_config(const std::string& flag_value) {
    std::string path = flag_value;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
            path = env;
        }
    }
    if (path.empty()) {
        return RunConfig{};
    }
    return parse_run_config(read_text_file(path), fs::path(path).parent_path());
}

geometry::Vec3 to_vec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

struct CalibrateArgs {
    std::string points_file;
    std::vector<double> a, b, c;
    std::string out = "frame.json";
};

struct DiscretizeArgs {
    std::string spec;
    std::string frame;
    std::string out = "trajectory.csv";
};

struct SimulateArgs {
    std::string spec;
    std::string trajectory;
    std::string frame;
    std::string config;
    std::string out_dir = ".";
    std::string open_name = "open.csv";
    std::string closed_name = "closed.csv";
};

struct ErrorsArgs {
    double alpha_deg = 90.0;
    std::size_t sections = 1;
    std::size_t samples = 10;
    std::string out;
};

PathSpec load_spec(const std::string& spec_path, const std::string& frame_path) {
    PathSpec spec = parse_path_spec(read_text_file(spec_path));
    if (!frame_path.empty()) {
        if (spec.frame) {
            throw Error(ErrorCode::ValidationError, "spec already carries a frame; drop --frame or the spec's frame");
        }
        spec.frame = parse_frame_json(read_text_file(frame_path));
        apply_frame(spec, *spec.frame);
    }
    return spec;
}

void run_calibrate(const CalibrateArgs& args, std::ostream& out) {
    CalibrationPoints pts;
    if (!args.points_file.empty()) {
        if (!args.a.empty() || !args.b.empty() || !args.c.empty()) {
            throw Error(ErrorCode::ValidationError, "use either --points or --a/--b/--c");
        }
        pts = parse_calibration_points(read_text_file(args.points_file));
    } else {
        if (args.a.size() != 3 || args.b.size() != 3 || args.c.size() != 3) {
            throw Error(ErrorCode::ValidationError, "calibrate needs --points or all of --a, --b, --c");
        }
        pts = {to_vec3(args.a), to_vec3(args.b), to_vec3(args.c)};
    }
    const geometry::FrameTransform frame = geometry::frame_from_three_points(pts.a, pts.b, pts.c);
    write_file_atomic(args.out, frame_to_json(pts, frame));
    out << "wrote " << args.out << '\n';
}

void run_discretize(const DiscretizeArgs& args, std::ostream& out) {
    const discretize::Trajectory traj = discretize_path(load_spec(args.spec, args.frame));
    write_file_atomic(args.out, trajectory_text(traj));
    out << "wrote " << args.out << " (" << traj.samples.size() << " poses)\n";
}

void run_simulate(const SimulateArgs& args, std::ostream& out) {
    if (args.spec.empty() == args.trajectory.empty()) {
        throw Error(ErrorCode::ValidationError, "simulate needs exactly one of --spec or --trajectory");
    }
    if (!args.frame.empty() && args.spec.empty()) {
        throw Error(ErrorCode::ValidationError, "--frame applies to --spec only");
    }
    const RunConfig cfg = load_config(args.config);
    const discretize::Trajectory path = args.spec.empty()
                                            ? parse_trajectory_csv(read_text_file(args.trajectory))
                                            : discretize_path(load_spec(args.spec, args.frame));
    const sim::SurfaceModel surface = surface_for(cfg);

    const sim::SimTrace open = sim::run_open_loop(path, surface);
    const sim::SimTrace closed = sim::run_force_controlled(path, surface, cfg.controller(), cfg.f_setpoint);

    const fs::path dir = args.out_dir;
    fs::create_directories(dir);
    write_file_atomic(dir / args.open_name, trace_text(open));
    write_file_atomic(dir / args.closed_name, trace_text(closed));

    const sim::TraceSummary so = sim::summarize(open);
    const sim::TraceSummary sc = sim::summarize(closed);
    out << "steps " << path.samples.size() << '\n'
        << "open:   peak " << so.peak_force << " N, contact-loss steps " << so.contact_loss_steps << ", aborts "
        << so.aborts << '\n'
        << "closed: peak " << sc.peak_force << " N, contact-loss steps " << sc.contact_loss_steps << ", aborts "
        << sc.aborts << '\n';
}

void run_errors(const ErrorsArgs& args, std::ostream& out) {
    const auto rows = nagata_error_table(args.alpha_deg, args.sections, args.samples);
    std::ostringstream ss;
    write_error_table_csv(ss, rows);
    if (args.out.empty()) {
        out << ss.str();
    } else {
        write_file_atomic(args.out, ss.str());
        out << "wrote " << args.out << '\n';
    }
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robot path discretization and fuzzy force-control simulation"};
    app.name("pathforge");
    app.require_subcommand(1);

    CalibrateArgs cal;
    CLI::App* calibrate = app.add_subcommand("calibrate", "Build a frame from three taught points");
    calibrate->add_option("--points", cal.points_file, "JSON file with a, b, c (origin, +x point, xOy point)");
    calibrate->add_option("--a", cal.a, "Frame origin x,y,z")->expected(3)->delimiter(',');
    calibrate->add_option("--b", cal.b, "Point on the +x axis x,y,z")->expected(3)->delimiter(',');
    calibrate->add_option("--c", cal.c, "Point in the +xOy quadrant x,y,z")->expected(3)->delimiter(',');
    calibrate->add_option("--out", cal.out, "Frame file to write")->capture_default_str();

    DiscretizeArgs dis;
    CLI::App* discretize_cmd = app.add_subcommand("discretize", "Discretize a path spec into a pose CSV");
    discretize_cmd->add_option("--spec", dis.spec, "Path spec JSON")->required();
    discretize_cmd->add_option("--frame", dis.frame, "Frame file from `calibrate`; waypoints are re-expressed in it");
    discretize_cmd->add_option("--out", dis.out, "Trajectory CSV to write")->capture_default_str();

    SimulateArgs simargs;
    CLI::App* simulate = app.add_subcommand("simulate", "Run open- and closed-loop contact simulations");
    simulate->add_option("--spec", simargs.spec, "Path spec JSON");
    simulate->add_option("--trajectory", simargs.trajectory, "Trajectory CSV from `discretize`");
    simulate->add_option("--frame", simargs.frame, "Frame file applied to --spec");
    simulate->add_option("--config", simargs.config,
                         std::string("Run config JSON (default: $") + kConfigEnvVar + ", then built-in defaults)");
    simulate->add_option("--out-dir", simargs.out_dir, "Directory for the trace files")->capture_default_str();
    simulate->add_option("--open-out", simargs.open_name, "Open-loop trace file name")->capture_default_str();
    simulate->add_option("--closed-out", simargs.closed_name, "Closed-loop trace file name")->capture_default_str();

    ErrorsArgs errargs;
    CLI::App* errors = app.add_subcommand("errors", "Tabulate Nagata curve deviation from a circular arc");
    errors->add_option("--alpha", errargs.alpha_deg, "Total arc angle in degrees")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 360.0));
    errors->add_option("--sections", errargs.sections, "Number of equal sections")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    errors->add_option("--samples", errargs.samples, "Intervals per section")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    errors->add_option("--out", errargs.out, "CSV file to write (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (calibrate->parsed()) {
            run_calibrate(cal, out);
        } else if (discretize_cmd->parsed()) {
            run_discretize(dis, out);
        } else if (simulate->parsed()) {
            run_simulate(simargs, out);
        } else if (errors->parsed()) {
            run_errors(errargs, out);
        }
    } catch (const Error& e) {
        err << "pathforge: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "pathforge: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace pathforge::io
