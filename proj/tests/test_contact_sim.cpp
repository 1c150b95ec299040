#include <doctest.h>

#include <sstream>

#include "pathforge/contact_sim.hpp"
#include "pathforge/error.hpp"

using namespace pathforge;
using namespace pathforge::sim;
using geometry::Vec3;

namespace {

discretize::Trajectory flat_line(double z, double length = 100.0) {
    return discretize::attach_orientations(discretize::linear_discretize({0, 0, z}, {length, 0, z}, 1.0), {}, {}, 1.0);
}

fuzzy::FuzzyPIState default_controller() {
    fuzzy::FuzzyPIState s;
    s.params.gains = {0.02, 0.02, 0.5};
    s.params.selection = {false, false, true, false, false, false};
    return s;
}

}  // namespace

TEST_CASE("contact_force examples") {
    const SurfaceModel flat = SurfaceModel::flat(2.0, 50.0, 200.0);
    CHECK(contact_force(flat, 10.0, 2.0) == 0.0);
    CHECK(contact_force(flat, 10.0, 1.0) == 50.0);
    CHECK(contact_force(flat, 10.0, 7.0) == 0.0);
}

TEST_CASE("surface profile interpolates and clamps") {
    const SurfaceModel s({{0, 0}, {10, 1}, {20, -1}}, 50, 200);
    CHECK(s.height(-5) == 0.0);
    CHECK(s.height(5) == doctest::Approx(0.5));
    CHECK(s.height(15) == doctest::Approx(0.0));
    CHECK(s.height(25) == -1.0);
    CHECK_THROWS_AS(SurfaceModel({{0, 0}, {0, 1}}, 50, 200), Error);
    CHECK_THROWS_AS(SurfaceModel({}, 50, 200), Error);
    CHECK_THROWS_AS(SurfaceModel::flat(0, 0, 200), Error);
}

TEST_CASE("open loop on a flat surface at the nominal depth gives a constant force") {
    const SimTrace t = run_open_loop(flat_line(-0.8), SurfaceModel::flat(0, 50, 200));
    REQUIRE(t.steps.size() == 101);
    for (const SimStep& st : t.steps) {
        CHECK(st.force == doctest::Approx(40.0).epsilon(1e-12));
        CHECK(st.contact);
        CHECK(st.status == StepStatus::Ok);
        CHECK(st.du == 0.0);
    }
}

TEST_CASE("open loop sees a ridge as a force spike and a valley as contact loss") {
    const double amplitude = 1.5;
    const SurfaceModel ridge({{0, 0}, {40, 0}, {50, amplitude}, {60, 0}}, 50, 200);
    const SimTrace t = run_open_loop(flat_line(-0.8), ridge);
    CHECK(summarize(t).peak_force == doctest::Approx(40.0 + 50.0 * amplitude));
    CHECK(t.steps[50].force == doctest::Approx(40.0 + 50.0 * amplitude));

    const SurfaceModel valley({{0, 0}, {40, 0}, {45, -2}, {55, -2}, {60, 0}}, 50, 200);
    const SimTrace v = run_open_loop(flat_line(-0.8), valley);
    for (int i = 45; i <= 55; ++i) {
        CHECK_FALSE(v.steps[i].contact);
        CHECK(v.steps[i].force == 0.0);
    }
}

TEST_CASE("open loop stops on excessive force and resumes once safe") {
    const SurfaceModel bump({{0, 0}, {40, 0}, {41, 4}, {45, 4}, {46, 0}}, 50, 200);
    const SimTrace t = run_open_loop(flat_line(-0.8), bump);
    CHECK(t.steps[41].status == StepStatus::ExcessiveForce);
    for (int i = 42; i <= 45; ++i) {
        CHECK(t.steps[i].status == StepStatus::Suspended);
        CHECK(t.steps[i].force == 0.0);
        CHECK_FALSE(t.steps[i].contact);
    }
    CHECK(t.steps[46].status == StepStatus::Ok);
    CHECK(t.steps[46].force == doctest::Approx(40.0));
    const TraceSummary s = summarize(t);
    CHECK(s.aborts == 1);
    CHECK(s.suspended_steps == 4);
}

TEST_CASE("closed loop holds the set-point when started on it") {
    const SimTrace t = run_force_controlled(flat_line(-0.8), SurfaceModel::flat(0, 50, 200), default_controller(), 40.0);
    for (const SimStep& st : t.steps) {
        CHECK(st.force == doctest::Approx(40.0).epsilon(1e-12));
        CHECK(st.du == 0.0);
    }
}

TEST_CASE("closed loop converges monotonically from a depth error") {
    // Output quantum is K_x / 3 mm; start one quantum too shallow and too deep.
    const double quantum = 0.5 / 3.0;
    for (double offset : {quantum, -quantum, 3 * quantum, -3 * quantum}) {
        CAPTURE(offset);
        const SimTrace t =
            run_force_controlled(flat_line(-0.8 + offset), SurfaceModel::flat(0, 50, 200), default_controller(), 40.0);
        const double initial_side = t.steps[0].force > 40.0 ? 1.0 : -1.0;
        double prev_err = std::abs(t.steps[0].force - 40.0);
        for (const SimStep& st : t.steps) {
            const double err = std::abs(st.force - 40.0);
            CHECK(err <= prev_err + 1e-9);
            // Past the set-point by at most one output quantum of force.
            CHECK(-initial_side * (st.force - 40.0) <= 50.0 * quantum + 1e-9);
            prev_err = err;
        }
        CHECK(std::abs(t.steps.back().force - 40.0) <= 1e-6);
    }
}

TEST_CASE("closed loop regains contact after a step down in the surface") {
    const SurfaceModel step({{0, 0}, {50, 0}, {50.01, -1.5}}, 50, 200);
    const SimTrace t = run_force_controlled(flat_line(-0.8), step, default_controller(), 40.0);
    const SimTrace open = run_open_loop(flat_line(-0.8), step);
    CHECK_FALSE(t.steps[51].contact);
    std::size_t lost = 0;
    for (std::size_t i = 51; i < t.steps.size(); ++i) {
        lost += t.steps[i].contact ? 0 : 1;
        CHECK(t.steps[i].force < 200.0);
    }
    CHECK(lost < 10);
    CHECK(t.steps.back().force == doctest::Approx(40.0).epsilon(1e-6));
    CHECK(summarize(open).contact_loss_steps == 50);
}

TEST_CASE("closed loop requires force control on the normal axis") {
    fuzzy::FuzzyPIState c = default_controller();
    c.params.selection = {true, false, false, false, false, false};
    CHECK_THROWS_AS(run_force_controlled(flat_line(0), SurfaceModel::flat(0, 50, 200), c, 40.0), Error);
}

TEST_CASE("simulation is deterministic and traces keep force/contact consistent") {
    const SurfaceModel s({{0, 0}, {20, 1}, {40, -2}, {60, 3}, {80, 0}}, 50, 200);
    const SimTrace a = run_force_controlled(flat_line(-0.8), s, default_controller(), 40.0);
    const SimTrace b = run_force_controlled(flat_line(-0.8), s, default_controller(), 40.0);
    std::ostringstream sa, sb;
    write_trace_csv(sa, a);
    write_trace_csv(sb, b);
    CHECK(sa.str() == sb.str());
    for (const SimStep& st : a.steps) {
        CHECK(st.force >= 0.0);
        CHECK(st.contact == (st.force > 0.0));
    }
}

TEST_CASE("trace CSV layout") {
    const SimTrace t = run_open_loop(flat_line(-0.8, 2.0), SurfaceModel::flat(0, 50, 200));
    std::ostringstream ss;
    write_trace_csv(ss, t);
    CHECK(ss.str() ==
          "# format_version=1\n"
          "step,s,z_cmd,z_actual,force,du,contact,status\n"
          "0,0,-0.8,-0.8,40,0,1,ok\n"
          "1,1,-0.8,-0.8,40,0,1,ok\n"
          "2,2,-0.8,-0.8,40,0,1,ok\n");
}
